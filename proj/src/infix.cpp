#include "symreg/infix.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>

namespace symreg {

namespace {

struct Node {
  // Exactly one of: op (with children), variable/const/literal leaf.
  enum Kind { kOp, kLeaf } kind = kLeaf;
  OpCode op = OpCode::kVar;
  TokenId leaf = kNoToken;
  double literal = 0.0;
  bool is_literal = false;
  std::vector<Node> children;

  static Node make_op(OpCode code, std::vector<Node> kids) {
    Node n;
    n.kind = kOp;
    n.op = code;
    n.children = std::move(kids);
    return n;
  }
};

class Parser {
 public:
  Parser(const std::string& text, TokenLibrary& lib, bool extend)
      : text_(text), lib_(lib), extend_(extend) {}

  Node parse() {
    Node root = parse_sum();
    skip_ws();
    if (pos_ != static_cast<int>(text_.size())) {
      throw ParseError("unexpected trailing input", pos_);
    }
    return root;
  }

  TokenLibrary& lib() { return lib_; }

 private:
  void skip_ws() {
    while (pos_ < static_cast<int>(text_.size()) &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < static_cast<int>(text_.size()) && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < static_cast<int>(text_.size()) ? text_[pos_] : '\0';
  }

  Node parse_sum() {
    Node left = parse_product();
    while (true) {
      if (eat('+')) {
        left = Node::make_op(OpCode::kAdd, {std::move(left), parse_product()});
      } else if (eat('-')) {
        left = Node::make_op(OpCode::kSub, {std::move(left), parse_product()});
      } else {
        return left;
      }
    }
  }

  Node parse_product() {
    Node left = parse_unary();
    while (true) {
      if (eat('*')) {
        left = Node::make_op(OpCode::kMul, {std::move(left), parse_unary()});
      } else if (eat('/')) {
        left = Node::make_op(OpCode::kDiv, {std::move(left), parse_unary()});
      } else {
        return left;
      }
    }
  }

  Node parse_unary() {
    if (eat('-')) return Node::make_op(OpCode::kNeg, {parse_unary()});
    return parse_power();
  }

  Node parse_power() {
    Node base = parse_primary();
    if (!eat('^')) return base;
    Node expo = parse_unary();  // right associative, allows -n
    return expand_power(std::move(base), std::move(expo));
  }

  // Integer exponents become repeated multiplication; anything else is pow.
  Node expand_power(Node base, Node expo) {
    double n = 0.0;
    if (integer_value(expo, &n)) {
      long long k = static_cast<long long>(n);
      if (k == 0) {
        Node one;
        one.is_literal = true;
        one.literal = 1.0;
        return one;
      }
      bool negative = k < 0;
      if (negative) k = -k;
      Node acc = base;
      for (long long i = 1; i < k; ++i) {
        acc = Node::make_op(OpCode::kMul, {std::move(acc), base});
      }
      if (negative) {
        Node one;
        one.is_literal = true;
        one.literal = 1.0;
        acc = Node::make_op(OpCode::kDiv, {std::move(one), std::move(acc)});
      }
      return acc;
    }
    return Node::make_op(OpCode::kPow, {std::move(base), std::move(expo)});
  }

  static bool integer_value(const Node& n, double* out) {
    if (n.is_literal && n.literal == std::floor(n.literal) &&
        std::abs(n.literal) < 64) {
      *out = n.literal;
      return true;
    }
    if (n.kind == Node::kOp && n.op == OpCode::kNeg && n.children.size() == 1) {
      double inner;
      if (integer_value(n.children[0], &inner)) {
        *out = -inner;
        return true;
      }
    }
    return false;
  }

  Node parse_primary() {
    skip_ws();
    if (pos_ >= static_cast<int>(text_.size())) {
      throw ParseError("unexpected end of input", pos_);
    }
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Node inner = parse_sum();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_name();
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Node parse_number() {
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) throw ParseError("malformed number", pos_);
    pos_ += static_cast<int>(end - start);
    Node n;
    n.is_literal = true;
    n.literal = v;
    return n;
  }

  Node parse_name() {
    int start = pos_;
    while (pos_ < static_cast<int>(text_.size()) &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name = text_.substr(start, pos_ - start);

    if (const OpInfo* info = find_op(name)) {
      if (!eat('(')) throw ParseError("expected '(' after " + name, pos_);
      std::vector<Node> args;
      args.push_back(parse_sum());
      if (info->arity == 2) {
        if (!eat(',')) throw ParseError("expected ','", pos_);
        args.push_back(parse_sum());
      }
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return Node::make_op(info->code, std::move(args));
    }

    if (auto id = lib_.find(name)) {
      Node n;
      n.leaf = *id;
      return n;
    }
    if (name == "const" && extend_) {
      Node n;
      n.leaf = lib_.add_const_placeholder();
      return n;
    }
    throw ParseError("unknown symbol '" + name + "'", start);
  }

  const std::string& text_;
  TokenLibrary& lib_;
  bool extend_;
  int pos_ = 0;
};

// Lowers an AST to a traversal, resolving ops and literals to library
// tokens.  In extend mode, missing tokens are appended to the library.
class Lowerer {
 public:
  Lowerer(TokenLibrary& lib, bool extend) : lib_(lib), extend_(extend) {}

  void lower(const Node& n, Traversal& out) {
    if (n.is_literal) {
      out.push_back(literal_token(n.literal));
      return;
    }
    if (n.kind == Node::kLeaf) {
      out.push_back(n.leaf);
      return;
    }
    out.push_back(op_token(n.op));
    for (const Node& c : n.children) lower(c, out);
  }

 private:
  TokenId op_token(OpCode code) {
    if (auto id = lib_.find_code(code)) return *id;
    if (!extend_) {
      throw ParseError(std::string("operator '") + find_op(code)->name +
                           "' is not in the library",
                       0);
    }
    return lib_.add_op(code);
  }

  TokenId literal_token(double value) {
    for (TokenId id = 0; id < lib_.size(); ++id) {
      if (lib_[id].kind == TokenKind::kLiteral && lib_[id].value == value) {
        return id;
      }
    }
    if (!extend_) throw ParseError("literal is not in the library", 0);
    return lib_.add_literal(value);
  }

  TokenLibrary& lib_;
  bool extend_;
};

std::string format_literal(double v) {
  char buf[40];
  if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
  }
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string format_at(const TokenLibrary& lib, const Traversal& t, int& pos,
                      std::span<const double> consts, int& const_idx) {
  const Token& tok = lib[t[pos++]];
  switch (tok.kind) {
    case TokenKind::kVariable:
      return tok.name;
    case TokenKind::kLiteral:
      return format_literal(tok.value);
    case TokenKind::kConstPlaceholder: {
      int idx = const_idx++;
      if (idx < static_cast<int>(consts.size())) {
        return format_literal(consts[idx]);
      }
      return "const";
    }
    case TokenKind::kUnaryOp: {
      std::string arg = format_at(lib, t, pos, consts, const_idx);
      if (tok.op == OpCode::kNeg) return "(-" + arg + ")";
      return tok.name + "(" + arg + ")";
    }
    case TokenKind::kBinaryOp: {
      std::string a = format_at(lib, t, pos, consts, const_idx);
      std::string b = format_at(lib, t, pos, consts, const_idx);
      switch (tok.op) {
        case OpCode::kAdd: return "(" + a + " + " + b + ")";
        case OpCode::kSub: return "(" + a + " - " + b + ")";
        case OpCode::kMul: return "(" + a + " * " + b + ")";
        case OpCode::kDiv: return "(" + a + " / " + b + ")";
        default: return tok.name + "(" + a + ", " + b + ")";
      }
    }
  }
  return "";
}

}  // namespace

Traversal parse_infix(const std::string& text, TokenLibrary& lib,
                      bool extend) {
  Parser parser(text, lib, extend);
  Node root = parser.parse();
  Traversal out;
  Lowerer(lib, extend).lower(root, out);
  return out;
}

std::string format_infix(const TokenLibrary& lib, const Traversal& t,
                         std::span<const double> consts) {
  if (t.empty()) return "";
  int pos = 0;
  int const_idx = 0;
  return format_at(lib, t, pos, consts, const_idx);
}

}  // namespace symreg
