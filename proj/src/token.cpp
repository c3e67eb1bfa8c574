#include "symreg/token.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace symreg {

const std::vector<OpInfo>& op_table() {
  static const std::vector<OpInfo> table = {
      {"add", 2, OpCode::kAdd, false, std::nullopt},
      {"sub", 2, OpCode::kSub, false, std::nullopt},
      {"mul", 2, OpCode::kMul, false, std::nullopt},
      {"div", 2, OpCode::kDiv, false, std::nullopt},
      {"pow", 2, OpCode::kPow, false, std::nullopt},
      {"sin", 1, OpCode::kSin, true, std::nullopt},
      {"cos", 1, OpCode::kCos, true, std::nullopt},
      {"tan", 1, OpCode::kTan, true, std::nullopt},
      {"tanh", 1, OpCode::kTanh, false, std::nullopt},
      {"sinh", 1, OpCode::kSinh, false, std::nullopt},
      {"cosh", 1, OpCode::kCosh, false, std::nullopt},
      {"exp", 1, OpCode::kExp, false, OpCode::kLog},
      {"log", 1, OpCode::kLog, false, OpCode::kExp},
      {"sqrt", 1, OpCode::kSqrt, false, std::nullopt},
      {"square", 1, OpCode::kSquare, false, std::nullopt},
      {"cube", 1, OpCode::kCube, false, std::nullopt},
      {"inv", 1, OpCode::kInv, false, OpCode::kInv},
      {"neg", 1, OpCode::kNeg, false, OpCode::kNeg},
      {"expneg", 1, OpCode::kExpNeg, false, std::nullopt},
      {"harmonic", 1, OpCode::kHarmonic, false, std::nullopt},
  };
  return table;
}

const OpInfo* find_op(std::string_view name) {
  for (const OpInfo& info : op_table()) {
    if (name == info.name) return &info;
  }
  return nullptr;
}

const OpInfo* find_op(OpCode code) {
  for (const OpInfo& info : op_table()) {
    if (code == info.code) return &info;
  }
  return nullptr;
}

namespace {

// "x"->0, "y"->1, "x<k>"->k-1, otherwise nullopt.
std::optional<int> variable_index(std::string_view name) {
  if (name == "x") return 0;
  if (name == "y") return 1;
  if (name.size() >= 2 && name[0] == 'x') {
    int idx = 0;
    for (char c : name.substr(1)) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      idx = idx * 10 + (c - '0');
    }
    if (idx >= 1) return idx - 1;
  }
  return std::nullopt;
}

bool is_number(std::string_view s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::string owned(s);
  std::strtod(owned.c_str(), &end);
  return end != nullptr && *end == '\0';
}

std::string literal_name(double value) {
  char buf[40];
  if (value == static_cast<long long>(value) && std::abs(value) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(value));
  } else {
    std::snprintf(buf, sizeof(buf), "%.17g", value);
  }
  return buf;
}

}  // namespace

TokenId TokenLibrary::append(Token t) {
  if (by_name_.count(t.name)) {
    throw std::invalid_argument("duplicate token name: " + t.name);
  }
  t.id = static_cast<TokenId>(tokens_.size());
  by_name_.emplace(t.name, t.id);
  tokens_.push_back(std::move(t));
  return tokens_.back().id;
}

TokenId TokenLibrary::add_op(OpCode code) {
  const OpInfo* info = find_op(code);
  if (info == nullptr) throw std::invalid_argument("unknown opcode");
  Token t;
  t.kind = info->arity == 2 ? TokenKind::kBinaryOp : TokenKind::kUnaryOp;
  t.op = info->code;
  t.arity = info->arity;
  t.name = info->name;
  return append(std::move(t));
}

TokenId TokenLibrary::add_variable(const std::string& name, int var_index) {
  Token t;
  t.kind = TokenKind::kVariable;
  t.op = OpCode::kVar;
  t.name = name;
  t.var_index = var_index;
  TokenId id = append(std::move(t));
  if (var_index >= static_cast<int>(variables_.size())) {
    variables_.resize(var_index + 1, kNoToken);
  }
  variables_[var_index] = id;
  return id;
}

TokenId TokenLibrary::add_const_placeholder() {
  Token t;
  t.kind = TokenKind::kConstPlaceholder;
  t.op = OpCode::kConst;
  t.name = "const";
  TokenId id = append(std::move(t));
  const_token_ = id;
  return id;
}

TokenId TokenLibrary::add_literal(double value) {
  Token t;
  t.kind = TokenKind::kLiteral;
  t.op = OpCode::kLiteral;
  t.name = literal_name(value);
  t.value = value;
  return append(std::move(t));
}

TokenLibrary TokenLibrary::from_names(const std::vector<std::string>& names) {
  TokenLibrary lib;
  for (const std::string& name : names) {
    if (const OpInfo* info = find_op(name)) {
      lib.add_op(info->code);
    } else if (name == "const") {
      lib.add_const_placeholder();
    } else if (auto vi = variable_index(name)) {
      lib.add_variable(name, *vi);
    } else if (is_number(name)) {
      lib.add_literal(std::strtod(name.c_str(), nullptr));
    } else {
      throw std::invalid_argument("unknown token name: " + name);
    }
  }
  for (std::size_t i = 0; i < lib.variables_.size(); ++i) {
    if (lib.variables_[i] == kNoToken) {
      throw std::invalid_argument("variable indices must be contiguous");
    }
  }
  return lib;
}

std::optional<TokenId> TokenLibrary::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it != by_name_.end()) return it->second;
  // variable aliases
  if (auto vi = variable_index(name)) {
    if (*vi < n_variables() && variables_[*vi] != kNoToken) {
      return variables_[*vi];
    }
  }
  return std::nullopt;
}

std::optional<TokenId> TokenLibrary::find_code(OpCode code) const {
  for (const Token& t : tokens_) {
    if (t.op == code) return t.id;
  }
  return std::nullopt;
}

bool TokenLibrary::is_trig(TokenId id) const {
  const Token& t = tokens_[id];
  if (t.kind != TokenKind::kUnaryOp) return false;
  const OpInfo* info = find_op(t.op);
  return info != nullptr && info->trig;
}

std::optional<TokenId> TokenLibrary::inverse_of(TokenId id) const {
  const Token& t = tokens_[id];
  if (t.kind != TokenKind::kUnaryOp) return std::nullopt;
  const OpInfo* info = find_op(t.op);
  if (info == nullptr || !info->inverse) return std::nullopt;
  return find_code(*info->inverse);
}

}  // namespace symreg
