#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace symreg {

using TokenId = std::int16_t;
inline constexpr TokenId kNoToken = -1;

enum class TokenKind : std::uint8_t {
  kBinaryOp,
  kUnaryOp,
  kVariable,
  kConstPlaceholder,
  kLiteral,
};

enum class OpCode : std::uint8_t {
  kAdd, kSub, kMul, kDiv, kPow,
  kSin, kCos, kTan, kTanh, kSinh, kCosh,
  kExp, kLog, kSqrt, kSquare, kCube,
  kInv, kNeg, kExpNeg, kHarmonic,
  kVar, kConst, kLiteral,
};

struct Token {
  TokenId id = kNoToken;
  TokenKind kind = TokenKind::kVariable;
  OpCode op = OpCode::kVar;
  int arity = 0;
  std::string name;
  int var_index = -1;   // kVariable only
  double value = 0.0;   // kLiteral only
};

struct OpInfo {
  const char* name;
  int arity;
  OpCode code;
  bool trig;
  // opcode whose composition with this op is the identity, if any
  std::optional<OpCode> inverse;
};

// All operator names understood by the evaluator and the infix parser.
const std::vector<OpInfo>& op_table();
const OpInfo* find_op(std::string_view name);
const OpInfo* find_op(OpCode code);

class TokenLibrary {
 public:
  TokenLibrary() = default;

  // Names are operator names from op_table(), variable names ("x", "y" or
  // "x1".."xn"), "const" for an optimizable constant placeholder, or numeric
  // literals.  Duplicate names are rejected.
  static TokenLibrary from_names(const std::vector<std::string>& names);

  TokenId add_op(OpCode code);
  TokenId add_variable(const std::string& name, int var_index);
  TokenId add_const_placeholder();
  TokenId add_literal(double value);

  int size() const { return static_cast<int>(tokens_.size()); }
  const Token& operator[](TokenId id) const { return tokens_[id]; }
  const Token& at(TokenId id) const { return tokens_.at(id); }

  // Resolves aliases: "x" <-> "x1", "y" <-> "x2".
  std::optional<TokenId> find(std::string_view name) const;
  std::optional<TokenId> find_code(OpCode code) const;

  int arity(TokenId id) const { return tokens_[id].arity; }
  bool is_terminal(TokenId id) const { return tokens_[id].arity == 0; }
  bool is_trig(TokenId id) const;
  // Token id of the exact inverse of `id` within this library, if present.
  std::optional<TokenId> inverse_of(TokenId id) const;

  int n_variables() const { return static_cast<int>(variables_.size()); }
  TokenId variable(int index) const { return variables_.at(index); }
  const std::vector<TokenId>& variables() const { return variables_; }
  bool has_const_placeholder() const { return const_token_.has_value(); }
  std::optional<TokenId> const_token() const { return const_token_; }

 private:
  TokenId append(Token t);

  std::vector<Token> tokens_;
  std::unordered_map<std::string, TokenId> by_name_;
  std::vector<TokenId> variables_;
  std::optional<TokenId> const_token_;
};

}  // namespace symreg
