#include "symreg/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace symreg {

namespace {

double harmonic_number(double x) {
  long long n = std::llround(x);
  if (n < 0 || !std::isfinite(x)) return std::nan("");
  double h = 0.0;
  for (long long k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
  return h;
}

double apply_unary(OpCode op, double a) {
  switch (op) {
    case OpCode::kSin: return std::sin(a);
    case OpCode::kCos: return std::cos(a);
    case OpCode::kTan: return std::tan(a);
    case OpCode::kTanh: return std::tanh(a);
    case OpCode::kSinh: return std::sinh(a);
    case OpCode::kCosh: return std::cosh(a);
    case OpCode::kExp: return std::exp(a);
    case OpCode::kLog: return std::log(a);
    case OpCode::kSqrt: return std::sqrt(a);
    case OpCode::kSquare: return a * a;
    case OpCode::kCube: return a * a * a;
    case OpCode::kInv: return 1.0 / a;
    case OpCode::kNeg: return -a;
    case OpCode::kExpNeg: return std::exp(-a);
    case OpCode::kHarmonic: return harmonic_number(a);
    default: throw std::logic_error("apply_unary: not a unary opcode");
  }
}

double apply_binary(OpCode op, double a, double b) {
  switch (op) {
    case OpCode::kAdd: return a + b;
    case OpCode::kSub: return a - b;
    case OpCode::kMul: return a * b;
    case OpCode::kDiv: return a / b;
    case OpCode::kPow: return std::pow(a, b);
    default: throw std::logic_error("apply_binary: not a binary opcode");
  }
}

}  // namespace

double evaluate_row(const TokenLibrary& lib, const Traversal& t,
                    const double* row, std::span<const double> consts) {
  // Pre-order evaluated back to front: operands are on the stack by the
  // time their operator is reached.
  double stack[64];
  stack[0] = 0.0;
  double* heap_stack = nullptr;
  double* s = stack;
  if (t.size() > 64) {
    heap_stack = new double[t.size()];
    s = heap_stack;
  }
  int top = 0;
  int const_idx = static_cast<int>(consts.size());
  for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
    const Token& tok = lib[t[i]];
    switch (tok.kind) {
      case TokenKind::kVariable:
        s[top++] = row[tok.var_index];
        break;
      case TokenKind::kLiteral:
        s[top++] = tok.value;
        break;
      case TokenKind::kConstPlaceholder:
        s[top++] = consts[--const_idx];
        break;
      case TokenKind::kUnaryOp:
        s[top - 1] = apply_unary(tok.op, s[top - 1]);
        break;
      case TokenKind::kBinaryOp: {
        double a = s[--top];
        double b = s[top - 1];
        s[top - 1] = apply_binary(tok.op, a, b);
        break;
      }
    }
  }
  double result = s[0];
  delete[] heap_stack;
  return result;
}

EvalOutput evaluate(const TokenLibrary& lib, const Traversal& t,
                    const Eigen::MatrixXd& x, std::span<const double> consts) {
  if (!is_complete(lib, t)) {
    throw std::invalid_argument("evaluate: traversal is not complete");
  }
  int want = count_constants(lib, t);
  if (want != static_cast<int>(consts.size())) {
    throw std::invalid_argument("evaluate: constant count mismatch");
  }

  EvalOutput out;
  const Eigen::Index rows = x.rows();
  out.values.resize(rows);
  std::vector<double> row(std::max<int>(1, static_cast<int>(x.cols())));
  bool finite = true;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) row[c] = x(r, c);
    double v = evaluate_row(lib, t, row.data(), consts);
    out.values[r] = v;
    finite = finite && std::isfinite(v);
  }
  out.finite = finite;
  return out;
}

}  // namespace symreg
