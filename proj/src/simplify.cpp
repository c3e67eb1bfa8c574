#include "symreg/simplify.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace symreg {
namespace {

// Thrown whenever the expression leaves the fragment the canonicalizer can
// handle exactly; callers translate it into kOutsideFragment.
struct outside_fragment : std::exception {
  const char* what() const noexcept override { return "outside fragment"; }
};

using i64 = std::int64_t;
using i128 = __int128;

constexpr i64 kCoeffLimit = i64(1) << 56;
constexpr std::size_t kTermLimit = 5000;
constexpr i64 kExponentLimit = 64;

i64 narrow(i128 v) {
  if (v > kCoeffLimit || v < -kCoeffLimit) throw outside_fragment{};
  return static_cast<i64>(v);
}

// Exact rational with canonical sign on the numerator and gcd-reduced
// magnitude; den is always positive.
struct Rat {
  i64 num = 0;
  i64 den = 1;

  static Rat make(i128 n, i128 d) {
    if (d == 0) throw outside_fragment{};
    if (d < 0) { n = -n; d = -d; }
    i128 an = n < 0 ? -n : n;
    i128 g = std::gcd(static_cast<std::uintmax_t>(an),
                      static_cast<std::uintmax_t>(d));
    if (g > 1) { n /= static_cast<i128>(g); d /= static_cast<i128>(g); }
    return Rat{narrow(n), narrow(d)};
  }
  bool is_zero() const { return num == 0; }
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
};

Rat operator+(const Rat& a, const Rat& b) {
  return Rat::make(i128(a.num) * b.den + i128(b.num) * a.den,
                   i128(a.den) * b.den);
}
Rat operator*(const Rat& a, const Rat& b) {
  return Rat::make(i128(a.num) * b.num, i128(a.den) * b.den);
}
Rat operator-(const Rat& a) { return Rat{-a.num, a.den}; }

// Nearest small rational via continued fractions.  Benchmarks carry
// constants like 1.3 or 0.5 whose double images sit within 1e-9 of the
// intended ratio; anything without such a neighbour leaves the fragment.
Rat rationalize(double v) {
  if (!std::isfinite(v)) throw outside_fragment{};
  const double tol = 1e-9 * std::max(1.0, std::abs(v));
  double x = v;
  i64 p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double fl = std::floor(x);
    if (std::abs(fl) > 9e15) throw outside_fragment{};
    const i64 a = static_cast<i64>(fl);
    const i64 p2 = narrow(i128(a) * p1 + p0);
    const i64 q2 = narrow(i128(a) * q1 + q0);
    if (q2 > 1000000) throw outside_fragment{};
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (q1 != 0 &&
        std::abs(v - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) {
      return Rat::make(p1, q1);
    }
    const double frac = x - fl;
    if (frac < 1e-18) break;
    x = 1.0 / frac;
  }
  throw outside_fragment{};
}

// A monomial is a sorted (atom id, exponent) list; a polynomial maps
// monomials to nonzero rational coefficients.  Atom ids index `AtomTable`.
using Monomial = std::vector<std::pair<int, int>>;
using Poly = std::map<Monomial, Rat>;

Poly poly_const(const Rat& r) {
  Poly p;
  if (!r.is_zero()) p[{}] = r;
  return p;
}

Poly poly_atom(int atom) {
  Poly p;
  p[{{atom, 1}}] = Rat{1, 1};
  return p;
}

bool poly_is_zero(const Poly& p) { return p.empty(); }

// nullptr unless p is a constant polynomial; zero counts as constant.
const Rat* poly_as_const(const Poly& p, Rat* zero_storage) {
  if (p.empty()) { *zero_storage = Rat{0, 1}; return zero_storage; }
  if (p.size() == 1 && p.begin()->first.empty()) return &p.begin()->second;
  return nullptr;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [mono, coeff] : b) {
    auto it = out.find(mono);
    if (it == out.end()) {
      out.emplace(mono, coeff);
    } else {
      it->second = it->second + coeff;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  if (out.size() > kTermLimit) throw outside_fragment{};
  return out;
}

Poly poly_neg(const Poly& a) {
  Poly out = a;
  for (auto& [mono, coeff] : out) coeff = -coeff;
  return out;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      const int exp = a[i].second + b[j].second;
      if (exp > kExponentLimit) throw outside_fragment{};
      out.emplace_back(a[i].first, exp);
      ++i; ++j;
    }
  }
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      const Monomial m = mono_mul(ma, mb);
      const Rat c = ca * cb;
      auto it = out.find(m);
      if (it == out.end()) {
        if (!c.is_zero()) out.emplace(m, c);
      } else {
        it->second = it->second + c;
        if (it->second.is_zero()) out.erase(it);
      }
      if (out.size() > kTermLimit) throw outside_fragment{};
    }
  }
  return out;
}

// Canonical-enough fraction: numerator and denominator polynomials with no
// common-factor cancellation.  Equality tests cross-multiply, so shared
// factors are harmless.
struct Frac {
  Poly num;
  Poly den;  // never the zero polynomial
};

Frac frac_const(const Rat& r) { return {poly_const(r), poly_const(Rat{1, 1})}; }
Frac frac_atom(int atom) { return {poly_atom(atom), poly_const(Rat{1, 1})}; }

Frac frac_add(const Frac& a, const Frac& b) {
  return {poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
          poly_mul(a.den, b.den)};
}
Frac frac_mul(const Frac& a, const Frac& b) {
  return {poly_mul(a.num, b.num), poly_mul(a.den, b.den)};
}
Frac frac_neg(const Frac& a) { return {poly_neg(a.num), a.den}; }

Frac frac_div(const Frac& a, const Frac& b) {
  // 1/0 is outside the fragment: the canonicalizer proves identities of
  // functions, and a structurally zero denominator has no function value.
  if (poly_is_zero(b.num)) throw outside_fragment{};
  return {poly_mul(a.num, b.den), poly_mul(a.den, b.num)};
}

Frac frac_pow(Frac base, i64 n) {
  if (n < 0) {
    base = frac_div(frac_const(Rat{1, 1}), base);
    n = -n;
  }
  if (n > kExponentLimit) throw outside_fragment{};
  Frac out = frac_const(Rat{1, 1});
  for (i64 i = 0; i < n; ++i) out = frac_mul(out, base);
  return out;
}

bool frac_equal(const Frac& a, const Frac& b) {
  return poly_add(poly_mul(a.num, b.den), poly_neg(poly_mul(b.num, a.den)))
      .empty();
}

// Opaque transcendental application.  Two atoms are the same leaf iff they
// apply the same op to rationally identical arguments.
struct Atom {
  OpCode op = OpCode::kVar;
  int var_index = -1;      // kVar only
  std::vector<Frac> args;  // canonicalized operands otherwise
};

struct AtomTable {
  std::vector<Atom> atoms;
  bool transcendental_seen = false;

  int intern(Atom a) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Atom& o = atoms[i];
      if (o.op != a.op || o.var_index != a.var_index ||
          o.args.size() != a.args.size()) {
        continue;
      }
      bool same = true;
      for (std::size_t k = 0; k < a.args.size(); ++k) {
        if (!frac_equal(o.args[k], a.args[k])) { same = false; break; }
      }
      if (same) return static_cast<int>(i);
    }
    if (a.op != OpCode::kVar) transcendental_seen = true;
    atoms.push_back(std::move(a));
    return static_cast<int>(atoms.size()) - 1;
  }

  int variable(int index) {
    Atom a;
    a.op = OpCode::kVar;
    a.var_index = index;
    return intern(a);
  }
};

// If f is exactly one atom with coefficient one (f == atoms[id] as a
// function), returns that id, else -1.  Used by the inverse-pair rewrites.
int sole_atom(const Frac& f) {
  Rat zero;
  const Rat* d = poly_as_const(f.den, &zero);
  if (d == nullptr || !(*d == Rat{1, 1})) return -1;
  if (f.num.size() != 1) return -1;
  const auto& [mono, coeff] = *f.num.begin();
  if (!(coeff == Rat{1, 1})) return -1;
  if (mono.size() != 1 || mono[0].second != 1) return -1;
  return mono[0].first;
}

struct Canonicalizer {
  const TokenLibrary& lib;
  const Traversal& t;
  std::span<const double> consts;
  AtomTable& table;
  std::size_t pos = 0;
  int const_index = 0;

  Frac run() {
    Frac out = node();
    if (pos != t.size()) throw outside_fragment{};
    return out;
  }

  Frac node() {
    if (pos >= t.size()) throw outside_fragment{};
    const Token& tok = lib[t[pos++]];
    switch (tok.kind) {
      case TokenKind::kVariable:
        return frac_atom(table.variable(tok.var_index));
      case TokenKind::kLiteral:
        return frac_const(rationalize(tok.value));
      case TokenKind::kConstPlaceholder: {
        if (const_index >= static_cast<int>(consts.size())) {
          throw outside_fragment{};
        }
        return frac_const(rationalize(consts[const_index++]));
      }
      case TokenKind::kUnaryOp:
        return unary(tok.op, node());
      case TokenKind::kBinaryOp: {
        Frac a = node();
        Frac b = node();
        return binary(tok.op, std::move(a), std::move(b));
      }
    }
    throw outside_fragment{};
  }

  Frac unary(OpCode op, Frac arg) {
    switch (op) {
      case OpCode::kNeg: return frac_neg(arg);
      case OpCode::kInv: return frac_div(frac_const(Rat{1, 1}), arg);
      case OpCode::kSquare: return frac_pow(arg, 2);
      case OpCode::kCube: return frac_pow(arg, 3);
      case OpCode::kExpNeg: return atom(OpCode::kExp, {frac_neg(arg)});
      case OpCode::kExp: {
        const int id = sole_atom(arg);
        if (id >= 0 && table.atoms[id].op == OpCode::kLog) {
          return table.atoms[id].args[0];
        }
        return atom(OpCode::kExp, {std::move(arg)});
      }
      case OpCode::kLog: {
        const int id = sole_atom(arg);
        if (id >= 0 && table.atoms[id].op == OpCode::kExp) {
          return table.atoms[id].args[0];
        }
        return atom(OpCode::kLog, {std::move(arg)});
      }
      case OpCode::kSin: case OpCode::kCos: case OpCode::kTan:
      case OpCode::kTanh: case OpCode::kSinh: case OpCode::kCosh:
      case OpCode::kSqrt: case OpCode::kHarmonic:
        return atom(op, {std::move(arg)});
      default:
        throw outside_fragment{};
    }
  }

  Frac binary(OpCode op, Frac a, Frac b) {
    switch (op) {
      case OpCode::kAdd: return frac_add(a, b);
      case OpCode::kSub: return frac_add(a, frac_neg(b));
      case OpCode::kMul: return frac_mul(a, b);
      case OpCode::kDiv: return frac_div(a, b);
      case OpCode::kPow: {
        Rat zero_n, zero_d;
        const Rat* en = poly_as_const(b.num, &zero_n);
        const Rat* ed = poly_as_const(b.den, &zero_d);
        if (en != nullptr && ed != nullptr && ed->num != 0) {
          const Rat e = Rat::make(i128(en->num) * ed->den,
                                  i128(en->den) * ed->num);
          if (e.den == 1) return frac_pow(a, e.num);
        }
        return atom(OpCode::kPow, {std::move(a), std::move(b)});
      }
      default:
        throw outside_fragment{};
    }
  }

  Frac atom(OpCode op, std::vector<Frac> args) {
    Atom a;
    a.op = op;
    a.args = std::move(args);
    return frac_atom(table.intern(a));
  }
};

}  // namespace

const char* prove_result_name(ProveResult r) {
  switch (r) {
    case ProveResult::kProvedZero: return "proved";
    case ProveResult::kRefuted: return "refuted";
    case ProveResult::kOutsideFragment: return "outside-fragment";
  }
  return "?";
}

ProveResult prove_equal(const TokenLibrary& lib_a, const Traversal& a,
                        std::span<const double> consts_a,
                        const TokenLibrary& lib_b, const Traversal& b,
                        std::span<const double> consts_b) {
  try {
    AtomTable table;
    Frac fa = Canonicalizer{lib_a, a, consts_a, table}.run();
    Frac fb = Canonicalizer{lib_b, b, consts_b, table}.run();
    if (frac_equal(fa, fb)) return ProveResult::kProvedZero;
    // Unequal canonical forms only separate the functions when no opaque
    // leaves are involved; sin/cos identities and friends are not modeled.
    return table.transcendental_seen ? ProveResult::kOutsideFragment
                                     : ProveResult::kRefuted;
  } catch (const outside_fragment&) {
    return ProveResult::kOutsideFragment;
  }
}

}  // namespace symreg
