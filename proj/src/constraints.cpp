#include "symreg/constraints.hpp"

#include <stdexcept>

namespace symreg {

std::uint64_t allowed_tokens(const TraversalBuilder& state,
                             const ConstraintSet& omega, bool* fallback_hit) {
  const TokenLibrary& lib = state.library();
  if (lib.size() > 64) throw std::invalid_argument("library exceeds 64 tokens");
  if (fallback_hit != nullptr) *fallback_hit = false;

  const int length = state.length();
  const int d = state.deficit();
  // Choosing arity a leaves a minimal completion of length+1+(d-1+a) tokens.
  const int arity_cap = omega.max_length - length - d;
  // A terminal closes the tree exactly when one slot remains.
  const bool forbid_terminals = d == 1 && length + 1 < omega.min_length;

  const TokenId parent = state.parent();
  std::optional<TokenId> parent_inverse;
  if (omega.forbid_inverse_pairs && parent != kNoToken &&
      lib[parent].kind == TokenKind::kUnaryOp) {
    parent_inverse = lib.inverse_of(parent);
  }

  std::uint64_t mask = 0;
  for (TokenId id = 0; id < lib.size(); ++id) {
    const Token& tok = lib[id];
    if (tok.arity > arity_cap) continue;
    if (tok.arity == 0 && forbid_terminals) continue;
    if (omega.forbid_nested_trig && state.has_trig_ancestor() &&
        lib.is_trig(id)) {
      continue;
    }
    if (parent_inverse && *parent_inverse == id) continue;
    if (tok.kind == TokenKind::kConstPlaceholder &&
        state.n_constants() >= omega.max_constants) {
      continue;
    }
    mask |= 1ULL << id;
  }

  if (mask == 0) {
    for (TokenId id : lib.variables()) mask |= 1ULL << id;
    if (fallback_hit != nullptr) *fallback_hit = true;
  }
  return mask;
}

namespace {

struct WalkState {
  const TokenLibrary* lib;
  const Traversal* t;
  const ConstraintSet* omega;
  int pos = 0;
  bool ok = true;
};

void walk(WalkState& w, bool trig_ancestor, TokenId parent) {
  const TokenLibrary& lib = *w.lib;
  TokenId id = (*w.t)[w.pos++];
  const Token& tok = lib[id];

  if (w.omega->forbid_nested_trig && trig_ancestor && lib.is_trig(id)) {
    w.ok = false;
  }
  if (w.omega->forbid_inverse_pairs && parent != kNoToken &&
      lib[parent].kind == TokenKind::kUnaryOp) {
    auto inv = lib.inverse_of(parent);
    if (inv && *inv == id) w.ok = false;
  }
  bool trig_here = trig_ancestor || lib.is_trig(id);
  for (int i = 0; i < tok.arity && w.ok; ++i) walk(w, trig_here, id);
}

}  // namespace

bool check_constraints(const TokenLibrary& lib, const Traversal& t,
                       const ConstraintSet& omega) {
  if (!is_complete(lib, t)) return false;
  const int len = static_cast<int>(t.size());
  if (len < omega.min_length || len > omega.max_length) return false;
  if (count_constants(lib, t) > omega.max_constants) return false;
  WalkState w{&lib, &t, &omega, 0, true};
  walk(w, false, kNoToken);
  return w.ok;
}

}  // namespace symreg
