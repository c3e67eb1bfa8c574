#include "symreg/traversal.hpp"

#include <stdexcept>

namespace symreg {

int deficit(const TokenLibrary& lib, const Traversal& t) {
  int d = 1;
  for (TokenId id : t) d += lib.arity(id) - 1;
  return d;
}

bool is_complete(const TokenLibrary& lib, const Traversal& t) {
  if (t.empty()) return false;
  int d = 1;
  for (std::size_t i = 0; i < t.size(); ++i) {
    d += lib.arity(t[i]) - 1;
    if (d == 0) return i + 1 == t.size();
    if (d < 0) return false;
  }
  return false;
}

int subtree_span(const TokenLibrary& lib, const Traversal& t, int pos) {
  int d = 1;
  int i = pos;
  while (i < static_cast<int>(t.size())) {
    d += lib.arity(t[i]) - 1;
    ++i;
    if (d == 0) return i - pos;
  }
  throw std::invalid_argument("subtree_span: traversal ends inside subtree");
}

int count_constants(const TokenLibrary& lib, const Traversal& t) {
  int n = 0;
  for (TokenId id : t) {
    if (lib[id].kind == TokenKind::kConstPlaceholder) ++n;
  }
  return n;
}

namespace {

TreeNode decode_at(const TokenLibrary& lib, const Traversal& t, int& pos) {
  if (pos >= static_cast<int>(t.size())) {
    throw std::invalid_argument("decode: traversal too short");
  }
  TreeNode node;
  node.id = t[pos++];
  int n = lib.arity(node.id);
  node.children.reserve(n);
  for (int i = 0; i < n; ++i) node.children.push_back(decode_at(lib, t, pos));
  return node;
}

void encode_into(const TreeNode& node, Traversal& out) {
  out.push_back(node.id);
  for (const TreeNode& c : node.children) encode_into(c, out);
}

}  // namespace

TreeNode decode(const TokenLibrary& lib, const Traversal& t) {
  int pos = 0;
  TreeNode root = decode_at(lib, t, pos);
  if (pos != static_cast<int>(t.size())) {
    throw std::invalid_argument("decode: trailing tokens");
  }
  return root;
}

Traversal encode(const TreeNode& root) {
  Traversal out;
  encode_into(root, out);
  return out;
}

void TraversalBuilder::reset() {
  tokens_.clear();
  stack_.clear();
  deficit_ = 1;
  trig_depth_ = 0;
  n_consts_ = 0;
  done_ = false;
}

TokenId TraversalBuilder::parent() const {
  return stack_.empty() ? kNoToken : stack_.back().token;
}

TokenId TraversalBuilder::sibling() const {
  if (stack_.empty()) return kNoToken;
  const Frame& f = stack_.back();
  return f.filled >= 1 ? f.child_root[f.filled - 1] : kNoToken;
}

void TraversalBuilder::push(TokenId id) {
  if (done_) throw std::logic_error("push on completed traversal");
  const Token& tok = (*lib_)[id];
  tokens_.push_back(id);
  deficit_ += tok.arity - 1;
  if (tok.kind == TokenKind::kConstPlaceholder) ++n_consts_;

  if (tok.arity > 0) {
    bool trig = lib_->is_trig(id);
    stack_.push_back(Frame{id, tok.arity, 0, {kNoToken, kNoToken}, trig});
    if (trig) ++trig_depth_;
    return;
  }

  // A terminal completes a subtree; propagate completions up the stack.
  TokenId completed_root = id;
  while (true) {
    if (stack_.empty()) {
      done_ = true;
      return;
    }
    Frame& f = stack_.back();
    f.child_root[f.filled] = completed_root;
    ++f.filled;
    if (f.filled < f.arity) return;
    completed_root = f.token;
    if (f.trig) --trig_depth_;
    stack_.pop_back();
  }
}

}  // namespace symreg
