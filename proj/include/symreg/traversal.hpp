#pragma once

#include <cstddef>
#include <vector>

#include "symreg/token.hpp"

namespace symreg {

// Expressions are stored as pre-order traversals of their syntax tree.
using Traversal = std::vector<TokenId>;

struct TraversalHash {
  std::size_t operator()(const Traversal& t) const {
    std::size_t h = 1469598103934665603ULL;
    for (TokenId id : t) {
      h ^= static_cast<std::size_t>(static_cast<std::uint16_t>(id));
      h *= 1099511628211ULL;
    }
    return h;
  }
};

// Number of unfilled operand slots after consuming the whole sequence,
// starting from 1 for the root.  Negative means the sequence ran past a
// completed tree.
int deficit(const TokenLibrary& lib, const Traversal& t);

// True iff the deficit reaches zero exactly at the final token and stays
// positive at every proper prefix.
bool is_complete(const TokenLibrary& lib, const Traversal& t);

// Length of the subtree rooted at position `pos`.
int subtree_span(const TokenLibrary& lib, const Traversal& t, int pos);

int count_constants(const TokenLibrary& lib, const Traversal& t);

struct TreeNode {
  TokenId id = kNoToken;
  std::vector<TreeNode> children;
};

TreeNode decode(const TokenLibrary& lib, const Traversal& t);
Traversal encode(const TreeNode& root);

// Incremental structural state for a traversal under construction.  Tracks
// the quantities sampling constraints need: deficit, open-operator stack,
// trig-ancestor depth, constant count, and the (parent, sibling) context of
// the next position.  The sibling is the root token of the parent's most
// recently completed operand.
class TraversalBuilder {
 public:
  explicit TraversalBuilder(const TokenLibrary& lib) : lib_(&lib) {}

  void push(TokenId id);
  void reset();

  bool done() const { return done_; }
  int length() const { return static_cast<int>(tokens_.size()); }
  int deficit() const { return deficit_; }
  TokenId parent() const;
  TokenId sibling() const;
  bool has_trig_ancestor() const { return trig_depth_ > 0; }
  int n_constants() const { return n_consts_; }
  const Traversal& tokens() const { return tokens_; }
  const TokenLibrary& library() const { return *lib_; }

 private:
  struct Frame {
    TokenId token;
    int arity;
    int filled;
    TokenId child_root[2];
    bool trig;
  };

  const TokenLibrary* lib_;
  Traversal tokens_;
  std::vector<Frame> stack_;
  int deficit_ = 1;
  int trig_depth_ = 0;
  int n_consts_ = 0;
  bool done_ = false;
};

}  // namespace symreg
