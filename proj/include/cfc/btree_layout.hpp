#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cfc {

// Shape of a B-tree of minimum degree t over keys 0..N-1 (indices into a
// sorted key array). Levels count up from the leaves, which are level 0.
struct LayoutNode {
  int level = 0;
  std::vector<std::size_t> keys;
  std::vector<LayoutNode> children;
};

// Bulk-loads the lowest valid B-tree: every non-root node holds between
// t-1 and 2t-1 keys, every internal node has one more child than keys, all
// leaves are at level 0, and the root has at least one key (N >= 1).
// Throws ConfigError for t < 2 or N == 0.
LayoutNode balanced_layout(std::size_t key_count, int t);

// Largest key count a tree of the given height can hold: (2t)^(h+1) - 1,
// saturating at SIZE_MAX.
std::size_t btree_capacity(int height, int t);

}  // namespace cfc
