#include "cfc/btree_layout.hpp"

#include <limits>
#include <string>

#include "cfc/core.hpp"

namespace cfc {

namespace {

std::size_t saturating_pow(std::size_t base, int exp) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > kMax / base) return kMax;
    out *= base;
  }
  return out;
}

// Fewest keys a non-root subtree of this height can hold: t^(h+1) - 1.
std::size_t min_keys(int height, int t) {
  return saturating_pow(static_cast<std::size_t>(t), height + 1) - 1;
}

LayoutNode build(std::size_t first, std::size_t count, int height, int t, bool is_root) {
  LayoutNode node;
  node.level = height;
  if (height == 0) {
    for (std::size_t k = 0; k < count; ++k) node.keys.push_back(first + k);
    return node;
  }
  const std::size_t hi = btree_capacity(height - 1, t);
  const std::size_t lo = min_keys(height - 1, t);
  std::size_t children = is_root ? 2 : static_cast<std::size_t>(t);
  const std::size_t max_children = 2 * static_cast<std::size_t>(t);
  while (children < max_children && hi < count && count - (children - 1) > children * hi) ++children;
  const std::size_t rest = count - (children - 1);
  const std::size_t base = rest / children;
  const std::size_t extra = rest % children;
  if (base < lo || base + (extra ? 1 : 0) > hi) {
    throw InvariantError("balanced_layout: cannot split " + std::to_string(count) + " keys at height " +
                         std::to_string(height));
  }
  std::size_t pos = first;
  for (std::size_t j = 0; j < children; ++j) {
    std::size_t part = base + (j < extra ? 1 : 0);
    node.children.push_back(build(pos, part, height - 1, t, false));
    pos += part;
    if (j + 1 < children) node.keys.push_back(pos++);
  }
  return node;
}

}  // namespace

std::size_t btree_capacity(int height, int t) {
  std::size_t p = saturating_pow(2 * static_cast<std::size_t>(t), height + 1);
  return p == std::numeric_limits<std::size_t>::max() ? p : p - 1;
}

LayoutNode balanced_layout(std::size_t key_count, int t) {
  if (t < 2) throw ConfigError("B-tree minimum degree must be >= 2");
  if (key_count == 0) throw ConfigError("B-tree layout needs at least one key");
  int height = 0;
  while (btree_capacity(height, t) < key_count) ++height;
  return build(0, key_count, height, t, true);
}

}  // namespace cfc
