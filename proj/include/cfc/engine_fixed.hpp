#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfc/btree_layout.hpp"
#include "cfc/engine.hpp"
#include "cfc/node_coloring.hpp"

namespace cfc {

enum class FixedScheme {
  DistinctColors,  // every extreme at a node has its own color, <= 2 recolorings
  ChainPerNode,    // chain method on each node's extremes, O(t) recolorings
};

// Bounded-universe engine: a static B-tree of minimum degree t over the
// integer points 0..U-1. Each interval lives at the highest node holding a
// point it contains, in the slot of the leftmost such point. Levels count
// up from the leaves; level l draws from its own palette {(l, j)}.
class FixedEngine final : public EngineBase {
 public:
  struct Location {
    std::size_t node = 0;
    std::size_t slot = 0;
    int level = 0;

    friend bool operator==(const Location&, const Location&) = default;
  };

  struct NodeView {
    int level = 0;
    std::vector<std::int64_t> keys;
    std::vector<std::size_t> children;
    std::vector<IntervalId> members;
    std::vector<IntervalId> extremes;
  };

  FixedEngine(std::int64_t universe, int t, FixedScheme scheme);

  std::string name() const override;
  UpdateResult insert(const Interval& iv) override;
  UpdateResult erase(IntervalId id) override;
  std::optional<int> declared_recolor_budget() const override;

  // Throws InputError unless both endpoints are integers in [0, U).
  Location locate(const Interval& iv) const;

  int height() const { return nodes_[root_].level; }
  int t() const { return t_; }
  std::int64_t universe() const { return universe_; }
  FixedScheme scheme() const { return scheme_; }
  std::size_t palette_per_level() const;
  // 1 + |C(l)| * (height + 1): the dummy plus every level palette.
  std::size_t color_budget() const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t root() const { return root_; }
  NodeView node(std::size_t index) const;

  // Checks slot membership and extremes against the per-level coloring rules.
  // Returns a description of the first problem found.
  std::optional<std::string> audit() const;

 private:
  struct Node {
    int level = 0;
    std::vector<std::int64_t> keys;
    std::vector<std::size_t> children;
    std::vector<SlotBucket> slots;
    // DistinctColors: current extremes per slot and palette index per extreme.
    std::vector<std::vector<IntervalId>> slot_extremes;
    std::map<IntervalId, int> color_index;
    // ChainPerNode: current extremes of the whole node.
    std::vector<IntervalId> extremes;
  };

  std::size_t build(const LayoutNode& layout);
  void refresh_distinct(std::size_t node, std::size_t slot);
  void refresh_chain(std::size_t node);
  void refresh(std::size_t node, std::size_t slot);

  std::int64_t universe_;
  int t_;
  FixedScheme scheme_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
  std::unordered_map<IntervalId, Location> home_;
};

}  // namespace cfc
