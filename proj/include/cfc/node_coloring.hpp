#pragma once

#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "cfc/core.hpp"

namespace cfc {

// Intervals of one node slot S_i(v). The left extreme has the leftmost left
// endpoint, the right extreme the rightmost right endpoint; ties go to the
// smaller id. Every member is covered by the union of the two extremes
// because all members contain the slot's key.
class SlotBucket {
 public:
  void insert(const Interval& iv);
  bool erase(const Interval& iv);
  void clear();
  bool empty() const { return by_left_.empty(); }
  std::size_t size() const { return by_left_.size(); }

  std::optional<IntervalId> left_extreme() const;
  std::optional<IntervalId> right_extreme() const;
  std::vector<IntervalId> ids() const;

 private:
  std::set<std::pair<double, IntervalId>> by_left_;
  std::set<std::pair<double, IntervalId>> by_neg_right_;
};

// Distinct extremes over all slots of a node, in slot order.
std::vector<IntervalId> collect_extremes(std::span<const SlotBucket> slots);

// Chain method on one node's extremes with palette {(level,0), (level,1)}.
// For each component the alternation may start with either color; the
// start matching more of the current colors is chosen. Non-chain extremes
// map to the dummy color.
Assignment chain_color_level(std::span<const Interval> extremes, int level, const ColoringState& current);

}  // namespace cfc
