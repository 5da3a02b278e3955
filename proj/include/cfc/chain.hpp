#pragma once

#include <span>
#include <vector>

#include "cfc/core.hpp"

namespace cfc {

// Chain members in left-to-right order. Consecutive members intersect,
// non-consecutive members are disjoint, and together they cover the union
// of the set they were built from.
struct Chain {
  std::vector<IntervalId> members;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

// Maximal groups of intervals connected through (closed) overlaps. Each
// group is sorted by (left, id); groups are ordered left to right.
std::vector<std::vector<Interval>> connected_components(std::span<const Interval> intervals);

// Greedy chain: start with the interval of leftmost left endpoint (longest
// first, then smaller id), then repeatedly take, among intervals whose left
// endpoint lies in the current member, the one reaching furthest right
// (smaller id on ties). A disconnected input yields the concatenation of
// the chains of its components.
Chain build_chain(std::span<const Interval> component);

// Chain members get palette[position mod |palette|], everything else in the
// component gets the dummy color. Throws ConfigError if |palette| < 2.
Assignment color_chain(const Chain& chain, std::span<const Interval> component,
                       std::span<const Color> palette);

// Static 3-color coloring: every component is chain-colored with
// Palette(0,0), Palette(0,1) plus the dummy.
ColoringState static_color(std::span<const Interval> intervals);

}  // namespace cfc
