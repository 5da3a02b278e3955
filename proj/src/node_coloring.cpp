#include "cfc/node_coloring.hpp"

#include <algorithm>

#include "cfc/chain.hpp"

namespace cfc {

void SlotBucket::insert(const Interval& iv) {
  by_left_.emplace(iv.left, iv.id);
  by_neg_right_.emplace(-iv.right, iv.id);
}

bool SlotBucket::erase(const Interval& iv) {
  bool found = by_left_.erase({iv.left, iv.id}) > 0;
  by_neg_right_.erase({-iv.right, iv.id});
  return found;
}

void SlotBucket::clear() {
  by_left_.clear();
  by_neg_right_.clear();
}

std::optional<IntervalId> SlotBucket::left_extreme() const {
  if (by_left_.empty()) return std::nullopt;
  return by_left_.begin()->second;
}

std::optional<IntervalId> SlotBucket::right_extreme() const {
  if (by_neg_right_.empty()) return std::nullopt;
  return by_neg_right_.begin()->second;
}

std::vector<IntervalId> SlotBucket::ids() const {
  std::vector<IntervalId> out;
  out.reserve(by_left_.size());
  for (const auto& [l, id] : by_left_) out.push_back(id);
  return out;
}

std::vector<IntervalId> collect_extremes(std::span<const SlotBucket> slots) {
  std::vector<IntervalId> out;
  for (const auto& s : slots) {
    auto l = s.left_extreme();
    auto r = s.right_extreme();
    if (l) out.push_back(*l);
    if (r && r != l) out.push_back(*r);
  }
  return out;
}

Assignment chain_color_level(std::span<const Interval> extremes, int level, const ColoringState& current) {
  const Color red = Color::palette(level, 0);
  const Color blue = Color::palette(level, 1);
  Assignment out;
  for (const auto& comp : connected_components(extremes)) {
    Chain chain = build_chain(comp);
    int keep_red_first = 0;
    int keep_blue_first = 0;
    for (std::size_t pos = 0; pos < chain.members.size(); ++pos) {
      IntervalId id = chain.members[pos];
      if (!current.has(id)) continue;
      Color c = current.color_of(id);
      if (c == (pos % 2 == 0 ? red : blue)) ++keep_red_first;
      if (c == (pos % 2 == 0 ? blue : red)) ++keep_blue_first;
    }
    const Color first = keep_blue_first > keep_red_first ? blue : red;
    const Color second = first == red ? blue : red;
    for (const auto& iv : comp) out[iv.id] = Color::dummy();
    for (std::size_t pos = 0; pos < chain.members.size(); ++pos) {
      out[chain.members[pos]] = pos % 2 == 0 ? first : second;
    }
  }
  return out;
}

}  // namespace cfc
