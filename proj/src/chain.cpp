#include "cfc/chain.hpp"

#include <algorithm>

namespace cfc {

namespace {

bool by_left(const Interval& a, const Interval& b) {
  if (a.left != b.left) return a.left < b.left;
  return a.id < b.id;
}

}  // namespace

std::vector<std::vector<Interval>> connected_components(std::span<const Interval> intervals) {
  std::vector<Interval> sorted(intervals.begin(), intervals.end());
  std::sort(sorted.begin(), sorted.end(), by_left);
  std::vector<std::vector<Interval>> out;
  double reach = 0.0;
  for (const auto& iv : sorted) {
    if (out.empty() || iv.left > reach) {
      out.emplace_back();
      reach = iv.right;
    }
    out.back().push_back(iv);
    reach = std::max(reach, iv.right);
  }
  return out;
}

Chain build_chain(std::span<const Interval> component) {
  std::vector<Interval> sorted(component.begin(), component.end());
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) {
    if (a.left != b.left) return a.left < b.left;
    if (a.right != b.right) return a.right > b.right;
    return a.id < b.id;
  });
  Chain chain;
  std::size_t i = 0;
  while (i < sorted.size()) {
    Interval cur = sorted[i++];
    chain.members.push_back(cur.id);
    for (;;) {
      const Interval* best = nullptr;
      for (; i < sorted.size() && sorted[i].left <= cur.right; ++i) {
        const Interval& cand = sorted[i];
        if (cand.right <= cur.right) continue;
        if (!best || cand.right > best->right || (cand.right == best->right && cand.id < best->id)) {
          best = &cand;
        }
      }
      if (!best) break;
      cur = *best;
      chain.members.push_back(cur.id);
    }
  }
  return chain;
}

Assignment color_chain(const Chain& chain, std::span<const Interval> component,
                       std::span<const Color> palette) {
  if (palette.size() < 2) throw ConfigError("chain coloring needs at least two palette colors");
  Assignment out;
  for (const auto& iv : component) out[iv.id] = Color::dummy();
  for (std::size_t pos = 0; pos < chain.members.size(); ++pos) {
    out[chain.members[pos]] = palette[pos % palette.size()];
  }
  return out;
}

ColoringState static_color(std::span<const Interval> intervals) {
  const Color palette[] = {Color::palette(0, 0), Color::palette(0, 1)};
  ColoringState state;
  for (const auto& comp : connected_components(intervals)) {
    Chain chain = build_chain(comp);
    for (const auto& [id, c] : color_chain(chain, comp, palette)) state.assign(id, c);
  }
  return state;
}

}  // namespace cfc
