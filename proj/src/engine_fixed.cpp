#include "cfc/engine_fixed.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cfc/btree_layout.hpp"

namespace cfc {

namespace {

constexpr std::int64_t kMaxUniverse = std::int64_t{1} << 26;

bool is_integral(double x) { return std::floor(x) == x; }

}  // namespace

FixedEngine::FixedEngine(std::int64_t universe, int t, FixedScheme scheme)
    : universe_(universe), t_(t), scheme_(scheme) {
  if (universe < 1 || universe > kMaxUniverse) {
    throw ConfigError("universe must be in [1, 2^26], got " + std::to_string(universe));
  }
  if (t < 2) throw ConfigError("minimum degree t must be >= 2, got " + std::to_string(t));
  LayoutNode layout = balanced_layout(static_cast<std::size_t>(universe), t);
  root_ = build(layout);
}

std::size_t FixedEngine::build(const LayoutNode& layout) {
  std::size_t index = nodes_.size();
  nodes_.emplace_back();
  std::vector<std::size_t> children;
  for (const auto& child : layout.children) children.push_back(build(child));
  Node& node = nodes_[index];
  node.level = layout.level;
  for (std::size_t k : layout.keys) node.keys.push_back(static_cast<std::int64_t>(k));
  node.children = std::move(children);
  node.slots.resize(node.keys.size());
  node.slot_extremes.resize(node.keys.size());
  return index;
}

std::string FixedEngine::name() const {
  return scheme_ == FixedScheme::DistinctColors ? "fixed-distinct" : "fixed-chain";
}

std::optional<int> FixedEngine::declared_recolor_budget() const {
  return scheme_ == FixedScheme::DistinctColors ? 2 : 4 * t_;
}

std::size_t FixedEngine::palette_per_level() const {
  return scheme_ == FixedScheme::DistinctColors ? static_cast<std::size_t>(4 * t_ - 2) : 2;
}

std::size_t FixedEngine::color_budget() const {
  return 1 + palette_per_level() * static_cast<std::size_t>(height() + 1);
}

FixedEngine::Location FixedEngine::locate(const Interval& iv) const {
  if (!is_integral(iv.left) || !is_integral(iv.right) || iv.left < 0 ||
      iv.right > static_cast<double>(universe_ - 1)) {
    throw InputError("interval " + std::to_string(iv.id) + ": endpoints must be integers in [0, " +
                     std::to_string(universe_ - 1) + "]");
  }
  std::size_t v = root_;
  for (;;) {
    const Node& node = nodes_[v];
    auto it = std::lower_bound(node.keys.begin(), node.keys.end(), iv.left,
                               [](std::int64_t key, double x) { return static_cast<double>(key) < x; });
    std::size_t pos = static_cast<std::size_t>(it - node.keys.begin());
    if (it != node.keys.end() && static_cast<double>(*it) <= iv.right) {
      return Location{v, pos, node.level};
    }
    if (node.children.empty()) {
      throw InvariantError("no universe point inside interval " + std::to_string(iv.id));
    }
    v = node.children[pos];
  }
}

UpdateResult FixedEngine::insert(const Interval& iv) {
  require_fresh(iv);
  Location loc = locate(iv);
  begin_update();
  live_.emplace(iv.id, iv);
  state_.assign(iv.id, Color::dummy());
  nodes_[loc.node].slots[loc.slot].insert(iv);
  home_[iv.id] = loc;
  refresh(loc.node, loc.slot);
  return finish_update();
}

UpdateResult FixedEngine::erase(IntervalId id) {
  Interval iv = live(id);
  Location loc = home_.at(id);
  begin_update();
  nodes_[loc.node].slots[loc.slot].erase(iv);
  home_.erase(id);
  live_.erase(id);
  state_.remove(id);
  refresh(loc.node, loc.slot);
  return finish_update();
}

void FixedEngine::refresh(std::size_t node, std::size_t slot) {
  if (scheme_ == FixedScheme::DistinctColors) {
    refresh_distinct(node, slot);
  } else {
    refresh_chain(node);
  }
}

void FixedEngine::refresh_distinct(std::size_t v, std::size_t slot) {
  Node& node = nodes_[v];
  std::vector<IntervalId> next;
  auto l = node.slots[slot].left_extreme();
  auto r = node.slots[slot].right_extreme();
  if (l) next.push_back(*l);
  if (r && r != l) next.push_back(*r);
  std::vector<IntervalId>& prev = node.slot_extremes[slot];

  for (IntervalId id : prev) {
    if (std::find(next.begin(), next.end(), id) != next.end()) continue;
    node.color_index.erase(id);
    if (live_.count(id)) state_.assign(id, Color::dummy());
  }
  for (IntervalId id : next) {
    if (std::find(prev.begin(), prev.end(), id) != prev.end()) continue;
    std::set<int> used;
    for (const auto& [other, idx] : node.color_index) used.insert(idx);
    int idx = 0;
    while (used.count(idx)) ++idx;
    if (idx >= static_cast<int>(palette_per_level())) {
      throw InvariantError("level palette exhausted at node " + std::to_string(v));
    }
    node.color_index[id] = idx;
    state_.assign(id, Color::palette(node.level, idx));
  }
  prev = std::move(next);
}

void FixedEngine::refresh_chain(std::size_t v) {
  Node& node = nodes_[v];
  std::vector<IntervalId> next = collect_extremes(node.slots);
  std::vector<Interval> ivs;
  ivs.reserve(next.size());
  for (IntervalId id : next) ivs.push_back(live_.at(id));
  Assignment desired = chain_color_level(ivs, node.level, state_);
  for (IntervalId id : node.extremes) {
    if (!desired.count(id) && live_.count(id)) state_.assign(id, Color::dummy());
  }
  for (IntervalId id : next) state_.assign(id, desired.at(id));
  node.extremes = std::move(next);
}

FixedEngine::NodeView FixedEngine::node(std::size_t index) const {
  const Node& n = nodes_.at(index);
  NodeView view;
  view.level = n.level;
  view.keys = n.keys;
  view.children = n.children;
  for (const auto& s : n.slots) {
    auto ids = s.ids();
    view.members.insert(view.members.end(), ids.begin(), ids.end());
  }
  view.extremes = collect_extremes(n.slots);
  return view;
}

std::optional<std::string> FixedEngine::audit() const {
  std::size_t seen = 0;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    const Node& node = nodes_[v];
    std::vector<IntervalId> extremes = collect_extremes(node.slots);
    std::set<IntervalId> extreme_set(extremes.begin(), extremes.end());
    std::vector<Interval> extreme_ivs;
    std::set<Color> distinct;
    for (std::size_t s = 0; s < node.slots.size(); ++s) {
      for (IntervalId id : node.slots[s].ids()) {
        ++seen;
        const Interval& iv = live_.at(id);
        if (locate(iv) != Location{v, s, node.level}) {
          return "interval " + std::to_string(id) + " stored at the wrong node or slot";
        }
        Color c = state_.color_of(id);
        if (!extreme_set.count(id)) {
          if (!c.is_dummy()) return "non-extreme interval " + std::to_string(id) + " is not dummy";
          continue;
        }
        if (c.is_dummy() && scheme_ == FixedScheme::DistinctColors) {
          return "extreme interval " + std::to_string(id) + " is dummy";
        }
        if (!c.is_dummy() && c.level != node.level) {
          return "interval " + std::to_string(id) + " colored outside its level palette";
        }
        if (!c.is_dummy() && c.index >= static_cast<int>(palette_per_level())) {
          return "interval " + std::to_string(id) + " uses an index beyond the level palette";
        }
        if (scheme_ == FixedScheme::DistinctColors && !distinct.insert(c).second) {
          return "two extremes share a color at node " + std::to_string(v);
        }
        extreme_ivs.push_back(iv);
      }
    }
    Assignment local;
    for (const auto& iv : extreme_ivs) local[iv.id] = state_.color_of(iv.id);
    if (!is_conflict_free(extreme_ivs, local).ok()) {
      return "extremes of node " + std::to_string(v) + " are not locally conflict-free";
    }
  }
  if (seen != live_.size()) return "interval count mismatch between nodes and live set";
  return std::nullopt;
}

}  // namespace cfc
