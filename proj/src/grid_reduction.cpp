#include "cfc/grid_reduction.hpp"

#include <algorithm>
#include <cmath>

namespace cfc {

GridEngine::GridEngine(int L, EngineFactory inner_factory, std::string inner_name)
    : L_(L), inner_name_(std::move(inner_name)) {
  if (L < 2) throw ConfigError("grid block length L must be >= 2, got " + std::to_string(L));
  if (!inner_factory) throw ConfigError("grid engine needs an inner engine factory");
  for (auto& e : inner_) {
    e = inner_factory();
    if (!e) throw ConfigError("inner engine factory returned nothing");
  }
}

std::int64_t GridEngine::grid_point(const Interval& iv) {
  return static_cast<std::int64_t>(std::ceil(iv.left));
}

std::int64_t GridEngine::block_of(std::int64_t x) const {
  const std::int64_t l = L_;
  return x >= 0 ? x / l : -((-x + l - 1) / l);
}

int GridEngine::parity_of(std::int64_t x) const {
  return static_cast<int>(((block_of(x) % 2) + 2) % 2);
}

Color GridEngine::lift(Color inner, int parity) {
  if (inner.is_dummy()) return inner;
  return Color::palette(2 * inner.level + parity, inner.index);
}

std::vector<IntervalId> GridEngine::Point::compute_extremes() const {
  std::vector<IntervalId> out;
  if (by_left.empty()) return out;
  IntervalId first = by_left.begin()->second;
  out.push_back(first);
  for (const auto& [neg_right, id] : by_neg_right) {
    if (id != first) {
      out.push_back(id);
      break;
    }
  }
  return out;
}

std::vector<IntervalId> GridEngine::extremes_at(std::int64_t x) const {
  auto it = points_.find(x);
  return it == points_.end() ? std::vector<IntervalId>{} : it->second.extremes;
}

void GridEngine::absorb(const UpdateResult& inner, int parity) {
  for (const auto& ev : inner.events) state_.assign(ev.id, lift(ev.color, parity));
}

// Brings the inner engine in line with the current extremes at x: dropped
// extremes leave it and turn dummy, new extremes enter it.
void GridEngine::sync(std::int64_t x) {
  Point& p = points_.at(x);
  std::vector<IntervalId> next = p.compute_extremes();
  const int parity = parity_of(x);
  Engine& inner = *inner_[static_cast<std::size_t>(parity)];
  for (IntervalId id : p.extremes) {
    if (std::find(next.begin(), next.end(), id) != next.end()) continue;
    absorb(inner.erase(id), parity);
    if (live_.count(id)) state_.assign(id, Color::dummy());
  }
  for (IntervalId id : next) {
    if (std::find(p.extremes.begin(), p.extremes.end(), id) != p.extremes.end()) continue;
    absorb(inner.insert(live_.at(id)), parity);
  }
  p.extremes = std::move(next);
  if (p.by_left.empty()) points_.erase(x);
}

UpdateResult GridEngine::insert(const Interval& iv) {
  require_fresh(iv);
  if (!(iv.length() >= 1.0) || !(iv.length() < static_cast<double>(L_))) {
    throw InputError("interval " + std::to_string(iv.id) + " has length outside [1, " + std::to_string(L_) + ")");
  }
  const std::int64_t x = grid_point(iv);
  begin_update();
  live_.emplace(iv.id, iv);
  state_.assign(iv.id, Color::dummy());
  Point& p = points_[x];
  p.by_left.emplace(iv.left, iv.id);
  p.by_neg_right.emplace(-iv.right, iv.id);
  registered_at_[iv.id] = x;
  sync(x);
  return finish_update();
}

UpdateResult GridEngine::erase(IntervalId id) {
  const Interval iv = live(id);
  const std::int64_t x = registered_at_.at(id);
  begin_update();
  Point& p = points_.at(x);
  p.by_left.erase({iv.left, id});
  p.by_neg_right.erase({-iv.right, id});
  registered_at_.erase(id);
  live_.erase(id);
  state_.remove(id);
  sync(x);
  return finish_update();
}

std::optional<std::string> GridEngine::audit() const {
  std::array<std::set<IntervalId>, 2> expected;
  std::size_t registered = 0;
  for (const auto& [x, p] : points_) {
    if (p.by_left.empty()) return "empty grid point " + std::to_string(x) + " kept";
    if (p.extremes != p.compute_extremes()) return "stale extremes at grid point " + std::to_string(x);
    for (const auto& [l, id] : p.by_left) {
      ++registered;
      auto it = live_.find(id);
      if (it == live_.end()) return "dead interval registered";
      if (grid_point(it->second) != x) return "interval " + std::to_string(id) + " registered at the wrong point";
      const bool extreme = std::find(p.extremes.begin(), p.extremes.end(), id) != p.extremes.end();
      if (!extreme && !state_.color_of(id).is_dummy()) {
        return "non-extreme interval " + std::to_string(id) + " is not dummy";
      }
    }
    for (IntervalId id : p.extremes) expected[static_cast<std::size_t>(parity_of(x))].insert(id);
  }
  if (registered != live_.size()) return "registry size mismatch";
  for (int parity = 0; parity < 2; ++parity) {
    const Engine& inner = *inner_[static_cast<std::size_t>(parity)];
    std::set<IntervalId> actual;
    for (const auto& iv : inner.intervals()) actual.insert(iv.id);
    if (actual != expected[static_cast<std::size_t>(parity)]) {
      return "inner engine " + std::to_string(parity) + " holds the wrong intervals";
    }
    for (IntervalId id : actual) {
      if (state_.color_of(id) != lift(inner.state().color_of(id), parity)) {
        return "color of interval " + std::to_string(id) + " differs from its inner color";
      }
    }
  }
  return std::nullopt;
}

}  // namespace cfc
