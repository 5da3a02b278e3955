#include "cfc/engine.hpp"

#include <algorithm>
#include <set>

#include "cfc/chain.hpp"

namespace cfc {

UpdateResult Engine::apply(const UpdateOp& op) {
  if (op.kind == UpdateOp::Kind::Insert) return insert(op.interval);
  return erase(op.id);
}

OracleVerdict Engine::verify() const {
  auto ivs = intervals();
  return is_conflict_free(ivs, state().assignment());
}

std::vector<Interval> EngineBase::intervals() const {
  std::vector<Interval> out;
  out.reserve(live_.size());
  for (const auto& [id, iv] : live_) out.push_back(iv);
  return out;
}

const Interval& EngineBase::live(IntervalId id) const {
  auto it = live_.find(id);
  if (it == live_.end()) throw InputError("interval " + std::to_string(id) + " is not live");
  return it->second;
}

void EngineBase::require_fresh(const Interval& iv) const {
  if (live_.count(iv.id)) throw InputError("interval " + std::to_string(iv.id) + " is already live");
  Interval::make(iv.id, iv.left, iv.right);
}

void EngineBase::require_live(IntervalId id) const { (void)live(id); }

UpdateResult EngineBase::finish_update() {
  Batch b = state_.end_batch();
  state_.ledger().record(b.recolorings);
  return UpdateResult{std::move(b.events), b.recolorings, 0};
}

UpdateResult ProperColorEngine::insert(const Interval& iv) {
  require_fresh(iv);
  std::set<int> used;
  for (const auto& [id, other] : live_) {
    if (other.intersects(iv)) used.insert(state_.color_of(id).index);
  }
  int index = 0;
  while (used.count(index)) ++index;
  begin_update();
  live_.emplace(iv.id, iv);
  state_.assign(iv.id, Color::palette(level_, index));
  return finish_update();
}

UpdateResult ProperColorEngine::erase(IntervalId id) {
  require_live(id);
  begin_update();
  live_.erase(id);
  state_.remove(id);
  return finish_update();
}

UpdateResult UniqueColorEngine::insert(const Interval& iv) {
  require_fresh(iv);
  begin_update();
  live_.emplace(iv.id, iv);
  state_.assign(iv.id, Color::palette(0, next_++));
  return finish_update();
}

UpdateResult UniqueColorEngine::erase(IntervalId id) {
  require_live(id);
  begin_update();
  live_.erase(id);
  state_.remove(id);
  return finish_update();
}

UpdateResult LocalGreedyEngine::insert(const Interval& iv) {
  require_fresh(iv);
  std::vector<Interval> all = intervals();
  all.push_back(iv);
  std::vector<Interval> component;
  for (auto& comp : connected_components(all)) {
    if (std::any_of(comp.begin(), comp.end(), [&](const Interval& x) { return x.id == iv.id; })) {
      component = std::move(comp);
      break;
    }
  }
  Assignment local;
  for (const auto& x : component) {
    if (x.id != iv.id) local.emplace(x.id, state_.color_of(x.id));
  }
  int index = 0;
  for (;; ++index) {
    local[iv.id] = Color::palette(0, index);
    if (is_conflict_free(component, local).ok()) break;
  }
  begin_update();
  live_.emplace(iv.id, iv);
  state_.assign(iv.id, Color::palette(0, index));
  return finish_update();
}

UpdateResult LocalGreedyEngine::erase(IntervalId) {
  throw ConfigError("local-greedy is insertion-only");
}

}  // namespace cfc
