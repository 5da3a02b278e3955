#include "cfc/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cfc {

Interval Interval::make(IntervalId id, double left, double right) {
  if (!std::isfinite(left) || !std::isfinite(right)) {
    throw InputError("interval " + std::to_string(id) + ": non-finite endpoint");
  }
  if (!(left < right)) {
    throw InputError("interval " + std::to_string(id) + ": left endpoint must be < right endpoint");
  }
  return Interval{id, left, right};
}

std::string Color::to_string() const {
  if (is_dummy()) return "dummy";
  return std::to_string(level) + ":" + std::to_string(index);
}

void RecolorLedger::record(int recolorings, int rebuild_recolorings) {
  UpdateRecord rec{records_.size() + 1, recolorings, rebuild_recolorings};
  records_.push_back(rec);
  total_ += rec.total();
  rebuild_total_ += rebuild_recolorings;
  max_ = std::max(max_, rec.total());
  max_plain_ = std::max(max_plain_, recolorings);
}

double RecolorLedger::amortized() const {
  if (records_.empty()) return 0.0;
  return static_cast<double>(total_) / static_cast<double>(records_.size());
}

Color ColoringState::color_of(IntervalId id) const {
  auto it = assignment_.find(id);
  if (it == assignment_.end()) {
    throw InvariantError("no color recorded for interval " + std::to_string(id));
  }
  return it->second;
}

void ColoringState::touch(IntervalId id) {
  if (!in_batch_) return;
  if (before_.count(id)) return;
  auto it = assignment_.find(id);
  before_.emplace(id, it == assignment_.end() ? std::nullopt : std::optional<Color>(it->second));
  touched_order_.push_back(id);
}

bool ColoringState::assign(IntervalId id, Color c) {
  touch(id);
  if (!in_batch_) colors_ever_.insert(c);
  auto [it, inserted] = assignment_.try_emplace(id, c);
  if (inserted) return true;
  if (it->second == c) return false;
  it->second = c;
  return true;
}

void ColoringState::remove(IntervalId id) {
  touch(id);
  assignment_.erase(id);
}

void ColoringState::begin_batch() {
  if (in_batch_) throw InvariantError("nested recolor batch");
  in_batch_ = true;
  touched_order_.clear();
  before_.clear();
}

Batch ColoringState::end_batch() {
  if (!in_batch_) throw InvariantError("end_batch without begin_batch");
  Batch batch;
  for (IntervalId id : touched_order_) {
    auto now = assignment_.find(id);
    if (now == assignment_.end()) continue;
    colors_ever_.insert(now->second);
    const auto& before = before_.at(id);
    if (!before) {
      batch.events.push_back({id, now->second, true});
    } else if (*before != now->second) {
      batch.events.push_back({id, now->second, false});
      ++batch.recolorings;
    }
  }
  in_batch_ = false;
  touched_order_.clear();
  before_.clear();
  return batch;
}

std::size_t ColoringState::colors_in_use() const {
  std::set<Color> in_use;
  for (const auto& [id, c] : assignment_) in_use.insert(c);
  return in_use.size();
}

std::vector<double> elementary_regions(std::span<const Interval> intervals) {
  std::vector<double> ends;
  ends.reserve(intervals.size() * 2);
  for (const auto& iv : intervals) {
    ends.push_back(iv.left);
    ends.push_back(iv.right);
  }
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  std::vector<double> points;
  if (ends.empty()) return points;
  points.reserve(ends.size() * 2 + 1);
  points.push_back(ends.front() - 1.0);
  for (std::size_t i = 0; i < ends.size(); ++i) {
    points.push_back(ends[i]);
    if (i + 1 < ends.size()) points.push_back(ends[i] + (ends[i + 1] - ends[i]) / 2.0);
  }
  points.push_back(ends.back() + 1.0);
  return points;
}

std::vector<IntervalId> stabbing_set(std::span<const Interval> intervals, double q) {
  std::vector<IntervalId> ids;
  for (const auto& iv : intervals) {
    if (iv.contains(q)) ids.push_back(iv.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string OracleVerdict::describe() const {
  std::ostringstream os;
  switch (status) {
    case Status::Ok:
      os << "ok";
      break;
    case Status::Violation:
      os << "violation at q=" << witness;
      break;
    case Status::IllFormed:
      os << "ill-formed: interval " << missing_id << " has no color";
      break;
  }
  return os.str();
}

OracleVerdict is_conflict_free(std::span<const Interval> intervals, const Assignment& assignment) {
  struct Event {
    double x;
    int closing;  // 0 = left endpoint, 1 = right endpoint
    Color color;
  };
  std::vector<Event> events;
  events.reserve(intervals.size() * 2);
  for (const auto& iv : intervals) {
    auto it = assignment.find(iv.id);
    if (it == assignment.end()) {
      OracleVerdict v;
      v.status = OracleVerdict::Status::IllFormed;
      v.missing_id = iv.id;
      return v;
    }
    events.push_back({iv.left, 0, it->second});
    events.push_back({iv.right, 1, it->second});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.closing < b.closing;
  });

  std::unordered_map<Color, int, ColorHash> counts;
  int uniques = 0;
  int active = 0;
  auto add = [&](Color c) {
    ++active;
    if (c.is_dummy()) return;
    int k = ++counts[c];
    if (k == 1) ++uniques;
    if (k == 2) --uniques;
  };
  auto drop = [&](Color c) {
    --active;
    if (c.is_dummy()) return;
    int k = --counts[c];
    if (k == 1) ++uniques;
    if (k == 0) --uniques;
  };

  std::optional<double> endpoint_witness;
  std::size_t i = 0;
  while (i < events.size()) {
    const double x = events[i].x;
    std::size_t j = i;
    for (; j < events.size() && events[j].x == x && events[j].closing == 0; ++j) add(events[j].color);
    if (active > 0 && uniques == 0 && !endpoint_witness) endpoint_witness = x;
    for (; j < events.size() && events[j].x == x; ++j) drop(events[j].color);
    if (j < events.size() && active > 0 && uniques == 0) {
      OracleVerdict v;
      v.status = OracleVerdict::Status::Violation;
      v.witness = x + (events[j].x - x) / 2.0;
      return v;
    }
    i = j;
  }
  if (endpoint_witness) {
    OracleVerdict v;
    v.status = OracleVerdict::Status::Violation;
    v.witness = *endpoint_witness;
    return v;
  }
  return {};
}

std::vector<IntervalId> sorted_ids(const Assignment& assignment) {
  std::vector<IntervalId> ids;
  ids.reserve(assignment.size());
  for (const auto& [id, c] : assignment) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace cfc
