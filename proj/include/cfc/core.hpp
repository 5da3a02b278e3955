#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cfc {

using IntervalId = std::int64_t;

// Malformed user input: traces, scenario files, out-of-range parameters.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid engine or generator configuration (palette too small, t < 2, ...).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A structural invariant of an engine was found broken. Always a defect.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

// Closed interval [left, right] with left < right.
struct Interval {
  IntervalId id = 0;
  double left = 0.0;
  double right = 0.0;

  static Interval make(IntervalId id, double left, double right);

  bool contains(double q) const { return left <= q && q <= right; }
  bool contains(const Interval& o) const { return left <= o.left && o.right <= right; }
  bool intersects(const Interval& o) const { return left <= o.right && o.left <= right; }
  double length() const { return right - left; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Either the universal dummy color or a palette color identified by
// (level, index). Dummy never serves as the unique color at a point.
struct Color {
  int level = -1;
  int index = -1;

  static constexpr Color dummy() { return Color{}; }
  static constexpr Color palette(int level, int index) { return Color{level, index}; }

  constexpr bool is_dummy() const { return level < 0; }

  friend constexpr auto operator<=>(const Color&, const Color&) = default;
  friend constexpr bool operator==(const Color&, const Color&) = default;

  std::string to_string() const;
};

struct ColorHash {
  std::size_t operator()(const Color& c) const noexcept {
    return std::hash<std::int64_t>{}((static_cast<std::int64_t>(c.level) << 32) ^
                                     static_cast<std::uint32_t>(c.index));
  }
};

using Assignment = std::unordered_map<IntervalId, Color>;

struct RecolorEvent {
  IntervalId id = 0;
  Color color;
  bool initial = false;  // first color of a freshly inserted interval

  friend bool operator==(const RecolorEvent&, const RecolorEvent&) = default;
};

struct UpdateRecord {
  std::uint64_t seq = 0;
  int recolorings = 0;
  int rebuild_recolorings = 0;

  int total() const { return recolorings + rebuild_recolorings; }
};

// Per-update recoloring counts. Rebuild recolorings (amortized global
// rebuilds) are tagged separately but included in total() and max.
class RecolorLedger {
 public:
  void record(int recolorings, int rebuild_recolorings = 0);

  const std::vector<UpdateRecord>& per_update() const { return records_; }
  std::uint64_t updates() const { return records_.size(); }
  std::int64_t total() const { return total_; }
  std::int64_t rebuild_total() const { return rebuild_total_; }
  int max_per_update() const { return max_; }
  int max_excluding_rebuild() const { return max_plain_; }
  double amortized() const;

 private:
  std::vector<UpdateRecord> records_;
  std::int64_t total_ = 0;
  std::int64_t rebuild_total_ = 0;
  int max_ = 0;
  int max_plain_ = 0;
};

struct Batch {
  std::vector<RecolorEvent> events;
  int recolorings = 0;
};

// Current color assignment plus the recoloring ledger. Color changes are
// grouped into batches; a batch reports net changes only, so an interval
// that is touched twice within one update counts at most once, and the
// initial color of an interval inserted during the batch is never counted.
class ColoringState {
 public:
  bool has(IntervalId id) const { return assignment_.count(id) != 0; }
  Color color_of(IntervalId id) const;
  const Assignment& assignment() const { return assignment_; }
  std::size_t size() const { return assignment_.size(); }

  // Returns true when the stored color actually changed.
  bool assign(IntervalId id, Color c);
  void remove(IntervalId id);

  void begin_batch();
  Batch end_batch();
  bool in_batch() const { return in_batch_; }

  RecolorLedger& ledger() { return ledger_; }
  const RecolorLedger& ledger() const { return ledger_; }

  // Distinct colors ever held by some interval at the end of an update (or
  // assigned outside a batch), the dummy included.
  const std::set<Color>& colors_ever() const { return colors_ever_; }
  std::size_t colors_used() const { return colors_ever_.size(); }
  // Distinct colors on live intervals right now.
  std::size_t colors_in_use() const;

 private:
  void touch(IntervalId id);

  Assignment assignment_;
  RecolorLedger ledger_;
  std::set<Color> colors_ever_;
  bool in_batch_ = false;
  std::vector<IntervalId> touched_order_;
  std::unordered_map<IntervalId, std::optional<Color>> before_;
};

struct UpdateOp {
  enum class Kind { Insert, Delete };
  Kind kind = Kind::Insert;
  Interval interval;  // Insert only
  IntervalId id = 0;  // both kinds

  static UpdateOp insert(const Interval& iv) { return {Kind::Insert, iv, iv.id}; }
  static UpdateOp erase(IntervalId id) { return {Kind::Delete, {}, id}; }

  friend bool operator==(const UpdateOp&, const UpdateOp&) = default;
};

// One representative per cell of the endpoint arrangement, sorted ascending.
// Endpoints and gap midpoints are included, plus one point beyond each end.
std::vector<double> elementary_regions(std::span<const Interval> intervals);

// Ids of intervals containing q (closed), ascending.
std::vector<IntervalId> stabbing_set(std::span<const Interval> intervals, double q);

struct OracleVerdict {
  enum class Status { Ok, Violation, IllFormed };
  Status status = Status::Ok;
  double witness = 0.0;         // Violation: a point with no unique color
  IntervalId missing_id = 0;    // IllFormed: interval without a color

  bool ok() const { return status == Status::Ok; }
  std::string describe() const;
};

// Sweep-line conflict-freeness check over the elementary regions. Witnesses
// inside open cells are preferred over witnesses at endpoints.
OracleVerdict is_conflict_free(std::span<const Interval> intervals, const Assignment& assignment);

// Ids sorted ascending; convenience for deterministic iteration.
std::vector<IntervalId> sorted_ids(const Assignment& assignment);

}  // namespace cfc
