#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfc/core.hpp"

namespace cfc {

// Linear endpoint motion: left(t) = a0 + va t, right(t) = b0 + vb t.
struct Trajectory {
  IntervalId id = 0;
  double a0 = 0.0;
  double va = 0.0;
  double b0 = 0.0;
  double vb = 0.0;

  double left_at(double t) const { return a0 + va * t; }
  double right_at(double t) const { return b0 + vb * t; }
  Interval at(double t) const { return Interval{id, left_at(t), right_at(t)}; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Scenario files: "K <id> <a0> <va> <b0> <vb>" per line, '#' comments.
std::vector<Trajectory> parse_scenario(std::istream& in);
void write_scenario(std::ostream& out, const std::vector<Trajectory>& scenario);

enum class EventKind { RR, LL, RLMeet, RLSeparate };
std::string to_string(EventKind kind);

struct KineticEvent {
  double time = 0.0;
  EventKind kind = EventKind::RR;
  IntervalId first = 0;   // owner of the endpoint that was further left
  IntervalId second = 0;  // owner of the endpoint that was further right
};

struct EventReport {
  KineticEvent event;
  std::string case_label;  // A.1, A.2, B.1, B.2, C.1, C.2
  std::vector<RecolorEvent> recolors;
  int recolorings = 0;
  int added = 0;
  int removed = 0;
};

struct KineticOptions {
  // Event times as exact rationals instead of doubles; ties are then
  // detected exactly rather than within `tolerance`.
  bool exact = false;
  double tolerance = 1e-9;
  // Check the chain and color invariants after every event.
  bool audit_every = true;
};

// Chain-based kinetic coloring with three chain colors, Palette(0, 0..2),
// plus the dummy. The endpoint order is maintained explicitly; every event
// swaps two neighbors in that order and all predicates are evaluated on
// ranks, which are exact between events.
class KineticMaintainer {
 public:
  explicit KineticMaintainer(std::vector<Trajectory> scenario, double t0 = 0.0, KineticOptions options = {});
  ~KineticMaintainer();
  KineticMaintainer(KineticMaintainer&&) noexcept;
  KineticMaintainer& operator=(KineticMaintainer&&) noexcept;

  std::optional<KineticEvent> next_event() const;
  EventReport step();
  // Processes every event with time <= until. Throws InputError if some
  // interval degenerates before `until`.
  std::vector<EventReport> run(double until);
  std::vector<EventReport> run_to_completion();

  double time() const { return time_; }
  std::size_t size() const { return trajs_.size(); }
  std::size_t events_processed() const { return processed_; }
  const ColoringState& state() const { return state_; }

  std::vector<IntervalId> chain() const;  // left to right
  bool in_chain(IntervalId id) const;

  // Intervals with rank coordinates: same order type as the real
  // configuration just after the last processed event.
  std::vector<Interval> rank_snapshot() const;
  std::vector<Interval> positions_at(double t) const;

  // C1-C3 and the color invariant, with a description of the first failure.
  std::optional<std::string> check_invariants() const;
  OracleVerdict verify() const;

  // Latest time at which some interval still has positive length, or
  // +infinity when none degenerates.
  double horizon() const;

 private:
  struct Impl;
  double time_ = 0.0;
  std::size_t processed_ = 0;
  std::vector<Trajectory> trajs_;
  ColoringState state_;
  Impl* impl_;
};

// Four intervals realizing the seven overlap sets G1..G7, shifted by
// `offset` and moving rigidly at `speed`. Ids first_id .. first_id + 3.
std::vector<Trajectory> gadget(IntervalId first_id, double offset, double speed);

// Overlap sets as index lists into a gadget (0-based): {0}, {0,1}, ...
const std::vector<std::vector<int>>& gadget_overlap_sets();

// n unit-speed gadgets spaced 3 apart, left of n stationary gadgets
// spaced 3n + 1 apart. 8n intervals, ids 1..8n.
std::vector<Trajectory> lowerbound_scenario(int n);

// True iff no coloring of two gadgets' eight intervals with `colors` plain
// colors makes every Gi, Hj and Gi u Hj conflict-free.
bool verify_gadget_lemma(int colors = 4);

// True iff a single gadget can be colored so that all Gi are conflict-free.
bool single_gadget_colorable(int colors);

// Random linear-motion scenario with intervals alive through `horizon` and
// endpoints in general position at t = 0.
std::vector<Trajectory> random_kinetic_scenario(int n, double horizon, std::uint64_t seed);

}  // namespace cfc
