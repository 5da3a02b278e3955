#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfc/engine.hpp"

namespace cfc {

struct AdversaryConfig {
  int n = 0;                     // insertion budget; round 1 inserts n/2 intervals
  int r = 1;                     // assumed recolorings per insertion, >= 1
  std::optional<int> c_budget;   // assumed color count, reporting only
  int check_every = 1;           // oracle check period in insertions (0 = final only)
};

struct AdversaryRound {
  int index = 0;                           // 1-based
  std::vector<Interval> inserted;          // left to right
  std::optional<Color> designated;         // general adversary
  std::vector<IntervalId> living;          // living bricks right after the round
  std::vector<Color> round_colors;         // distinct colors on the round's intervals
};

struct AdversaryInsertion {
  Interval interval;
  UpdateResult result;
  std::string signature;  // local adversary only
};

struct AdversaryTranscript {
  std::string kind;    // "general" or "local"
  std::string engine;
  int n = 0;
  int r = 0;
  std::optional<int> c_budget;
  std::vector<AdversaryInsertion> insertions;
  std::vector<AdversaryRound> rounds;
  int rho = 0;
  std::size_t colors_obs = 0;  // distinct colors the engine ever showed, dummy included
  int r_obs = 0;               // most recolorings in a single insertion
  bool conflict_free = true;
  std::optional<double> witness;
  bool designated_distinct = true;
  bool budget_respected = true;  // r_obs <= r
  int attempts = 1;              // adaptive mode reruns
  std::string stop_reason;
  // Local adversary: identical signatures must get identical responses and
  // recolorings must stay inside the newcomer's component.
  bool locality_ok = true;
  std::vector<std::string> locality_violations;

  std::vector<std::vector<Interval>> round_intervals() const;
};

// Bricks of level `level` (1-based) that are alive under `colors`. Round
// intervals must be sorted left to right. A brick (J, J^e) counts as
// contained in a region when J lies inside it: J within I (closed) or J
// within I^e (open).
std::vector<IntervalId> living_bricks(std::span<const std::vector<Interval>> rounds,
                                      std::span<const Color> designated, const Assignment& colors, int level);

// Adaptive lower-bound construction against an insertion-capable engine.
AdversaryTranscript run_general_adversary(Engine& engine, const AdversaryConfig& config);

// Runs with r = 1 first and reruns on a fresh engine with r raised to the
// observed maximum until the engine stays within r.
AdversaryTranscript run_general_adversary_adaptive(const EngineFactory& factory, int n, int max_attempts = 12);

// Construction for local engines: groups of r + 2 intervals per round.
AdversaryTranscript run_local_adversary(Engine& engine, const AdversaryConfig& config);

// Left-rank labels ordered by right endpoint, then colors by label; the
// newcomer's color is NIL.
struct Signature {
  std::vector<int> labels;
  std::vector<std::optional<Color>> colors;

  std::string to_string(const std::function<std::string(const Color&)>& name = {}) const;
  friend bool operator==(const Signature&, const Signature&) = default;
};

// Signature of the component of `newcomer` within existing + newcomer.
Signature signature_of(std::span<const Interval> existing, const Assignment& colors, const Interval& newcomer);

enum class TradeoffKind { General, Local };

// General: r > n^(1/(c+1)) / (8c). Local: r >= n^(1/(c+2)) - 2.
// Returns nullopt when r <= 0, where neither inequality applies.
std::optional<bool> check_tradeoff(double n, double c, double r, TradeoffKind kind);

// Trace lines interleaved with R lines and round comments, then a SUMMARY footer.
void write_transcript(std::ostream& out, const AdversaryTranscript& t);

}  // namespace cfc
