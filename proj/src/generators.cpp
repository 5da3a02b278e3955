#include "cfc/generators.hpp"

#include <algorithm>
#include <random>

#include "cfc/online.hpp"

namespace cfc {

namespace {

// Shared driver: draws intervals from `make` and interleaves deletions.
template <class Make>
std::vector<UpdateOp> drive(int inserts, double delete_prob, std::optional<int> max_live, std::mt19937_64& rng,
                            Make make) {
  if (inserts < 0) throw ConfigError("number of insertions must be non-negative");
  if (delete_prob < 0.0 || delete_prob > 1.0) throw ConfigError("delete probability must lie in [0, 1]");
  if (max_live && *max_live < 1) throw ConfigError("max live count must be at least 1");
  std::vector<UpdateOp> ops;
  std::vector<IntervalId> live;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto erase_random = [&] {
    std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
    const std::size_t k = pick(rng);
    ops.push_back(UpdateOp::erase(live[k]));
    live[k] = live.back();
    live.pop_back();
  };
  for (int i = 1; i <= inserts; ++i) {
    while (max_live && static_cast<int>(live.size()) >= *max_live) erase_random();
    ops.push_back(UpdateOp::insert(make(static_cast<IntervalId>(i))));
    live.push_back(i);
    if (delete_prob > 0.0 && coin(rng) < delete_prob) erase_random();
  }
  return ops;
}

}  // namespace

std::vector<UpdateOp> random_trace(const RandomTraceParams& p) {
  std::mt19937_64 rng(p.seed);
  if (p.universe) {
    if (*p.universe < 2) throw ConfigError("integer traces need a universe of at least 2");
    std::uniform_int_distribution<std::int64_t> coord(0, *p.universe - 1);
    return drive(p.inserts, p.delete_prob, p.max_live, rng, [&](IntervalId id) {
      std::int64_t a = coord(rng);
      std::int64_t b = coord(rng);
      while (b == a) b = coord(rng);
      if (a > b) std::swap(a, b);
      return Interval::make(id, static_cast<double>(a), static_cast<double>(b));
    });
  }
  if (!(p.max_coord > 0.0) || !(p.max_length >= 0.002)) throw ConfigError("coordinate ranges must be positive");
  std::uniform_int_distribution<std::int64_t> left(0, static_cast<std::int64_t>(p.max_coord * 1000.0));
  std::uniform_int_distribution<std::int64_t> len(1, static_cast<std::int64_t>(p.max_length * 1000.0));
  return drive(p.inserts, p.delete_prob, p.max_live, rng, [&](IntervalId id) {
    const std::int64_t l = left(rng);
    return Interval::make(id, static_cast<double>(l) / 1000.0, static_cast<double>(l + len(rng)) / 1000.0);
  });
}

std::vector<UpdateOp> bounded_length_trace(const BoundedTraceParams& p) {
  if (p.L < 2) throw ConfigError("bounded-length traces need L >= 2");
  std::mt19937_64 rng(p.seed);
  // Work in thousandths and keep a margin of one unit on both sides of
  // [1, L) so that rounding in right - left cannot leave the range.
  std::uniform_int_distribution<std::int64_t> left(0, static_cast<std::int64_t>(p.max_coord * 1000.0));
  std::uniform_int_distribution<std::int64_t> len(1001, std::int64_t{1000} * p.L - 2);
  return drive(p.inserts, p.delete_prob, p.max_live, rng, [&](IntervalId id) {
    const std::int64_t l = left(rng);
    return Interval::make(id, static_cast<double>(l) / 1000.0, static_cast<double>(l + len(rng)) / 1000.0);
  });
}

std::vector<UpdateOp> nested_lowerbound_trace(int n) {
  std::vector<UpdateOp> ops;
  for (const auto& iv : nested_lowerbound_instance(n)) ops.push_back(UpdateOp::insert(iv));
  return ops;
}

}  // namespace cfc
