#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfc/core.hpp"

namespace cfc {

// Random insert/delete traces. Ids are 1, 2, ... in insertion order.
struct RandomTraceParams {
  int inserts = 100;
  // After each insertion, delete a uniformly chosen live interval with this
  // probability.
  double delete_prob = 0.0;
  // When set, deletions are forced while this many intervals are live.
  std::optional<int> max_live;
  // Integer endpoints 0 <= l < r < universe when set; otherwise reals with
  // three decimals, left in [0, max_coord] and length in (0, max_length].
  std::optional<std::int64_t> universe;
  double max_coord = 1000.0;
  double max_length = 100.0;
  std::uint64_t seed = 1;
};

std::vector<UpdateOp> random_trace(const RandomTraceParams& p);

// Intervals with lengths in [1, L), three decimals, left in [0, max_coord].
struct BoundedTraceParams {
  int inserts = 100;
  int L = 8;
  double delete_prob = 0.0;
  std::optional<int> max_live;
  double max_coord = 1000.0;
  std::uint64_t seed = 1;
};

std::vector<UpdateOp> bounded_length_trace(const BoundedTraceParams& p);

// Insertions of [-1,1], ..., [-n,n].
std::vector<UpdateOp> nested_lowerbound_trace(int n);

}  // namespace cfc
