#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cfc/engine.hpp"

namespace cfc {

// Reduction for intervals with lengths in [1, L). Every interval registers
// at the leftmost integer grid point it contains; grid point x belongs to
// block floor(x / L). Per grid point only two extremes stay visible: the
// interval reaching furthest left, and among the others the one reaching
// furthest right. Extremes are handed to one inner engine per block parity;
// all other intervals get the dummy color.
//
// Inner color (level, j) of parity p becomes (2 * level + p, j), so the two
// parities draw from disjoint color sets while blocks of equal parity share.
class GridEngine final : public EngineBase {
 public:
  GridEngine(int L, EngineFactory inner_factory, std::string inner_name = "custom");

  std::string name() const override { return "grid"; }
  UpdateResult insert(const Interval& iv) override;
  UpdateResult erase(IntervalId id) override;

  int L() const { return L_; }
  const std::string& inner_name() const { return inner_name_; }
  const Engine& inner(int parity) const { return *inner_.at(static_cast<std::size_t>(parity)); }

  static std::int64_t grid_point(const Interval& iv);
  std::int64_t block_of(std::int64_t x) const;
  int parity_of(std::int64_t x) const;

  // Current extremes registered at grid point x (0, 1 or 2 ids).
  std::vector<IntervalId> extremes_at(std::int64_t x) const;

  static Color lift(Color inner, int parity);

  // Cross-checks the registry and extremes against the inner engines and colors.
  std::optional<std::string> audit() const;

 private:
  struct Point {
    std::set<std::pair<double, IntervalId>> by_left;
    std::set<std::pair<double, IntervalId>> by_neg_right;
    std::vector<IntervalId> extremes;

    std::vector<IntervalId> compute_extremes() const;
  };

  void sync(std::int64_t x);
  void absorb(const UpdateResult& inner, int parity);

  int L_;
  std::string inner_name_;
  std::array<std::unique_ptr<Engine>, 2> inner_;
  std::map<std::int64_t, Point> points_;
  std::unordered_map<IntervalId, std::int64_t> registered_at_;
};

}  // namespace cfc
