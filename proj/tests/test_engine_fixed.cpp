#include <doctest.h>

#include <functional>
#include <random>

#include "cfc/engine_fixed.hpp"
#include "cfc/generators.hpp"
#include "support/oracles.hpp"

using namespace cfc;

namespace {

// Smallest height whose complete B-tree of minimum degree t can hold n keys.
int expected_height(std::int64_t n, int t) {
  int h = 0;
  long double cap = 2.0L * t - 1;  // keys in a single full node
  while (cap < n) {
    ++h;
    cap = cap * 2 * t + (2.0L * t - 1);
  }
  return h;
}

// In-order key listing plus shape checks on the skeleton.
void check_skeleton(const FixedEngine& e) {
  std::vector<std::int64_t> inorder;
  std::function<void(std::size_t, bool)> walk = [&](std::size_t i, bool is_root) {
    auto v = e.node(i);
    if (!is_root) {
      CHECK(static_cast<int>(v.keys.size()) >= e.t() - 1);
    }
    CHECK(static_cast<int>(v.keys.size()) <= 2 * e.t() - 1);
    if (v.children.empty()) {
      CHECK(v.level == 0);
      for (auto k : v.keys) inorder.push_back(k);
      return;
    }
    REQUIRE(v.children.size() == v.keys.size() + 1);
    for (std::size_t c = 0; c < v.children.size(); ++c) {
      CHECK(e.node(v.children[c]).level == v.level - 1);
      walk(v.children[c], false);
      if (c < v.keys.size()) inorder.push_back(v.keys[c]);
    }
  };
  walk(e.root(), true);
  REQUIRE(static_cast<std::int64_t>(inorder.size()) == e.universe());
  for (std::int64_t k = 0; k < e.universe(); ++k) CHECK(inorder[static_cast<std::size_t>(k)] == k);
}

// Highest node holding a point of iv, by scanning every node.
FixedEngine::Location scan_locate(const FixedEngine& e, const Interval& iv) {
  FixedEngine::Location best;
  int best_level = -1;
  int holders_at_best = 0;
  for (std::size_t i = 0; i < e.node_count(); ++i) {
    auto v = e.node(i);
    for (std::size_t s = 0; s < v.keys.size(); ++s) {
      const double k = static_cast<double>(v.keys[s]);
      if (iv.left <= k && k <= iv.right) {
        if (v.level > best_level) {
          best_level = v.level;
          best = {i, s, v.level};
          holders_at_best = 1;
        } else if (v.level == best_level && i != best.node) {
          ++holders_at_best;
        }
        break;
      }
    }
  }
  CHECK(holders_at_best == 1);
  return best;
}

void replay_checked(FixedEngine& e, const std::vector<UpdateOp>& ops) {
  const int max_recolor = e.declared_recolor_budget().value();
  for (const auto& op : ops) {
    auto r = e.apply(op);
    CHECK(r.recolorings <= max_recolor);
    auto bad = e.audit();
    CHECK_MESSAGE(!bad.has_value(), bad.value_or(""));
    auto ivs = e.intervals();
    CHECK_FALSE(cfc::testing::sweep_violation(ivs, e.state().assignment()).has_value());
    for (const auto& iv : ivs) {
      const Color c = e.state().color_of(iv.id);
      if (!c.is_dummy()) CHECK(c.level == e.locate(iv).level);
    }
  }
  CHECK(e.state().colors_used() <= e.color_budget());
}

}  // namespace

TEST_SUITE("fixed") {
  TEST_CASE("a one-point universe is a single node") {
    FixedEngine e(1, 2, FixedScheme::DistinctColors);
    CHECK(e.height() == 0);
    CHECK(e.node_count() == 1);
  }

  TEST_CASE("skeleton height and color budget for U=16, t=2") {
    FixedEngine e(16, 2, FixedScheme::DistinctColors);
    check_skeleton(e);
    CHECK(e.height() == expected_height(16, 2));
    CHECK(e.palette_per_level() == 6);
    CHECK(e.color_budget() == static_cast<std::size_t>(1 + 6 * (e.height() + 1)));
  }

  TEST_CASE("chain scheme for U=64, t=4") {
    FixedEngine e(64, 4, FixedScheme::ChainPerNode);
    check_skeleton(e);
    CHECK(e.height() == expected_height(64, 4));
    CHECK(e.palette_per_level() == 2);
    CHECK(e.color_budget() == static_cast<std::size_t>(1 + 2 * (e.height() + 1)));
    CHECK(e.declared_recolor_budget() == 16);
  }

  TEST_CASE("invalid configurations") {
    CHECK_THROWS_AS(FixedEngine(0, 2, FixedScheme::DistinctColors), ConfigError);
    CHECK_THROWS_AS(FixedEngine(16, 1, FixedScheme::DistinctColors), ConfigError);
    FixedEngine e(16, 2, FixedScheme::DistinctColors);
    CHECK_THROWS_AS(e.insert(Interval{1, 0.5, 3}), InputError);
    CHECK_THROWS_AS(e.insert(Interval{1, 3, 16}), InputError);
    e.insert(Interval{1, 0, 3});
    CHECK_THROWS_AS(e.insert(Interval{1, 4, 5}), InputError);
    CHECK_THROWS_AS(e.erase(9), InputError);
  }

  TEST_CASE("an interval over the root key lives at the root") {
    FixedEngine e(64, 2, FixedScheme::DistinctColors);
    auto root = e.node(e.root());
    const double k = static_cast<double>(root.keys.front());
    auto loc = e.locate(Interval{1, k - 1, k + 1});
    CHECK(loc.node == e.root());
    CHECK(loc.slot == 0);
  }

  TEST_CASE("locate matches a scan over all nodes") {
    FixedEngine e(256, 3, FixedScheme::ChainPerNode);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> coord(0, 255);
    for (int i = 0; i < 2000; ++i) {
      int a = coord(rng), b = coord(rng);
      if (a == b) continue;
      Interval iv{i, static_cast<double>(std::min(a, b)), static_cast<double>(std::max(a, b))};
      CHECK(e.locate(iv) == scan_locate(e, iv));
    }
  }

  TEST_CASE("first insertion costs nothing") {
    for (auto scheme : {FixedScheme::DistinctColors, FixedScheme::ChainPerNode}) {
      FixedEngine e(64, 2, scheme);
      auto r = e.insert(Interval{1, 3, 9});
      CHECK(r.recolorings == 0);
      CHECK_FALSE(e.state().color_of(1).is_dummy());
    }
  }

  TEST_CASE("replacing both extremes of a slot costs at most two recolorings") {
    FixedEngine e(64, 2, FixedScheme::DistinctColors);
    e.insert(Interval{1, 10, 12});
    auto loc = e.locate(Interval{1, 10, 12});
    e.insert(Interval{2, 11, 12});
    const double key = static_cast<double>(e.node(loc.node).keys[loc.slot]);
    // Wider on both sides but still with the same leftmost key of that node.
    Interval wide{3, std::max(key - 1, 10.0 - 1), 13};
    if (e.locate(wide) == loc) {
      auto r = e.insert(wide);
      CHECK(r.recolorings <= 2);
      CHECK(e.state().color_of(1).is_dummy());
    }
    CHECK(e.verify().ok());
  }

  TEST_CASE("deleting a dummy costs nothing, deleting the last interval empties") {
    FixedEngine e(64, 2, FixedScheme::DistinctColors);
    e.insert(Interval{1, 10, 20});
    e.insert(Interval{2, 11, 19});
    auto loc1 = e.locate(Interval{1, 10, 20});
    auto loc2 = e.locate(Interval{2, 11, 19});
    if (loc1 == loc2) {
      CHECK(e.state().color_of(2).is_dummy());
      CHECK(e.erase(2).recolorings == 0);
    }
    e.erase(1);
    if (e.size() > 0) e.erase(2);
    CHECK(e.size() == 0);
    CHECK(e.verify().ok());
  }

  TEST_CASE("deleting an extreme promotes a successor") {
    FixedEngine e(64, 2, FixedScheme::DistinctColors);
    e.insert(Interval{1, 20, 40});
    e.insert(Interval{2, 21, 39});
    e.insert(Interval{3, 22, 38});
    auto r = e.erase(1);
    CHECK(r.recolorings >= 1);
    CHECK(r.recolorings <= 2);
    CHECK(e.verify().ok());
    CHECK_FALSE(e.audit().has_value());
  }

  TEST_CASE("random traces stay conflict-free under both schemes") {
    RandomTraceParams p;
    p.inserts = 700;
    p.delete_prob = 0.45;
    p.universe = 256;
    p.seed = 12;
    auto ops = random_trace(p);
    SUBCASE("distinct colors") {
      FixedEngine e(256, 2, FixedScheme::DistinctColors);
      CHECK(e.declared_recolor_budget() == 2);
      replay_checked(e, ops);
    }
    SUBCASE("chain per node") {
      FixedEngine e(256, 2, FixedScheme::ChainPerNode);
      replay_checked(e, ops);
    }
    SUBCASE("chain per node, t=5") {
      FixedEngine e(256, 5, FixedScheme::ChainPerNode);
      replay_checked(e, ops);
    }
  }
}
