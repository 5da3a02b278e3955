#include <doctest.h>

#include <random>
#include <sstream>

#include "cfc/core.hpp"
#include "cfc/trace.hpp"
#include "support/oracles.hpp"

using namespace cfc;
using cfc::testing::all_stabbing_sets;
using cfc::testing::dense_violation;
using cfc::testing::stab;

namespace {
const Color kRed = Color::palette(0, 0);
const Color kBlue = Color::palette(0, 1);
}  // namespace

TEST_SUITE("core") {
  TEST_CASE("intervals reject degenerate or reversed endpoints") {
    CHECK_THROWS_AS(Interval::make(1, 2.0, 2.0), InputError);
    CHECK_THROWS_AS(Interval::make(1, 3.0, 2.0), InputError);
    CHECK(Interval::make(1, 0.0, 1.0).contains(1.0));
  }

  TEST_CASE("elementary regions of the empty set") { CHECK(elementary_regions({}).empty()); }

  TEST_CASE("elementary regions of one interval cover all five cells") {
    std::vector<Interval> ivs{{1, 0, 1}};
    auto pts = elementary_regions(ivs);
    bool below = false, at0 = false, inside = false, at1 = false, above = false;
    for (double q : pts) {
      below = below || q < 0;
      at0 = at0 || q == 0;
      inside = inside || (q > 0 && q < 1);
      at1 = at1 || q == 1;
      above = above || q > 1;
    }
    CHECK((below && at0 && inside && at1 && above));
    CHECK(std::is_sorted(pts.begin(), pts.end()));
  }

  TEST_CASE("elementary regions of two overlapping intervals reach every stabbing set") {
    std::vector<Interval> ivs{{1, 0, 2}, {2, 1, 3}};
    std::set<std::set<IntervalId>> reached;
    for (double q : elementary_regions(ivs)) {
      auto s = stabbing_set(ivs, q);
      reached.insert(std::set<IntervalId>(s.begin(), s.end()));
    }
    CHECK(reached == std::set<std::set<IntervalId>>{{}, {1}, {1, 2}, {2}});
  }

  TEST_CASE("elementary regions reach every stabbing set on random instances") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 300; ++round) {
      auto ivs = cfc::testing::random_intervals(rng, 1 + round % 10, 15);
      std::set<std::set<IntervalId>> reached;
      for (double q : elementary_regions(ivs)) {
        auto s = stabbing_set(ivs, q);
        reached.insert(std::set<IntervalId>(s.begin(), s.end()));
      }
      CHECK(reached == all_stabbing_sets(ivs));
    }
  }

  TEST_CASE("stabbing sets use closed intervals") {
    std::vector<Interval> ivs{{1, 0, 2}, {2, 1, 3}};
    CHECK(stabbing_set(ivs, 1.5) == std::vector<IntervalId>{1, 2});
    CHECK(stabbing_set(ivs, 1.0) == std::vector<IntervalId>{1, 2});
    CHECK(stabbing_set(ivs, 5.0).empty());
  }

  TEST_CASE("oracle on the empty set") { CHECK(is_conflict_free({}, {}).ok()); }

  TEST_CASE("oracle finds the overlap of two equal colors in the open cell") {
    std::vector<Interval> ivs{{1, 0, 2}, {2, 1, 3}};
    Assignment a{{1, kRed}, {2, kRed}};
    auto v = is_conflict_free(ivs, a);
    REQUIRE(v.status == OracleVerdict::Status::Violation);
    CHECK(v.witness == doctest::Approx(1.5));
  }

  TEST_CASE("oracle accepts a chain-colored component") {
    std::vector<Interval> ivs{{1, 0, 4}, {2, 1, 3}, {3, 3, 8}, {4, 5, 7}, {5, 7, 10}};
    Assignment a{{1, kRed}, {2, Color::dummy()}, {3, kBlue}, {4, Color::dummy()}, {5, kRed}};
    CHECK(is_conflict_free(ivs, a).ok());
    CHECK_FALSE(dense_violation(ivs, a, 0.25).has_value());
  }

  TEST_CASE("dummy never serves as the unique color") {
    std::vector<Interval> ivs{{1, 0, 1}};
    Assignment a{{1, Color::dummy()}};
    CHECK(is_conflict_free(ivs, a).status == OracleVerdict::Status::Violation);
  }

  TEST_CASE("oracle reports a missing color as ill-formed") {
    std::vector<Interval> ivs{{1, 0, 1}, {2, 3, 4}};
    Assignment a{{1, kRed}};
    auto v = is_conflict_free(ivs, a);
    CHECK(v.status == OracleVerdict::Status::IllFormed);
    CHECK(v.missing_id == 2);
  }

  TEST_CASE("oracle agrees with dense sampling on random colorings") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> pick(-1, 2);
    int violations = 0;
    for (int round = 0; round < 500; ++round) {
      auto ivs = cfc::testing::random_intervals(rng, 1 + round % 8, 12);
      Assignment a;
      for (const auto& iv : ivs) {
        const int c = pick(rng);
        a[iv.id] = c < 0 ? Color::dummy() : Color::palette(0, c);
      }
      auto v = is_conflict_free(ivs, a);
      auto naive = dense_violation(ivs, a, 0.25);
      CHECK(v.ok() == !naive.has_value());
      if (!v.ok()) {
        ++violations;
        CHECK_FALSE(cfc::testing::point_ok(ivs, a, v.witness));
      }
    }
    CHECK(violations > 0);
  }

  TEST_CASE("a fresh interval's first color is not a recoloring") {
    ColoringState st;
    st.begin_batch();
    st.assign(1, kRed);
    auto b = st.end_batch();
    CHECK(b.recolorings == 0);
    REQUIRE(b.events.size() == 1);
    CHECK(b.events[0].initial);
  }

  TEST_CASE("batches count net changes") {
    ColoringState st;
    st.assign(1, kRed);
    st.assign(2, kRed);
    st.begin_batch();
    st.assign(1, kBlue);
    st.assign(1, kRed);  // back to the original color
    st.assign(2, kBlue);
    auto b = st.end_batch();
    CHECK(b.recolorings == 1);
    st.ledger().record(b.recolorings);
    st.ledger().record(3);
    CHECK(st.ledger().total() == 4);
    CHECK(st.ledger().max_per_update() == 3);
    CHECK(st.ledger().amortized() == doctest::Approx(2.0));
  }

  TEST_CASE("colors are counted when visible at the end of an update") {
    ColoringState st;
    st.begin_batch();
    st.assign(1, Color::dummy());  // transient
    st.assign(1, kRed);
    st.end_batch();
    CHECK(st.colors_used() == 1);
  }

  TEST_CASE("nested batches are rejected") {
    ColoringState st;
    st.begin_batch();
    CHECK_THROWS_AS(st.begin_batch(), InvariantError);
  }
}

TEST_SUITE("trace") {
  TEST_CASE("round trip of inserts, deletes and comments") {
    auto ops = parse_trace_string("# header\nI 1 0 2.5\nI 2 -1 1\n\nD 1\n");
    REQUIRE(ops.size() == 3);
    CHECK(ops[0] == UpdateOp::insert(Interval{1, 0, 2.5}));
    CHECK(ops[2] == UpdateOp::erase(1));
    std::ostringstream out;
    write_trace(out, ops);
    CHECK(out.str() == "I 1 0 2.5\nI 2 -1 1\nD 1\n");
  }

  TEST_CASE("malformed lines report their line number") {
    try {
      parse_trace_string("I 1 0 1\nI 2 zero 1\n");
      FAIL("expected an error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_trace_string("D 4\n"), InputError);
    CHECK_THROWS_AS(parse_trace_string("I 1 0 1\nI 1 2 3\n"), InputError);
    CHECK_THROWS_AS(parse_trace_string("I 1 1 1\n"), InputError);
  }

  TEST_CASE("recolor lines") {
    CHECK(format_recolor({3, Color::palette(2, 1), false}) == "R 3 2 1");
    CHECK(format_recolor({3, Color::dummy(), false}) == "R 3 dummy");
  }

  TEST_CASE("numbers print in fixed notation") {
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(-3.0) == "-3");
    CHECK(format_number(0.125) == "0.125");
    CHECK(format_number(1e-7).find('e') == std::string::npos);
  }

  TEST_CASE("run logs attach recolor lines to the preceding update") {
    std::istringstream in("# method x\nI 1 0 1\nR 1 0 0\nI 2 2 3\nR 2 0 0\nR 1 dummy\nSUMMARY colors=2\n");
    auto log = parse_run_log(in);
    REQUIRE(log.size() == 2);
    CHECK(log[1].recolors.size() == 2);
    CHECK(log[1].recolors[1].color.is_dummy());
  }
}
