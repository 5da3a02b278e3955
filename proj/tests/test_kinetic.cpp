#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "cfc/kinetic.hpp"
#include "support/oracles.hpp"

using namespace cfc;

namespace {

Trajectory still(IntervalId id, double a, double b) { return Trajectory{id, a, 0, b, 0}; }

const std::set<Color> kAllowed{Color::dummy(), Color::palette(0, 0), Color::palette(0, 1), Color::palette(0, 2)};

// Order type of all endpoints at time t, as a sign vector over pairs.
std::vector<int> order_signs(const std::vector<Trajectory>& s, double t) {
  std::vector<double> pts;
  for (const auto& tr : s) {
    pts.push_back(tr.left_at(t));
    pts.push_back(tr.right_at(t));
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) out.push_back(pts[i] < pts[j] ? -1 : (pts[i] > pts[j] ? 1 : 0));
  }
  return out;
}

// First time after t0 at which some pair of endpoints meets, by stepping
// and then bisecting on the change of the order type.
double first_crossing_by_sampling(const std::vector<Trajectory>& s, double t0, double step, double limit) {
  const auto base = order_signs(s, t0);
  double lo = t0;
  double hi = t0 + step;
  while (hi <= limit && order_signs(s, hi) == base) {
    lo = hi;
    hi += step;
  }
  REQUIRE(hi <= limit);
  for (int k = 0; k < 80; ++k) {
    const double mid = (lo + hi) / 2;
    if (order_signs(s, mid) == base) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

// Runs every event up to `until` and checks all invariants after each one
// with the independent oracles.
std::size_t audited_run(KineticMaintainer& m, double until) {
  std::size_t events = 0;
  while (auto ev = m.next_event()) {
    if (ev->time > until) break;
    auto rep = m.step();
    ++events;
    CHECK(rep.recolorings <= 3);
    CHECK(rep.added <= 1);
    CHECK(rep.removed <= 2);
    const auto problem = cfc::testing::kinetic_problem(m.rank_snapshot(), m.chain(), m.state().assignment());
    CHECK_MESSAGE(!problem.has_value(), problem.value_or(""));
    CHECK_FALSE(m.check_invariants().has_value());
    auto next = m.next_event();
    const double probe = next ? (m.time() + next->time) / 2 : m.time() + 1;
    CHECK_FALSE(cfc::testing::sweep_violation(m.positions_at(probe), m.state().assignment()).has_value());
    for (const auto& [id, c] : m.state().assignment()) CHECK(kAllowed.count(c) == 1);
  }
  return events;
}

}  // namespace

TEST_SUITE("kinetic") {
  TEST_CASE("one static interval") {
    KineticMaintainer m({still(1, 0, 1)});
    CHECK(m.chain() == std::vector<IntervalId>{1});
    CHECK(m.state().color_of(1) == Color::palette(0, 0));
    CHECK_FALSE(m.next_event().has_value());
    CHECK(std::isinf(m.horizon()));
  }

  TEST_CASE("a three-link layout starts with alternating colors") {
    KineticMaintainer m({still(1, 0, 4), still(2, 1, 3.5), still(3, 3, 8), still(4, 5, 7.5), still(5, 7, 10)});
    CHECK(m.chain() == std::vector<IntervalId>{1, 3, 5});
    CHECK(m.state().color_of(1) == Color::palette(0, 0));
    CHECK(m.state().color_of(3) == Color::palette(0, 1));
    CHECK(m.state().color_of(5) == Color::palette(0, 0));
    CHECK(m.state().color_of(2).is_dummy());
    CHECK(m.state().color_of(4).is_dummy());
    CHECK_FALSE(m.check_invariants().has_value());
    CHECK(m.verify().ok());
  }

  TEST_CASE("two static intervals never produce an event") {
    KineticMaintainer m({still(1, 0, 2), still(2, 1, 3)});
    CHECK_FALSE(m.next_event().has_value());
    CHECK(m.run_to_completion().empty());
  }

  TEST_CASE("a moving left endpoint reaches a static point at t=5") {
    KineticMaintainer m({Trajectory{1, 0, 1, 100, 0}, still(2, 5, 50)});
    auto ev = m.next_event();
    REQUIRE(ev.has_value());
    CHECK(ev->time == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(ev->kind == EventKind::LL);
    CHECK(ev->first == 1);
    CHECK(ev->second == 2);
    auto rep = m.step();
    CHECK(m.time() == doctest::Approx(5.0));
    // 2 now sticks out to the left of 1 and joins the chain.
    CHECK(rep.case_label == "B.1");
    CHECK(m.chain() == std::vector<IntervalId>{2, 1});
    CHECK(rep.added == 1);
    CHECK(m.state().color_of(2) != m.state().color_of(1));
    CHECK_FALSE(m.check_invariants().has_value());
  }

  TEST_CASE("event names") {
    CHECK(to_string(EventKind::RR) == "RR");
    CHECK(to_string(EventKind::LL) == "LL");
    CHECK(to_string(EventKind::RLMeet) == "RL-meet");
    CHECK(to_string(EventKind::RLSeparate) == "RL-separate");
  }

  TEST_CASE("first event of the lower-bound scenario matches dense sampling") {
    for (int n : {1, 2, 4}) {
      const auto s = lowerbound_scenario(n);
      KineticMaintainer m(s);
      auto ev = m.next_event();
      REQUIRE(ev.has_value());
      const double sampled = first_crossing_by_sampling(s, 0.0, 1e-3, 100.0);
      CHECK(std::abs(ev->time - sampled) < 1e-9);
    }
  }

  TEST_CASE("a non-chain interval becoming nested needs no recoloring") {
    // 1 is the chain; 2 and 3 sit inside it and 2 grows past 3.
    KineticMaintainer m({still(1, 0, 10), Trajectory{2, 2, 0, 4, 1}, still(3, 3, 5)});
    CHECK(m.chain() == std::vector<IntervalId>{1});
    auto rep = m.step();
    CHECK(rep.event.time == doctest::Approx(1.0));
    CHECK(rep.case_label == "A.2");
    CHECK(rep.recolorings == 0);
    CHECK(rep.added == 0);
    CHECK(rep.removed == 0);
  }

  TEST_CASE("a chain member swallowed by a neighbor leaves the chain") {
    // 2 is a chain link between 1 and 3 until 3 grows leftwards over it.
    KineticMaintainer m({still(1, 0, 4), still(2, 3, 7), Trajectory{3, 6, -1, 10, 0}});
    CHECK(m.chain() == std::vector<IntervalId>{1, 2, 3});
    const std::size_t events = audited_run(m, 5.5);
    CHECK(events >= 2);
    CHECK_FALSE(m.in_chain(2));
    CHECK(m.verify().ok());
  }

  TEST_CASE("random linear motion keeps every invariant") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto s = random_kinetic_scenario(100, 10.0, seed);
      REQUIRE(s.size() == 100);
      KineticMaintainer m(s);
      CHECK(m.horizon() > 10.0);
      const std::size_t events = audited_run(m, 10.0);
      CHECK(events >= 10);
      CHECK(m.state().colors_used() <= 4);
    }
  }

  TEST_CASE("exact arithmetic gives the same run") {
    const auto s = random_kinetic_scenario(40, 10.0, 9);
    KineticMaintainer a(s);
    KineticOptions opt;
    opt.exact = true;
    KineticMaintainer b(s, 0.0, opt);
    auto ra = a.run(10.0);
    auto rb = b.run(10.0);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
      CHECK(ra[i].event.kind == rb[i].event.kind);
      CHECK(ra[i].event.first == rb[i].event.first);
      CHECK(ra[i].event.second == rb[i].event.second);
      CHECK(ra[i].recolors == rb[i].recolors);
    }
    CHECK(a.state().assignment() == b.state().assignment());
  }

  TEST_CASE("gadget geometry") {
    const auto g = gadget(1, 0.0, 0.0);
    REQUIRE(g.size() == 4);
    CHECK(g[0].at(0) == Interval{1, 0, 0.55});
    CHECK(g[1].at(0) == Interval{2, 0.1, 0.5});
    CHECK(g[2].at(0) == Interval{3, 0.2, 0.9});
    CHECK(g[3].at(0) == Interval{4, 0.3, 0.8});
    const auto moving = gadget(5, 2.0, 1.5);
    CHECK(moving[0].at(1.0).left == doctest::Approx(3.5));
    CHECK(moving[3].at(1.0).right == doctest::Approx(4.3));
    CHECK(moving[2].id == 7);

    // Every overlap set is the stabbing set of some point.
    std::vector<Interval> ivs;
    for (const auto& tr : g) ivs.push_back(tr.at(0));
    const auto sets = cfc::testing::all_stabbing_sets(ivs);
    REQUIRE(gadget_overlap_sets().size() == 7);
    for (const auto& group : gadget_overlap_sets()) {
      std::set<IntervalId> ids;
      for (int k : group) ids.insert(static_cast<IntervalId>(k + 1));
      CHECK(sets.count(ids) == 1);
    }
  }

  TEST_CASE("lower-bound scenario layout") {
    CHECK(lowerbound_scenario(1).size() == 8);
    CHECK_THROWS_AS(lowerbound_scenario(0), ConfigError);
    for (int n : {1, 3, 5}) {
      KineticMaintainer m(lowerbound_scenario(n));
      CHECK_FALSE(m.check_invariants().has_value());
      CHECK_FALSE(cfc::testing::kinetic_problem(m.rank_snapshot(), m.chain(), m.state().assignment()).has_value());
      CHECK(m.verify().ok());
    }
  }

  TEST_CASE("n=3 gives nine mover/stationary gadget crossings") {
    const int n = 3;
    KineticMaintainer m(lowerbound_scenario(n));
    std::set<std::pair<int, int>> pairs;
    for (const auto& rep : m.run_to_completion()) {
      const int ga = static_cast<int>((rep.event.first - 1) / 4);
      const int gb = static_cast<int>((rep.event.second - 1) / 4);
      const bool a_moves = ga < n, b_moves = gb < n;
      if (a_moves != b_moves) pairs.insert(a_moves ? std::make_pair(ga, gb) : std::make_pair(gb, ga));
      else CHECK(ga == gb);
    }
    CHECK(pairs.size() == 9);
  }

  TEST_CASE("n=20 needs at least n^2 recolorings") {
    const int n = 20;
    KineticMaintainer m(lowerbound_scenario(n));
    long long total = 0;
    int worst = 0;
    for (const auto& rep : m.run_to_completion()) {
      total += rep.recolorings;
      worst = std::max(worst, rep.recolorings);
    }
    CHECK(total >= n * n);
    CHECK(worst <= 3);
    CHECK(m.state().colors_used() <= 4);
    CHECK(m.verify().ok());
  }

  TEST_CASE("two gadgets cannot share four colors") {
    CHECK(verify_gadget_lemma(4));
    CHECK_FALSE(verify_gadget_lemma(5));
    CHECK(single_gadget_colorable(4));
  }

  TEST_CASE("scenario files") {
    std::istringstream good("# two intervals\nK 1 0 0.5 2 0.5\n\nK 2 1 0 3 -0.25\n");
    const auto s = parse_scenario(good);
    REQUIRE(s.size() == 2);
    CHECK(s[1] == Trajectory{2, 1, 0, 3, -0.25});
    std::ostringstream out;
    write_scenario(out, s);
    std::istringstream back(out.str());
    CHECK(parse_scenario(back) == s);

    for (const char* bad : {"K 1 0 0 2\n", "Q 1 0 0 2 0\n", "K 1 0 0 2 0\nK 1 3 0 4 0\n", "K x 0 0 2 0\n",
                            "K 1 2 0 1 0\n"}) {
      std::istringstream in(bad);
      CHECK_THROWS_AS(parse_scenario(in), InputError);
    }
  }

  TEST_CASE("coincident endpoints at the start are rejected") {
    CHECK_THROWS_AS(KineticMaintainer({still(1, 0, 2), still(2, 2, 3)}), InputError);
  }

  TEST_CASE("running past a degenerate interval is an input error") {
    KineticMaintainer m({Trajectory{1, 0, 0, 10, -1}, still(2, 20, 30)});
    CHECK(m.horizon() == doctest::Approx(10.0));
    CHECK_THROWS_AS(m.run(11.0), InputError);
    CHECK_THROWS_AS(m.run_to_completion(), InputError);
  }
}
