#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cfc/adversary.hpp"
#include "cfc/engine_dynamic.hpp"
#include "support/oracles.hpp"

using namespace cfc;

namespace {

// Living bricks straight from the definition: a level-1 brick is alive when
// its interval has the round's designated color; a higher brick also needs
// a living brick one level down inside its interval and another inside the
// open gap up to the next interval of its round.
std::vector<IntervalId> brute_living(const std::vector<std::vector<Interval>>& rounds,
                                     const std::vector<Color>& designated, const Assignment& colors, int level) {
  if (level <= 0) return {};
  const auto& mine = rounds[static_cast<std::size_t>(level - 1)];
  const auto below = brute_living(rounds, designated, colors, level - 1);
  std::vector<Interval> below_ivs;
  if (level > 1) {
    for (const auto& iv : rounds[static_cast<std::size_t>(level - 2)]) {
      for (IntervalId id : below) {
        if (iv.id == id) below_ivs.push_back(iv);
      }
    }
  }
  std::vector<IntervalId> out;
  for (std::size_t k = 0; k < mine.size(); ++k) {
    const Interval& I = mine[k];
    auto it = colors.find(I.id);
    if (it == colors.end() || it->second != designated[static_cast<std::size_t>(level - 1)]) continue;
    if (level > 1) {
      const double gap_lo = I.right;
      const double gap_hi = k + 1 < mine.size() ? mine[k + 1].left : INFINITY;
      bool in_I = false, in_gap = false;
      for (const auto& J : below_ivs) {
        in_I = in_I || (I.left <= J.left && J.right <= I.right);
        in_gap = in_gap || (gap_lo < J.left && J.right < gap_hi);
      }
      if (!in_I || !in_gap) continue;
    }
    out.push_back(I.id);
  }
  return out;
}

std::string color_name(const Color& c) {
  static const char* names[] = {"red", "blue", "green"};
  return names[c.index];
}

}  // namespace

TEST_SUITE("adversary") {
  TEST_CASE("an engine with unique colors stops the construction after one round") {
    UniqueColorEngine e;
    AdversaryConfig cfg;
    cfg.n = 64;
    cfg.r = 1;
    auto t = run_general_adversary(e, cfg);
    REQUIRE(t.rounds.size() >= 1);
    CHECK(t.rounds[0].inserted.size() == 32);
    CHECK(t.rounds[0].living.size() == 1);
    CHECK(t.rho == 1);
    CHECK(t.conflict_free);
  }

  TEST_CASE("round one is n/2 unit intervals two apart") {
    auto e = DynamicEngine::fixed(2);
    AdversaryConfig cfg;
    cfg.n = 16;
    auto t = run_general_adversary(e, cfg);
    REQUIRE(!t.rounds.empty());
    const auto& r1 = t.rounds[0].inserted;
    REQUIRE(r1.size() == 8);
    for (std::size_t k = 0; k < r1.size(); ++k) {
      CHECK(r1[k].left == 2.0 * k);
      CHECK(r1[k].right == 2.0 * k + 1);
    }
  }

  TEST_CASE("dynamic engine at n=1024 obeys the trade-off") {
    auto t = run_general_adversary_adaptive(
        [] { return std::make_unique<DynamicEngine>(DynamicEngine::fixed(2)); }, 1024);
    CHECK(t.conflict_free);
    CHECK(t.designated_distinct);
    CHECK(t.budget_respected);
    const double c = static_cast<double>(t.colors_obs);
    CHECK(check_tradeoff(1024, c, t.r_obs, TradeoffKind::General) == true);
    // Also without counting the dummy.
    CHECK(check_tradeoff(1024, c - 1, t.r_obs, TradeoffKind::General) == true);
    // Per-round living-brick counts against the claim, with c and r as run.
    const double n1 = 512;
    for (const auto& round : t.rounds) {
      const double bound = n1 / std::pow(8.0 * t.r * c, round.index) - 1;
      CHECK(static_cast<double>(round.living.size()) >= bound);
    }
    // Designated colors are pairwise distinct.
    std::set<Color> seen;
    for (const auto& round : t.rounds) {
      REQUIRE(round.designated.has_value());
      CHECK(seen.insert(*round.designated).second);
    }
  }

  TEST_CASE("living bricks agree with the definition on adversary runs") {
    for (int t_param : {2, 3}) {
      auto e = DynamicEngine::fixed(t_param);
      AdversaryConfig cfg;
      cfg.n = 512;
      cfg.r = 8;
      auto t = run_general_adversary(e, cfg);
      const auto rounds = t.round_intervals();
      std::vector<Color> designated;
      for (const auto& r : t.rounds) designated.push_back(*r.designated);
      for (int level = 1; level <= static_cast<int>(rounds.size()); ++level) {
        CHECK(living_bricks(rounds, designated, e.state().assignment(), level) ==
              brute_living(rounds, designated, e.state().assignment(), level));
      }
      CHECK(t.rounds.back().living ==
            brute_living(rounds, designated, e.state().assignment(), static_cast<int>(rounds.size())));
    }
  }

  TEST_CASE("living bricks agree with the definition on random colorings") {
    std::mt19937_64 rng(31);
    CHECK(living_bricks({}, {}, {}, 0).empty());
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::vector<Interval>> rounds;
      Assignment colors;
      IntervalId id = 1;
      const int levels = 1 + static_cast<int>(rng() % 4);
      for (int lv = 0; lv < levels; ++lv) {
        std::vector<Interval> row;
        double x = static_cast<double>(rng() % 5);
        const int count = 1 + static_cast<int>(rng() % 12);
        for (int k = 0; k < count; ++k) {
          const double len = 1 + static_cast<double>(rng() % (4 + 6 * lv));
          row.push_back(Interval{id, x, x + len});
          colors[id] = Color::palette(0, static_cast<int>(rng() % 3));
          ++id;
          x += len + 1 + static_cast<double>(rng() % 6);
        }
        rounds.push_back(row);
      }
      std::vector<Color> designated;
      for (int lv = 0; lv < levels; ++lv) designated.push_back(Color::palette(0, static_cast<int>(rng() % 3)));
      for (int level = 1; level <= levels; ++level) {
        CHECK(living_bricks(rounds, designated, colors, level) == brute_living(rounds, designated, colors, level));
      }
    }
  }

  TEST_CASE("the signature of the figure configuration") {
    const Color red = Color::palette(0, 0), blue = Color::palette(0, 1), green = Color::palette(0, 2);
    std::vector<Interval> existing{{1, 1, 6}, {2, 2, 5}, {4, 4, 9}, {5, 7, 10}, {9, 20, 21}};
    Assignment colors{{1, red}, {2, blue}, {4, blue}, {5, green}, {9, red}};
    auto sig = signature_of(existing, colors, Interval{3, 3, 8});
    CHECK(sig.labels == std::vector<int>{2, 1, 3, 4, 5});
    CHECK(sig.colors == std::vector<std::optional<Color>>{red, blue, std::nullopt, blue, green});
    CHECK(sig.to_string(color_name) == "\u27e82,1,3,4,5,red,blue,NIL,blue,green\u27e9");
  }

  TEST_CASE("a local engine colors all of round one alike") {
    LocalGreedyEngine e;
    AdversaryConfig cfg;
    cfg.n = 256;
    cfg.r = 1;
    auto t = run_local_adversary(e, cfg);
    REQUIRE(!t.rounds.empty());
    CHECK(t.rounds[0].round_colors.size() == 1);
    CHECK(t.locality_ok);
    CHECK(t.conflict_free);
    for (const auto& round : t.rounds) {
      const double bound = 256.0 / std::pow(t.r + 2.0, round.index) - 2;
      CHECK(static_cast<double>(round.inserted.size()) >= bound);
    }
    CHECK(check_tradeoff(256, static_cast<double>(t.colors_obs), std::max(t.r_obs, 1), TradeoffKind::Local) == true);
  }

  TEST_CASE("a non-local engine is flagged") {
    auto e = DynamicEngine::fixed(2);
    AdversaryConfig cfg;
    cfg.n = 128;
    cfg.r = 4;
    auto t = run_local_adversary(e, cfg);
    CHECK(t.conflict_free);
    CHECK_FALSE(t.locality_ok);
    CHECK_FALSE(t.locality_violations.empty());
  }

  TEST_CASE("trade-off arithmetic") {
    CHECK(check_tradeoff(256, 8, 1, TradeoffKind::General) == true);
    CHECK(check_tradeoff(1e6, 2, 1, TradeoffKind::General) == false);
    CHECK_FALSE(check_tradeoff(16, 2, 0, TradeoffKind::General).has_value());
    // Local: r >= n^(1/(c+2)) - 2, so 16 with c=2 needs r >= 0.
    CHECK(check_tradeoff(16, 2, 1, TradeoffKind::Local) == true);
    CHECK(check_tradeoff(1e8, 2, 1, TradeoffKind::Local) == false);
  }

  TEST_CASE("transcripts print a summary footer") {
    UniqueColorEngine e;
    AdversaryConfig cfg;
    cfg.n = 8;
    auto t = run_general_adversary(e, cfg);
    std::ostringstream out;
    write_transcript(out, t);
    CHECK(out.str().find("SUMMARY colors=") != std::string::npos);
    CHECK(out.str().find("rounds=1") != std::string::npos);
  }
}
