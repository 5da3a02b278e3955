#include "cfc/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "cfc/chain.hpp"
#include "cfc/trace.hpp"

namespace cfc {

namespace {

// Smallest distance between two distinct endpoint coordinates.
double min_gap(std::span<const AdversaryInsertion> ins) {
  std::vector<double> xs;
  for (const auto& x : ins) {
    xs.push_back(x.interval.left);
    xs.push_back(x.interval.right);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double gap = 1.0;
  for (std::size_t i = 1; i < xs.size(); ++i) gap = std::min(gap, xs[i] - xs[i - 1]);
  return gap;
}

class Driver {
 public:
  Driver(Engine& engine, const AdversaryConfig& cfg, std::string kind) : engine_(engine), cfg_(cfg) {
    if (cfg.n < 2) throw ConfigError("adversary needs n >= 2");
    if (cfg.r < 1) throw ConfigError("adversary needs r >= 1");
    if (engine.size() != 0) throw ConfigError("adversary needs a fresh engine");
    t_.kind = std::move(kind);
    t_.engine = engine.name();
    t_.n = cfg.n;
    t_.r = cfg.r;
    t_.c_budget = cfg.c_budget;
  }

  const Interval& insert(double left, double right, std::string signature = {}) {
    Interval iv = Interval::make(next_id_++, left, right);
    UpdateResult res = engine_.insert(iv);
    t_.r_obs = std::max(t_.r_obs, res.total());
    t_.insertions.push_back({iv, std::move(res), std::move(signature)});
    if (cfg_.check_every > 0 && t_.insertions.size() % static_cast<std::size_t>(cfg_.check_every) == 0) check();
    return t_.insertions.back().interval;
  }

  void check() {
    if (!t_.conflict_free) return;
    OracleVerdict v = engine_.verify();
    if (!v.ok()) {
      t_.conflict_free = false;
      t_.witness = v.witness;
    }
  }

  double slightly_before(double x) const { return x - min_gap(t_.insertions) / 4.0; }

  AdversaryTranscript finish() {
    check();
    t_.rho = static_cast<int>(t_.rounds.size());
    t_.colors_obs = engine_.state().colors_used();
    t_.budget_respected = t_.r_obs <= cfg_.r;
    return std::move(t_);
  }

  Engine& engine_;
  const AdversaryConfig& cfg_;
  AdversaryTranscript t_;
  IntervalId next_id_ = 1;
};

std::vector<Color> distinct_colors(const std::vector<Interval>& ivs, const ColoringState& state) {
  std::set<Color> out;
  for (const auto& iv : ivs) out.insert(state.color_of(iv.id));
  return {out.begin(), out.end()};
}

}  // namespace

std::vector<std::vector<Interval>> AdversaryTranscript::round_intervals() const {
  std::vector<std::vector<Interval>> out;
  for (const auto& r : rounds) out.push_back(r.inserted);
  return out;
}

std::vector<IntervalId> living_bricks(std::span<const std::vector<Interval>> rounds,
                                      std::span<const Color> designated, const Assignment& colors, int level) {
  if (level < 1 || static_cast<std::size_t>(level) > rounds.size() ||
      static_cast<std::size_t>(level) > designated.size()) {
    return {};
  }
  std::vector<Interval> below;
  for (int i = 1; i <= level; ++i) {
    const auto& round = rounds[static_cast<std::size_t>(i - 1)];
    const Color ci = designated[static_cast<std::size_t>(i - 1)];
    std::vector<Interval> alive;
    for (std::size_t j = 0; j < round.size(); ++j) {
      const Interval& I = round[j];
      auto it = colors.find(I.id);
      if (it == colors.end() || it->second != ci) continue;
      if (i > 1) {
        const double a = I.right;
        const double b = j + 1 < round.size() ? round[j + 1].left : std::numeric_limits<double>::infinity();
        bool in_interval = false;
        bool in_space = false;
        for (const Interval& J : below) {
          if (I.contains(J)) in_interval = true;
          if (a < J.left && J.right < b) in_space = true;
        }
        if (!in_interval || !in_space) continue;
      }
      alive.push_back(I);
    }
    below = std::move(alive);
  }
  std::vector<IntervalId> out;
  for (const auto& iv : below) out.push_back(iv.id);
  return out;
}

AdversaryTranscript run_general_adversary(Engine& engine, const AdversaryConfig& cfg) {
  Driver d(engine, cfg, "general");
  const std::size_t group = 4 * static_cast<std::size_t>(cfg.r);
  std::vector<Color> designated;
  std::vector<Interval> prev_living;

  for (int round = 1;; ++round) {
    AdversaryRound rec;
    rec.index = round;
    if (round == 1) {
      for (int k = 0; k < cfg.n / 2; ++k) rec.inserted.push_back(d.insert(2.0 * k, 2.0 * k + 1.0));
    } else {
      for (std::size_t g = 0; g + group <= prev_living.size(); g += group) {
        const double left = prev_living[g].left;
        const double right = d.slightly_before(prev_living[g + group / 2].left);
        rec.inserted.push_back(d.insert(left, right));
      }
    }
    if (rec.inserted.empty()) {
      d.t_.stop_reason = "no complete group left";
      break;
    }
    const ColoringState& st = engine.state();
    rec.round_colors = distinct_colors(rec.inserted, st);

    // Candidate colors: on this round, not dummy, not designated before.
    std::vector<std::vector<Interval>> rounds = d.t_.round_intervals();
    rounds.push_back(rec.inserted);
    std::optional<Color> best;
    std::size_t best_count = 0;
    for (const Color& c : rec.round_colors) {
      if (c.is_dummy() || std::find(designated.begin(), designated.end(), c) != designated.end()) continue;
      std::vector<Color> trial = designated;
      trial.push_back(c);
      std::size_t count = living_bricks(rounds, trial, st.assignment(), round).size();
      if (!best || count > best_count) {
        best = c;
        best_count = count;
      }
    }
    if (!best) {
      d.t_.rounds.push_back(std::move(rec));
      d.t_.stop_reason = "no eligible color";
      break;
    }
    designated.push_back(*best);
    rec.designated = best;
    rec.living = living_bricks(rounds, designated, st.assignment(), round);

    prev_living.clear();
    for (const auto& iv : rec.inserted) {
      if (std::find(rec.living.begin(), rec.living.end(), iv.id) != rec.living.end()) prev_living.push_back(iv);
    }
    d.t_.rounds.push_back(std::move(rec));
    if (prev_living.size() < group) {
      d.t_.stop_reason = "fewer than 4r living bricks";
      break;
    }
  }
  d.t_.designated_distinct = std::set<Color>(designated.begin(), designated.end()).size() == designated.size();
  return d.finish();
}

AdversaryTranscript run_general_adversary_adaptive(const EngineFactory& factory, int n, int max_attempts) {
  AdversaryConfig cfg;
  cfg.n = n;
  cfg.r = 1;
  AdversaryTranscript last;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::unique_ptr<Engine> engine = factory();
    last = run_general_adversary(*engine, cfg);
    last.attempts = attempt;
    if (last.budget_respected) return last;
    cfg.r = std::max(cfg.r + 1, last.r_obs);
  }
  return last;
}

Signature signature_of(std::span<const Interval> existing, const Assignment& colors, const Interval& newcomer) {
  std::vector<Interval> all(existing.begin(), existing.end());
  all.push_back(newcomer);
  std::vector<Interval> comp;
  for (auto& c : connected_components(all)) {
    if (std::any_of(c.begin(), c.end(), [&](const Interval& x) { return x.id == newcomer.id; })) {
      comp = std::move(c);
      break;
    }
  }
  std::sort(comp.begin(), comp.end(),
            [](const Interval& a, const Interval& b) { return a.left != b.left ? a.left < b.left : a.id < b.id; });
  std::map<IntervalId, int> label;
  for (std::size_t i = 0; i < comp.size(); ++i) label[comp[i].id] = static_cast<int>(i) + 1;

  Signature sig;
  std::vector<Interval> by_right = comp;
  std::sort(by_right.begin(), by_right.end(), [](const Interval& a, const Interval& b) {
    return a.right != b.right ? a.right < b.right : a.id < b.id;
  });
  for (const auto& iv : by_right) sig.labels.push_back(label[iv.id]);
  for (const auto& iv : comp) {
    if (iv.id == newcomer.id) {
      sig.colors.push_back(std::nullopt);
    } else {
      auto it = colors.find(iv.id);
      sig.colors.push_back(it == colors.end() ? std::nullopt : std::optional<Color>(it->second));
    }
  }
  return sig;
}

std::string Signature::to_string(const std::function<std::string(const Color&)>& name) const {
  std::string out = "⟨";
  bool first = true;
  auto add = [&](const std::string& s) {
    if (!first) out += ",";
    out += s;
    first = false;
  };
  for (int l : labels) add(std::to_string(l));
  for (const auto& c : colors) add(!c ? "NIL" : name ? name(*c) : c->to_string());
  return out + "⟩";
}

AdversaryTranscript run_local_adversary(Engine& engine, const AdversaryConfig& cfg) {
  Driver d(engine, cfg, "local");
  const std::size_t group = static_cast<std::size_t>(cfg.r) + 2;
  std::map<std::string, std::string> responses;
  double span_right = 0.0;

  auto insert_local = [&](double left, double right) -> const Interval& {
    Interval probe = Interval::make(d.next_id_, left, right);
    std::vector<Interval> existing = engine.intervals();
    Signature sig = signature_of(existing, engine.state().assignment(), probe);
    std::map<IntervalId, int> label;
    {
      std::vector<Interval> all = existing;
      all.push_back(probe);
      for (auto& c : connected_components(all)) {
        if (!std::any_of(c.begin(), c.end(), [&](const Interval& x) { return x.id == probe.id; })) continue;
        std::sort(c.begin(), c.end(), [](const Interval& a, const Interval& b) {
          return a.left != b.left ? a.left < b.left : a.id < b.id;
        });
        for (std::size_t i = 0; i < c.size(); ++i) label[c[i].id] = static_cast<int>(i) + 1;
      }
    }
    const std::string key = sig.to_string();
    const Interval& iv = d.insert(left, right, key);
    span_right = std::max(span_right, right);

    std::string response;
    for (const auto& ev : d.t_.insertions.back().result.events) {
      auto it = label.find(ev.id);
      if (it == label.end()) {
        d.t_.locality_ok = false;
        d.t_.locality_violations.push_back("insertion " + std::to_string(iv.id) + " recolored interval " +
                                           std::to_string(ev.id) + " outside its component");
        continue;
      }
      response += std::to_string(it->second) + "=" + ev.color.to_string() + ";";
    }
    auto [pos, fresh] = responses.emplace(key, response);
    if (!fresh && pos->second != response) {
      d.t_.locality_ok = false;
      d.t_.locality_violations.push_back("signature " + key + " answered differently at insertion " +
                                         std::to_string(iv.id));
    }
    return iv;
  };

  std::vector<Interval> prev;
  for (int round = 1;; ++round) {
    AdversaryRound rec;
    rec.index = round;
    if (round == 1) {
      for (int k = 0; k < cfg.n / 2; ++k) rec.inserted.push_back(insert_local(2.0 * k, 2.0 * k + 1.0));
    } else if (prev.size() == group - 1) {
      // Exactly r + 1 intervals left: one interval over everything.
      rec.inserted.push_back(insert_local(prev.front().left, span_right + 1.0));
    } else {
      for (std::size_t g = 0; g + group <= prev.size(); g += group) {
        const double left = prev[g].left;
        const double right = d.slightly_before(prev[g + group - 1].left);
        rec.inserted.push_back(insert_local(left, right));
      }
    }
    if (rec.inserted.empty()) {
      d.t_.stop_reason = "no complete group left";
      break;
    }
    rec.round_colors = distinct_colors(rec.inserted, engine.state());
    if (rec.round_colors.size() == 1) rec.designated = rec.round_colors.front();
    prev = rec.inserted;
    d.t_.rounds.push_back(std::move(rec));
    if (prev.size() < group - 1) {
      d.t_.stop_reason = "fewer than r + 1 intervals in the last round";
      break;
    }
  }
  std::vector<Color> seen;
  for (const auto& r : d.t_.rounds) {
    for (const Color& c : r.round_colors) {
      if (std::find(seen.begin(), seen.end(), c) != seen.end()) d.t_.designated_distinct = false;
    }
    seen.insert(seen.end(), r.round_colors.begin(), r.round_colors.end());
  }
  return d.finish();
}

std::optional<bool> check_tradeoff(double n, double c, double r, TradeoffKind kind) {
  if (r <= 0) return std::nullopt;
  if (kind == TradeoffKind::General) return r > std::pow(n, 1.0 / (c + 1.0)) / (8.0 * c);
  return r >= std::pow(n, 1.0 / (c + 2.0)) - 2.0;
}

void write_transcript(std::ostream& out, const AdversaryTranscript& t) {
  out << "# adversary " << t.kind << " engine=" << t.engine << " n=" << t.n << " r=" << t.r << "\n";
  std::size_t next = 0;
  for (const auto& round : t.rounds) {
    for (std::size_t k = 0; k < round.inserted.size() && next < t.insertions.size(); ++k, ++next) {
      const auto& ins = t.insertions[next];
      out << format_op(UpdateOp::insert(ins.interval)) << "\n";
      for (const auto& ev : ins.result.events) out << format_recolor(ev) << "\n";
    }
    out << "# round " << round.index << " inserted=" << round.inserted.size();
    if (round.designated) out << " designated=" << round.designated->to_string();
    if (t.kind == "general") out << " living=" << round.living.size();
    out << "\n";
  }
  if (!t.conflict_free && t.witness) out << "# violation at " << format_number(*t.witness) << "\n";
  if (t.kind == "local") out << "# locality " << (t.locality_ok ? "ok" : "violated") << "\n";
  out << "SUMMARY colors=" << t.colors_obs << " max_recolor=" << t.r_obs << " rounds=" << t.rho << "\n";
}

}  // namespace cfc
