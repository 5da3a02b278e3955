#include "cfc/kinetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include <boost/multiprecision/cpp_int.hpp>

#include "cfc/chain.hpp"
#include "cfc/trace.hpp"

namespace cfc {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr int kChainColors = 3;

Color chain_color(int i) { return Color::palette(0, i); }

}  // namespace

std::vector<Trajectory> parse_scenario(std::istream& in) {
  std::vector<Trajectory> out;
  std::unordered_set<IntervalId> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    const std::string ctx = "scenario line " + std::to_string(lineno);
    if (tok[0] != "K" || tok.size() != 6) {
      throw InputError(ctx + ": expected 'K <id> <a0> <va> <b0> <vb>'");
    }
    Trajectory tr;
    tr.id = parse_integer(tok[1], ctx);
    tr.a0 = parse_double(tok[2], ctx);
    tr.va = parse_double(tok[3], ctx);
    tr.b0 = parse_double(tok[4], ctx);
    tr.vb = parse_double(tok[5], ctx);
    if (!(tr.a0 < tr.b0)) throw InputError(ctx + ": left endpoint must start left of the right endpoint");
    if (!seen.insert(tr.id).second) throw InputError(ctx + ": duplicate id " + std::to_string(tr.id));
    out.push_back(tr);
  }
  return out;
}

void write_scenario(std::ostream& out, const std::vector<Trajectory>& scenario) {
  for (const auto& tr : scenario) {
    out << "K " << tr.id << ' ' << format_number(tr.a0) << ' ' << format_number(tr.va) << ' '
        << format_number(tr.b0) << ' ' << format_number(tr.vb) << '\n';
  }
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::RR: return "RR";
    case EventKind::LL: return "LL";
    case EventKind::RLMeet: return "RL-meet";
    case EventKind::RLSeparate: return "RL-separate";
  }
  return "?";
}

// Endpoint e belongs to interval e / 2; even e is a left endpoint.
struct Crossing {
  double t = 0.0;
  Rational exact;
  int e1 = 0;  // left of e2 before the crossing
  int e2 = 0;
  IntervalId k1 = 0;
  IntervalId k2 = 0;
};

struct KineticMaintainer::Impl {
  KineticOptions opt;
  int n = 0;
  std::unordered_map<IntervalId, int> index;
  std::vector<int> order;
  std::vector<int> rank;
  std::vector<char> member;
  std::vector<int> chain;  // sorted by left rank
  std::vector<Crossing> pending;
  std::size_t cursor = 0;

  int L(int i) const { return rank[2 * i]; }
  int R(int i) const { return rank[2 * i + 1]; }
  bool intersects(int a, int b) const { return L(a) < R(b) && L(b) < R(a); }

  void sort_chain() {
    std::sort(chain.begin(), chain.end(), [&](int a, int b) { return L(a) < L(b); });
  }
  std::ptrdiff_t pos_in_chain(int i) const {
    auto it = std::find(chain.begin(), chain.end(), i);
    return it == chain.end() ? -1 : it - chain.begin();
  }
  int pred(int i) const {
    auto p = pos_in_chain(i);
    return p > 0 ? chain[static_cast<std::size_t>(p - 1)] : -1;
  }
  int succ(int i) const {
    auto p = pos_in_chain(i);
    return p >= 0 && static_cast<std::size_t>(p + 1) < chain.size() ? chain[static_cast<std::size_t>(p + 1)] : -1;
  }

  // Whether the chain covers interval i (which is not itself a member).
  bool covered(int i) const {
    int reach = L(i);
    bool started = false;
    for (int m : chain) {
      if (L(m) >= reach) break;
      if (R(m) > reach) {
        reach = R(m);
        started = true;
      }
      if (started && reach > R(i)) return true;
    }
    return started && reach > R(i);
  }

  bool same_time(const Crossing& a, const Crossing& b) const {
    if (opt.exact) return a.exact == b.exact;
    return std::abs(a.t - b.t) <= opt.tolerance * std::max(1.0, std::abs(b.t));
  }
  bool adjacent(const Crossing& c) const { return rank[c.e1] + 1 == rank[c.e2]; }

  std::optional<std::size_t> select() const {
    if (cursor >= pending.size()) return std::nullopt;
    const Crossing& head = pending[cursor];
    for (std::size_t j = cursor; j < pending.size() && same_time(pending[j], head); ++j) {
      if (adjacent(pending[j])) return j;
    }
    std::ostringstream msg;
    msg << "simultaneous crossings at t=" << format_number(head.t)
        << " cannot be realized as neighbor swaps";
    throw InvariantError(msg.str());
  }

  void swap_adjacent(int a, int b) {
    const int ra = rank[a];
    const int rb = rank[b];
    std::swap(order[static_cast<std::size_t>(ra)], order[static_cast<std::size_t>(rb)]);
    rank[a] = rb;
    rank[b] = ra;
  }
};

namespace {

double endpoint_pos(const Trajectory& tr, int side, double t) { return side == 0 ? tr.left_at(t) : tr.right_at(t); }
double endpoint_speed(const Trajectory& tr, int side) { return side == 0 ? tr.va : tr.vb; }
double endpoint_start(const Trajectory& tr, int side) { return side == 0 ? tr.a0 : tr.b0; }

}  // namespace

KineticMaintainer::KineticMaintainer(std::vector<Trajectory> scenario, double t0, KineticOptions options)
    : time_(t0), trajs_(std::move(scenario)), impl_(new Impl) {
  Impl& m = *impl_;
  m.opt = options;
  m.n = static_cast<int>(trajs_.size());
  for (int i = 0; i < m.n; ++i) {
    const auto& tr = trajs_[static_cast<std::size_t>(i)];
    if (!m.index.emplace(tr.id, i).second) throw InputError("duplicate interval id " + std::to_string(tr.id));
    if (!(tr.left_at(t0) < tr.right_at(t0))) {
      throw InputError("interval " + std::to_string(tr.id) + " is not a proper interval at the start time");
    }
  }

  const int ne = 2 * m.n;
  m.order.resize(static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e) m.order[static_cast<std::size_t>(e)] = e;
  auto pos0 = [&](int e) { return endpoint_pos(trajs_[static_cast<std::size_t>(e / 2)], e % 2, t0); };
  std::sort(m.order.begin(), m.order.end(), [&](int a, int b) {
    const double pa = pos0(a);
    const double pb = pos0(b);
    return pa != pb ? pa < pb : a < b;
  });
  m.rank.assign(static_cast<std::size_t>(ne), 0);
  for (int r = 0; r < ne; ++r) {
    m.rank[static_cast<std::size_t>(m.order[static_cast<std::size_t>(r)])] = r;
    if (r > 0 && pos0(m.order[static_cast<std::size_t>(r)]) == pos0(m.order[static_cast<std::size_t>(r - 1)])) {
      throw InputError("endpoints coincide at the start time; the scenario is not in general position");
    }
  }

  // Every pair of endpoints of different intervals crosses at most once.
  const Rational rt0(t0);
  for (int a = 0; a < ne; ++a) {
    const auto& ta = trajs_[static_cast<std::size_t>(a / 2)];
    for (int b = a + 1; b < ne; ++b) {
      if (a / 2 == b / 2) continue;
      const auto& tb = trajs_[static_cast<std::size_t>(b / 2)];
      const double va = endpoint_speed(ta, a % 2);
      const double vb = endpoint_speed(tb, b % 2);
      if (va == vb) continue;
      const double xa = endpoint_start(ta, a % 2);
      const double xb = endpoint_start(tb, b % 2);
      Crossing c;
      c.t = (xb - xa) / (va - vb);
      if (options.exact) {
        c.exact = (Rational(xb) - Rational(xa)) / (Rational(va) - Rational(vb));
        if (c.exact <= rt0) continue;
      } else if (!(c.t > t0)) {
        continue;
      }
      const bool a_first = m.rank[static_cast<std::size_t>(a)] < m.rank[static_cast<std::size_t>(b)];
      c.e1 = a_first ? a : b;
      c.e2 = a_first ? b : a;
      c.k1 = std::min(ta.id, tb.id);
      c.k2 = std::max(ta.id, tb.id);
      m.pending.push_back(std::move(c));
    }
  }
  auto key_less = [](const Crossing& x, const Crossing& y) {
    return std::tie(x.k1, x.k2, x.e1, x.e2) < std::tie(y.k1, y.k2, y.e1, y.e2);
  };
  if (options.exact) {
    std::sort(m.pending.begin(), m.pending.end(), [&](const Crossing& x, const Crossing& y) {
      if (x.exact != y.exact) return x.exact < y.exact;
      return key_less(x, y);
    });
  } else {
    std::sort(m.pending.begin(), m.pending.end(), [&](const Crossing& x, const Crossing& y) {
      if (x.t != y.t) return x.t < y.t;
      return key_less(x, y);
    });
  }

  // Initial chain. Members contained in another interval are dropped from
  // the candidates and the chain is rebuilt; they stay covered by their
  // container.
  std::vector<Interval> all;
  all.reserve(trajs_.size());
  for (const auto& tr : trajs_) all.push_back(tr.at(t0));
  std::vector<Interval> candidates = all;
  std::vector<IntervalId> members;
  for (;;) {
    members = build_chain(candidates).members;
    std::unordered_set<IntervalId> contained;
    for (IntervalId id : members) {
      const Interval& iv = all[static_cast<std::size_t>(m.index.at(id))];
      for (const auto& other : all) {
        if (other.id != id && other.contains(iv)) {
          contained.insert(id);
          break;
        }
      }
    }
    if (contained.empty()) break;
    std::erase_if(candidates, [&](const Interval& iv) { return contained.count(iv.id) != 0; });
  }
  m.member.assign(static_cast<std::size_t>(m.n), 0);
  for (IntervalId id : members) {
    const int i = m.index.at(id);
    m.member[static_cast<std::size_t>(i)] = 1;
    m.chain.push_back(i);
  }
  m.sort_chain();
  for (const auto& tr : trajs_) state_.assign(tr.id, Color::dummy());
  for (std::size_t k = 0; k < m.chain.size(); ++k) {
    state_.assign(trajs_[static_cast<std::size_t>(m.chain[k])].id, chain_color(static_cast<int>(k % 2)));
  }
  if (auto bad = check_invariants()) throw InvariantError("initial chain: " + *bad);
}

KineticMaintainer::~KineticMaintainer() { delete impl_; }

KineticMaintainer::KineticMaintainer(KineticMaintainer&& o) noexcept
    : time_(o.time_), processed_(o.processed_), trajs_(std::move(o.trajs_)), state_(std::move(o.state_)),
      impl_(o.impl_) {
  o.impl_ = nullptr;
}

KineticMaintainer& KineticMaintainer::operator=(KineticMaintainer&& o) noexcept {
  if (this != &o) {
    delete impl_;
    time_ = o.time_;
    processed_ = o.processed_;
    trajs_ = std::move(o.trajs_);
    state_ = std::move(o.state_);
    impl_ = o.impl_;
    o.impl_ = nullptr;
  }
  return *this;
}

std::optional<KineticEvent> KineticMaintainer::next_event() const {
  auto sel = impl_->select();
  if (!sel) return std::nullopt;
  const Crossing& c = impl_->pending[*sel];
  KineticEvent ev;
  ev.time = c.t;
  const int s1 = c.e1 % 2;
  const int s2 = c.e2 % 2;
  if (s1 == 1 && s2 == 1) {
    ev.kind = EventKind::RR;
  } else if (s1 == 0 && s2 == 0) {
    ev.kind = EventKind::LL;
  } else {
    ev.kind = s1 == 1 ? EventKind::RLMeet : EventKind::RLSeparate;
  }
  ev.first = trajs_[static_cast<std::size_t>(c.e1 / 2)].id;
  ev.second = trajs_[static_cast<std::size_t>(c.e2 / 2)].id;
  return ev;
}

EventReport KineticMaintainer::step() {
  Impl& m = *impl_;
  auto sel = m.select();
  if (!sel) throw InvariantError("no pending kinetic event");
  EventReport rep;
  rep.event = *next_event();
  std::rotate(m.pending.begin() + static_cast<std::ptrdiff_t>(m.cursor),
              m.pending.begin() + static_cast<std::ptrdiff_t>(*sel),
              m.pending.begin() + static_cast<std::ptrdiff_t>(*sel) + 1);
  const Crossing c = m.pending[m.cursor++];
  time_ = std::max(time_, c.t);

  const int x = c.e1 / 2;
  const int y = c.e2 / 2;
  std::vector<int> added;
  std::vector<int> removed;
  auto add = [&](int i) {
    m.member[static_cast<std::size_t>(i)] = 1;
    m.chain.push_back(i);
    m.sort_chain();
    added.push_back(i);
  };
  auto drop = [&](int i) {
    m.member[static_cast<std::size_t>(i)] = 0;
    std::erase(m.chain, i);
    removed.push_back(i);
  };
  auto in = [&](int i) { return i >= 0 && m.member[static_cast<std::size_t>(i)] != 0; };

  // Containment before the swap decides between the two subcases of an
  // RR or LL event.
  const bool y_holds_x_before = m.L(y) < m.L(x);  // RR: x inside y
  const bool x_holds_y_before = m.R(y) < m.R(x);  // LL: y inside x
  m.swap_adjacent(c.e1, c.e2);
  m.sort_chain();

  switch (rep.event.kind) {
    case EventKind::RR:
      if (y_holds_x_before) {
        // The shorter interval x now sticks out to the right of y.
        rep.case_label = "A.1";
        if (!in(x) && !m.covered(x)) {
          const int p = in(y) ? m.pred(y) : -1;
          add(x);
          if (p >= 0 && m.intersects(x, p)) drop(y);
        }
      } else {
        // y has just become nested in x.
        rep.case_label = "A.2";
        if (in(y)) {
          const int p = m.pred(y);
          const int pp = p >= 0 ? m.pred(p) : -1;
          drop(y);
          if (!in(x)) {
            add(x);
            if (pp >= 0 && m.intersects(pp, x)) drop(p);
          }
        }
      }
      break;
    case EventKind::LL:
      if (x_holds_y_before) {
        rep.case_label = "B.1";
        if (!in(y) && !m.covered(y)) {
          const int s = in(x) ? m.succ(x) : -1;
          add(y);
          if (s >= 0 && m.intersects(y, s)) drop(x);
        }
      } else {
        rep.case_label = "B.2";
        if (in(x)) {
          const int s = m.succ(x);
          const int ss = s >= 0 ? m.succ(s) : -1;
          drop(x);
          if (!in(y)) {
            add(y);
            if (ss >= 0 && m.intersects(ss, y)) drop(s);
          }
        }
      }
      break;
    case EventKind::RLMeet: {
      // x (on the left) and y start to intersect.
      rep.case_label = "C.1";
      if (in(x) && in(y)) {
        const auto px = m.pos_in_chain(x);
        const auto py = m.pos_in_chain(y);
        if (py - px == 2) drop(m.chain[static_cast<std::size_t>(px + 1)]);
      }
      break;
    }
    case EventKind::RLSeparate: {
      // The right endpoint of y passed the left endpoint of x: y is now
      // entirely left of x.
      rep.case_label = "C.2";
      const int left = y;
      const int right = x;
      if (in(left) && in(right)) {
        const int gap_lo = m.R(left);
        const int gap_hi = m.L(right);
        int best = -1;
        for (int k = 0; k < m.n; ++k) {
          if (in(k)) continue;
          if (m.L(k) < gap_lo && m.R(k) > gap_hi && (best < 0 || m.L(k) < m.L(best))) best = k;
        }
        if (best >= 0) {
          const int p = m.pred(left);
          const int s = m.succ(right);
          add(best);
          if (p >= 0 && m.intersects(best, p)) drop(left);
          if (s >= 0 && m.intersects(best, s)) drop(right);
        }
      }
      break;
    }
  }

  // Colors: removed members become dummy, an added member avoids both
  // neighbors, and any equal-colored neighbors left behind by a removal get
  // the left one recolored.
  state_.begin_batch();
  auto id_of = [&](int i) { return trajs_[static_cast<std::size_t>(i)].id; };
  auto color_at = [&](std::ptrdiff_t p) -> std::optional<Color> {
    if (p < 0 || static_cast<std::size_t>(p) >= m.chain.size()) return std::nullopt;
    return state_.color_of(id_of(m.chain[static_cast<std::size_t>(p)]));
  };
  auto pick = [&](std::ptrdiff_t p) {
    const auto a = color_at(p - 1);
    const auto b = color_at(p + 1);
    for (int k = 0; k < kChainColors; ++k) {
      const Color cand = chain_color(k);
      if (cand != a && cand != b) return cand;
    }
    throw InvariantError("no chain color left");
  };
  for (int i : removed) {
    if (!in(i)) state_.assign(id_of(i), Color::dummy());
  }
  for (int i : added) {
    if (in(i)) state_.assign(id_of(i), pick(m.pos_in_chain(i)));
  }
  for (std::size_t k = 0; k + 1 < m.chain.size(); ++k) {
    if (state_.color_of(id_of(m.chain[k])) == state_.color_of(id_of(m.chain[k + 1]))) {
      state_.assign(id_of(m.chain[k]), pick(static_cast<std::ptrdiff_t>(k)));
    }
  }
  Batch b = state_.end_batch();
  state_.ledger().record(b.recolorings);
  ++processed_;

  rep.recolors = std::move(b.events);
  rep.recolorings = b.recolorings;
  rep.added = static_cast<int>(added.size());
  rep.removed = static_cast<int>(removed.size());

  auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << what << " at event " << processed_ << " (t=" << format_number(rep.event.time) << ' '
        << to_string(rep.event.kind) << ' ' << rep.event.first << ' ' << rep.event.second << ", case "
        << rep.case_label << "); chain:";
    for (IntervalId id : chain()) msg << ' ' << id;
    throw InvariantError(msg.str());
  };
  if (rep.recolorings > 3) fail(std::to_string(rep.recolorings) + " recolorings");
  if (rep.added > 1 || rep.removed > 2) fail("too many chain changes");
  if (m.opt.audit_every) {
    if (auto bad = check_invariants()) fail(*bad);
  }
  return rep;
}

double KineticMaintainer::horizon() const {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& tr : trajs_) {
    if (tr.va > tr.vb) h = std::min(h, (tr.b0 - tr.a0) / (tr.va - tr.vb));
  }
  return h;
}

std::vector<EventReport> KineticMaintainer::run(double until) {
  if (!(until < horizon())) {
    throw InputError("some interval degenerates at t=" + format_number(horizon()) + ", before t=" +
                     format_number(until));
  }
  std::vector<EventReport> out;
  for (auto ev = next_event(); ev && ev->time <= until; ev = next_event()) out.push_back(step());
  time_ = std::max(time_, until);
  return out;
}

std::vector<EventReport> KineticMaintainer::run_to_completion() {
  if (std::isfinite(horizon())) {
    throw InputError("some interval degenerates at t=" + format_number(horizon()));
  }
  std::vector<EventReport> out;
  while (next_event()) out.push_back(step());
  return out;
}

std::vector<IntervalId> KineticMaintainer::chain() const {
  std::vector<IntervalId> out;
  for (int i : impl_->chain) out.push_back(trajs_[static_cast<std::size_t>(i)].id);
  return out;
}

bool KineticMaintainer::in_chain(IntervalId id) const {
  auto it = impl_->index.find(id);
  return it != impl_->index.end() && impl_->member[static_cast<std::size_t>(it->second)] != 0;
}

std::vector<Interval> KineticMaintainer::rank_snapshot() const {
  std::vector<Interval> out;
  for (int i = 0; i < impl_->n; ++i) {
    out.push_back(Interval{trajs_[static_cast<std::size_t>(i)].id, static_cast<double>(impl_->L(i)),
                           static_cast<double>(impl_->R(i))});
  }
  return out;
}

std::vector<Interval> KineticMaintainer::positions_at(double t) const {
  std::vector<Interval> out;
  for (const auto& tr : trajs_) out.push_back(tr.at(t));
  return out;
}

OracleVerdict KineticMaintainer::verify() const {
  auto snap = rank_snapshot();
  return is_conflict_free(snap, state_.assignment());
}

std::optional<std::string> KineticMaintainer::check_invariants() const {
  const Impl& m = *impl_;
  auto id_of = [&](int i) { return std::to_string(trajs_[static_cast<std::size_t>(i)].id); };
  const auto& ch = m.chain;
  for (std::size_t k = 0; k + 1 < ch.size(); ++k) {
    if (m.L(ch[k]) >= m.L(ch[k + 1])) return "chain is not sorted by left endpoint";
  }
  for (std::size_t k = 0; k + 2 < ch.size(); ++k) {
    if (m.R(ch[k]) > m.L(ch[k + 2])) {
      return "C1: chain members " + id_of(ch[k]) + " and " + id_of(ch[k + 2]) + " intersect";
    }
  }
  // Color invariant.
  std::vector<int> color_idx(static_cast<std::size_t>(m.n), -1);
  for (int i = 0; i < m.n; ++i) {
    const Color c = state_.color_of(trajs_[static_cast<std::size_t>(i)].id);
    if (m.member[static_cast<std::size_t>(i)]) {
      if (c.is_dummy() || c.level != 0 || c.index < 0 || c.index >= kChainColors) {
        return "chain member " + id_of(i) + " has color " + c.to_string();
      }
      color_idx[static_cast<std::size_t>(i)] = c.index;
    } else if (!c.is_dummy()) {
      return "non-chain interval " + id_of(i) + " is not dummy";
    }
  }
  for (std::size_t k = 0; k + 1 < ch.size(); ++k) {
    if (color_idx[static_cast<std::size_t>(ch[k])] == color_idx[static_cast<std::size_t>(ch[k + 1])]) {
      return "consecutive chain members " + id_of(ch[k]) + " and " + id_of(ch[k + 1]) + " share a color";
    }
  }
  // Sweep: C2 coverage, C3 non-containment and unique colors per cell.
  int active_chain = 0;
  int active_other = 0;
  std::array<int, kChainColors> counts{};
  int prefix_max_right = -1;
  for (std::size_t r = 0; r < m.order.size(); ++r) {
    const int e = m.order[r];
    const int i = e / 2;
    const bool mem = m.member[static_cast<std::size_t>(i)] != 0;
    const int sign = e % 2 == 0 ? 1 : -1;
    if (e % 2 == 0) {
      if (mem && prefix_max_right > m.R(i)) return "C3: chain member " + id_of(i) + " is contained in another interval";
      prefix_max_right = std::max(prefix_max_right, m.R(i));
    }
    if (mem) {
      active_chain += sign;
      counts[static_cast<std::size_t>(color_idx[static_cast<std::size_t>(i)])] += sign;
    } else {
      active_other += sign;
    }
    if (active_other > 0 && active_chain == 0) return "C2: a non-chain interval is not covered near " + id_of(i);
    if (active_chain + active_other > 0 && std::find(counts.begin(), counts.end(), 1) == counts.end()) {
      return "no unique color after endpoint of " + id_of(i);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::vector<Trajectory> gadget(IntervalId first_id, double offset, double speed) {
  static constexpr std::array<std::array<double, 2>, 4> kShape{{{0.0, 0.55}, {0.1, 0.5}, {0.2, 0.9}, {0.3, 0.8}}};
  std::vector<Trajectory> out;
  for (std::size_t k = 0; k < kShape.size(); ++k) {
    out.push_back(Trajectory{first_id + static_cast<IntervalId>(k), offset + kShape[k][0], speed,
                             offset + kShape[k][1], speed});
  }
  return out;
}

const std::vector<std::vector<int>>& gadget_overlap_sets() {
  static const std::vector<std::vector<int>> sets{{0}, {0, 1}, {0, 1, 2}, {0, 1, 2, 3}, {0, 2, 3}, {2, 3}, {2}};
  return sets;
}

std::vector<Trajectory> lowerbound_scenario(int n) {
  if (n < 1) throw ConfigError("lower-bound scenario needs n >= 1");
  std::vector<Trajectory> out;
  const double base = -3.0 * n - 1.0;
  IntervalId next = 1;
  for (int g = 0; g < n; ++g) {
    for (auto& tr : gadget(next, base + 3.0 * g, 1.0)) out.push_back(tr);
    next += 4;
  }
  for (int h = 0; h < n; ++h) {
    for (auto& tr : gadget(next, h * (3.0 * n + 1.0), 0.0)) out.push_back(tr);
    next += 4;
  }
  return out;
}

namespace {

bool has_unique(const std::array<int, 8>& colors, const std::vector<int>& members) {
  std::array<int, 8> count{};
  for (int i : members) ++count[static_cast<std::size_t>(colors[static_cast<std::size_t>(i)])];
  for (int i : members) {
    if (count[static_cast<std::size_t>(colors[static_cast<std::size_t>(i)])] == 1) return true;
  }
  return false;
}

// Enumerates colors^k assignments of the first k slots; stops when `ok`
// accepts one.
template <class Pred>
bool exists_coloring(int k, int colors, Pred ok) {
  if (colors < 1 || colors > 8) throw ConfigError("gadget search supports 1..8 colors");
  std::array<int, 8> c{};
  for (;;) {
    if (ok(c)) return true;
    int pos = 0;
    while (pos < k && ++c[static_cast<std::size_t>(pos)] == colors) c[static_cast<std::size_t>(pos++)] = 0;
    if (pos == k) return false;
  }
}

}  // namespace

bool verify_gadget_lemma(int colors) {
  const auto& sets = gadget_overlap_sets();
  std::vector<std::vector<int>> checks;
  for (const auto& g : sets) checks.push_back(g);
  for (const auto& h : sets) {
    std::vector<int> shifted;
    for (int i : h) shifted.push_back(i + 4);
    checks.push_back(shifted);
  }
  for (const auto& g : sets) {
    for (const auto& h : sets) {
      std::vector<int> u = g;
      for (int i : h) u.push_back(i + 4);
      checks.push_back(u);
    }
  }
  return !exists_coloring(8, colors, [&](const std::array<int, 8>& c) {
    return std::all_of(checks.begin(), checks.end(), [&](const auto& s) { return has_unique(c, s); });
  });
}

bool single_gadget_colorable(int colors) {
  const auto& sets = gadget_overlap_sets();
  return exists_coloring(4, colors, [&](const std::array<int, 8>& c) {
    return std::all_of(sets.begin(), sets.end(), [&](const auto& s) { return has_unique(c, s); });
  });
}

std::vector<Trajectory> random_kinetic_scenario(int n, double horizon, std::uint64_t seed) {
  if (n < 1) throw ConfigError("random kinetic scenario needs n >= 1");
  if (!(horizon > 0)) throw ConfigError("random kinetic scenario needs a positive horizon");
  std::mt19937_64 rng(seed);
  const double span = 3.0 * n;
  std::uniform_real_distribution<double> start(0.0, span);
  std::uniform_real_distribution<double> len(1.0, 10.0);
  std::uniform_real_distribution<double> speed(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    std::vector<Trajectory> out;
    std::vector<double> ends;
    for (int i = 0; i < n; ++i) {
      Trajectory tr;
      tr.id = i + 1;
      tr.a0 = start(rng);
      const double l = len(rng);
      tr.b0 = tr.a0 + l;
      tr.va = speed(rng);
      // The length may shrink to at most 20% of its start value by the horizon.
      const double lo = -0.8 * l / horizon;
      tr.vb = tr.va + lo + (1.0 - lo) * unit(rng);
      ends.push_back(tr.a0);
      ends.push_back(tr.b0);
      out.push_back(tr);
    }
    std::sort(ends.begin(), ends.end());
    if (std::adjacent_find(ends.begin(), ends.end()) == ends.end()) return out;
  }
}

}  // namespace cfc
