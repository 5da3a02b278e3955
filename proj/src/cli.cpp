#include "cfc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cfc/adversary.hpp"
#include "cfc/engine_dynamic.hpp"
#include "cfc/engine_fixed.hpp"
#include "cfc/generators.hpp"
#include "cfc/grid_reduction.hpp"
#include "cfc/kinetic.hpp"
#include "cfc/method_spec.hpp"
#include "cfc/trace.hpp"

namespace cfc {

namespace {

// Raised when a coloring is found not conflict-free; maps to exit status 1.
struct ViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed6(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << x;
  return s.str();
}

// Output goes to --output when given, to the caller's stream otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw InputError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

template <class Fn>
auto with_input(const std::string& path, Fn fn) {
  if (path == "-") return fn(std::cin);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return fn(in);
}

std::optional<std::string> structural_audit(const Engine& e) {
  if (auto* f = dynamic_cast<const FixedEngine*>(&e)) return f->audit();
  if (auto* d = dynamic_cast<const DynamicEngine*>(&e)) return d->audit();
  if (auto* g = dynamic_cast<const GridEngine*>(&e)) return g->audit();
  return std::nullopt;
}

std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("CFCOLOR_SEED"); env && *env) {
    const long long v = parse_integer(env, "CFCOLOR_SEED");
    if (v < 0) throw InputError("CFCOLOR_SEED must be non-negative");
    return static_cast<std::uint64_t>(v);
  }
  return flag;
}

void add_method_flags(CLI::App* cmd, MethodFlags& f) {
  cmd->add_option("--universe", f.universe, "Universe size U (fixed engines)");
  cmd->add_option("--t", f.t, "B-tree parameter t");
  cmd->add_option("--eps", f.eps, "Exponent epsilon of the eps engine");
  cmd->add_option("--L", f.L, "Length bound L (grid engine)");
  cmd->add_option("--inner", f.inner, "Inner method of the grid engine: trivial, dynamic or eps");
}

std::string summary_line(const ColoringState& st) {
  const auto& led = st.ledger();
  return "SUMMARY colors=" + std::to_string(st.colors_used()) + " max_recolor=" + std::to_string(led.max_per_update()) +
         " total_recolor=" + std::to_string(led.total()) + " updates=" + std::to_string(led.updates()) +
         " amortized=" + fixed6(led.amortized());
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string method;
  MethodFlags flags;
  std::string trace = "-";
  std::string audit = "final";
  std::string output;
  std::uint64_t seed = 0;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  const auto ops = with_input(a.trace, [](std::istream& in) { return parse_trace(in); });
  const MethodSpec spec = merge_flags(MethodSpec::parse(a.method), a.flags);
  auto engine = make_engine(spec);
  Sink sink(a.output, out);
  std::ostream& o = sink.get();
  o << "# method " << spec.to_string() << "\n";
  int status = kExitOk;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    UpdateResult r;
    try {
      r = engine->apply(ops[k]);
    } catch (const InputError& e) {
      throw InputError("update " + std::to_string(k + 1) + ": " + e.what());
    }
    o << format_op(ops[k]) << "\n";
    for (const auto& ev : r.events) o << format_recolor(ev) << "\n";
    if (a.audit == "every") {
      if (auto bad = structural_audit(*engine)) {
        throw InvariantError("update " + std::to_string(k + 1) + ": " + *bad);
      }
      const auto v = engine->verify();
      if (!v.ok()) {
        err << "violation after update " << k + 1 << ": " << v.describe() << "\n";
        o << "# violation after update " << k + 1 << ": " << v.describe() << "\n";
        status = kExitViolation;
        break;
      }
    }
  }
  if (status == kExitOk && a.audit != "none") {
    const auto v = engine->verify();
    if (!v.ok()) {
      err << "violation at the end of the trace: " << v.describe() << "\n";
      o << "# violation at the end of the trace: " << v.describe() << "\n";
      status = kExitViolation;
    }
  }
  o << summary_line(engine->state()) << "\n";
  return status;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind;
  int n = 100;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> universe;
  double max_coord = 1000.0;
  double max_length = 100.0;
  int L = 8;
  double delete_prob = 0.0;
  std::optional<int> max_live;
  double horizon = 10.0;
  std::string output;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  if (a.n < 1) throw ConfigError("--n must be at least 1");
  const std::uint64_t seed = effective_seed(a.seed);
  std::vector<UpdateOp> ops;
  std::vector<Trajectory> scenario;
  bool kinetic = false;
  if (a.kind == "random") {
    RandomTraceParams p;
    p.inserts = a.n;
    p.delete_prob = a.delete_prob;
    p.max_live = a.max_live;
    p.universe = a.universe;
    p.max_coord = a.max_coord;
    p.max_length = a.max_length;
    p.seed = seed;
    ops = random_trace(p);
  } else if (a.kind == "bounded-length") {
    BoundedTraceParams p;
    p.inserts = a.n;
    p.L = a.L;
    p.delete_prob = a.delete_prob;
    p.max_live = a.max_live;
    p.max_coord = a.max_coord;
    p.seed = seed;
    ops = bounded_length_trace(p);
  } else if (a.kind == "nested-lb") {
    ops = nested_lowerbound_trace(a.n);
  } else if (a.kind == "kinetic-lb") {
    scenario = lowerbound_scenario(a.n);
    kinetic = true;
  } else if (a.kind == "kinetic-random") {
    scenario = random_kinetic_scenario(a.n, a.horizon, seed);
    kinetic = true;
  } else {
    throw ConfigError("unknown generator '" + a.kind + "'");
  }
  Sink sink(a.output, out);
  if (kinetic) {
    write_scenario(sink.get(), scenario);
  } else {
    write_trace(sink.get(), ops);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::string> methods;
  std::vector<int> ns;
  MethodFlags flags;
  std::string workload = "auto";
  double delete_prob = 0.25;
  std::uint64_t seed = 1;
  bool timing = false;
  std::string output;
};

std::vector<UpdateOp> bench_workload(const MethodSpec& spec, const std::string& workload, int n, double delete_prob,
                                     std::uint64_t seed) {
  std::string kind = workload;
  if (kind == "auto") {
    if (spec.name == "grid") kind = "bounded-length";
    else if (spec.name == "greedy-nested") kind = "nested-lb";
    else kind = "random";
  }
  if (kind == "nested-lb") return nested_lowerbound_trace(n);
  if (kind == "bounded-length") {
    BoundedTraceParams p;
    p.inserts = n;
    p.L = static_cast<int>(spec.get_int("L", 8));
    p.delete_prob = delete_prob;
    p.max_coord = std::max(10.0, n / 4.0);
    p.seed = seed;
    return bounded_length_trace(p);
  }
  if (kind == "random") {
    RandomTraceParams p;
    p.inserts = n;
    p.delete_prob = delete_prob;
    p.seed = seed;
    if (spec.name == "fixed-distinct" || spec.name == "fixed-chain") p.universe = spec.get_int("universe");
    return random_trace(p);
  }
  throw ConfigError("unknown workload '" + workload + "'");
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.methods.empty()) throw ConfigError("bench needs at least one --method");
  if (a.ns.empty()) throw ConfigError("bench needs at least one --n");
  const std::uint64_t seed = effective_seed(a.seed);
  std::vector<MethodSpec> specs;
  for (const auto& m : a.methods) specs.push_back(merge_flags(MethodSpec::parse(m), a.flags, true));
  Sink sink(a.output, out);
  std::ostream& o = sink.get();
  o << "method,n,params,colors,recolor_total,recolor_max,recolor_amortized,wall_time\n";
  int status = kExitOk;
  for (const auto& spec : specs) {
    for (int n : a.ns) {
      try {
        if (n < 1) throw ConfigError("--n must be at least 1");
        const auto ops = bench_workload(spec, a.workload, n, a.delete_prob, seed);
        auto engine = make_engine(spec);
        const auto start = std::chrono::steady_clock::now();
        for (const auto& op : ops) engine->apply(op);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const auto v = engine->verify();
        if (!v.ok()) throw ViolationError(v.describe());
        const auto& st = engine->state();
        o << spec.name << ',' << n << ',' << spec.params_string(';') << ',' << st.colors_used() << ','
          << st.ledger().total() << ',' << st.ledger().max_per_update() << ',' << fixed6(st.ledger().amortized()) << ','
          << (a.timing ? fixed6(secs) : std::string("-")) << "\n";
      } catch (const std::exception& e) {
        err << "bench: " << spec.to_string() << " n=" << n << ": " << e.what() << "\n";
        int code = kExitInvariant;
        if (dynamic_cast<const ViolationError*>(&e)) code = kExitViolation;
        else if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const ConfigError*>(&e)) code = kExitInputError;
        status = std::max(status, code);
      }
    }
  }
  return status;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string trace;
  std::string log;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto entries = with_input(a.log, [](std::istream& in) { return parse_run_log(in); });
  if (!a.trace.empty()) {
    const auto ops = with_input(a.trace, [](std::istream& in) { return parse_trace(in); });
    if (ops.size() != entries.size()) {
      throw InputError("log has " + std::to_string(entries.size()) + " updates but the trace has " +
                       std::to_string(ops.size()));
    }
    for (std::size_t k = 0; k < ops.size(); ++k) {
      if (!(ops[k] == entries[k].op)) {
        throw InputError("log and trace disagree at update " + std::to_string(k + 1));
      }
    }
  }
  std::map<IntervalId, Interval> live;
  Assignment colors;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    const std::string where = "update " + std::to_string(k + 1);
    if (e.op.kind == UpdateOp::Kind::Insert) {
      if (!live.emplace(e.op.id, e.op.interval).second) throw InputError(where + ": id " + std::to_string(e.op.id) + " is already live");
    } else {
      if (!live.erase(e.op.id)) throw InputError(where + ": id " + std::to_string(e.op.id) + " is not live");
      colors.erase(e.op.id);
    }
    for (const auto& ev : e.recolors) {
      if (!live.count(ev.id)) throw InputError(where + ": color for id " + std::to_string(ev.id) + " which is not live");
      colors[ev.id] = ev.color;
    }
    std::vector<Interval> ivs;
    for (const auto& [id, iv] : live) ivs.push_back(iv);
    const auto v = is_conflict_free(ivs, colors);
    if (!v.ok()) {
      out << "VIOLATION " << where << ": " << v.describe() << "\n";
      return kExitViolation;
    }
  }
  out << "OK updates=" << entries.size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- adversary

struct AdversaryArgs {
  std::string kind = "general";
  int n = 256;
  std::optional<int> budget_c;
  std::optional<int> budget_r;
  std::string engine;
  MethodFlags flags;
  int check_every = 1;
  std::string output;
};

int cmd_adversary(const AdversaryArgs& a, std::ostream& out) {
  if (a.n < 2) throw ConfigError("--n must be at least 2");
  if (a.budget_r && *a.budget_r < 1) throw ConfigError("--budget-r must be at least 1");
  if (a.check_every < 0) throw ConfigError("--check-every must be non-negative");
  const MethodSpec spec = merge_flags(MethodSpec::parse(a.engine), a.flags);
  const EngineFactory factory = make_factory(spec);
  auto engine = factory();
  const auto declared = engine->declared_recolor_budget();

  AdversaryConfig cfg;
  cfg.n = a.n;
  cfg.c_budget = a.budget_c;
  cfg.check_every = a.check_every;
  AdversaryTranscript t;
  if (a.kind == "general") {
    if (a.budget_r || declared) {
      cfg.r = a.budget_r ? *a.budget_r : std::max(1, *declared);
      t = run_general_adversary(*engine, cfg);
    } else {
      t = run_general_adversary_adaptive(factory, a.n);
    }
  } else if (a.kind == "local") {
    cfg.r = a.budget_r ? *a.budget_r : std::max(1, declared.value_or(1));
    t = run_local_adversary(*engine, cfg);
  } else {
    throw ConfigError("--kind must be general or local");
  }
  Sink sink(a.output, out);
  write_transcript(sink.get(), t);
  return t.conflict_free ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- kinetic

struct KineticArgs {
  std::string scenario;
  std::optional<double> until;
  bool to_completion = false;
  std::string audit = "every";
  bool exact = false;
  std::string output;
};

int cmd_kinetic(const KineticArgs& a, std::ostream& out, std::ostream& err) {
  if (a.until.has_value() == a.to_completion) throw ConfigError("give exactly one of --until and --to-completion");
  auto scenario = with_input(a.scenario, [](std::istream& in) { return parse_scenario(in); });
  KineticOptions opt;
  opt.exact = a.exact;
  opt.audit_every = a.audit == "every";
  KineticMaintainer km(std::move(scenario), 0.0, opt);
  if (a.until && !(*a.until < km.horizon())) {
    throw InputError("some interval degenerates at t=" + format_number(km.horizon()) + ", before --until");
  }
  if (a.to_completion && std::isfinite(km.horizon())) {
    throw InputError("some interval degenerates at t=" + format_number(km.horizon()));
  }

  Sink sink(a.output, out);
  std::ostream& o = sink.get();
  o << "# kinetic n=" << km.size() << " chain=" << km.chain().size() << "\n";
  for (IntervalId id : sorted_ids(km.state().assignment())) {
    o << format_recolor(RecolorEvent{id, km.state().color_of(id), true}) << "\n";
  }
  int status = kExitOk;
  for (auto ev = km.next_event(); ev && (a.to_completion || ev->time <= *a.until); ev = km.next_event()) {
    const EventReport rep = km.step();
    o << "E " << format_number(rep.event.time) << ' ' << to_string(rep.event.kind) << ' ' << rep.event.first << ' '
      << rep.event.second << "\n";
    for (const auto& r : rep.recolors) o << format_recolor(r) << "\n";
    if (opt.audit_every) {
      const auto v = km.verify();
      if (!v.ok()) {
        err << "violation after event " << km.events_processed() << ": " << v.describe() << "\n";
        status = kExitViolation;
        break;
      }
    }
  }
  if (status == kExitOk) {
    if (auto bad = km.check_invariants()) throw InvariantError(*bad);
    const auto v = km.verify();
    if (!v.ok()) {
      err << "violation at the end of the run: " << v.describe() << "\n";
      status = kExitViolation;
    }
  }
  const auto& led = km.state().ledger();
  o << "SUMMARY events=" << km.events_processed() << " recolorings=" << led.total()
    << " max_recolor=" << led.max_per_update() << " colors=" << km.state().colors_used() << "\n";
  return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conflict-free coloring of intervals: engines, adversaries, kinetic simulation"};
  app.name("cfcolor");
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Replay an update trace through an engine");
  run_cmd->add_option("--method", run.method, "Method spec, e.g. dynamic:t=2")->required();
  add_method_flags(run_cmd, run.flags);
  run_cmd->add_option("--trace", run.trace, "Trace file ('-' for stdin)");
  run_cmd->add_option("--audit", run.audit, "Oracle checks: every, final or none")
      ->check(CLI::IsMember({"every", "final", "none"}));
  run_cmd->add_option("--output", run.output, "Output file");
  run_cmd->add_option("--seed", run.seed, "Random seed (unused by deterministic engines)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate traces and kinetic scenarios");
  gen_cmd->add_option("kind", gen.kind, "random, nested-lb, bounded-length, kinetic-lb or kinetic-random")
      ->required()
      ->check(CLI::IsMember({"random", "nested-lb", "bounded-length", "kinetic-lb", "kinetic-random"}));
  gen_cmd->add_option("--n", gen.n, "Number of intervals (gadgets for kinetic-lb)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--universe", gen.universe, "Integer endpoints in [0, U)");
  gen_cmd->add_option("--max-coord", gen.max_coord, "Largest left endpoint");
  gen_cmd->add_option("--max-length", gen.max_length, "Largest interval length (random)");
  gen_cmd->add_option("--L", gen.L, "Length bound (bounded-length)");
  gen_cmd->add_option("--delete-prob", gen.delete_prob, "Deletion probability after each insertion");
  gen_cmd->add_option("--max-live", gen.max_live, "Force deletions at this many live intervals");
  gen_cmd->add_option("--horizon", gen.horizon, "Time horizon (kinetic-random)");
  gen_cmd->add_option("--output", gen.output, "Output file");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure colors and recolorings as CSV");
  bench_cmd->add_option("--method", bench.methods, "Method spec; repeat for several")->required();
  bench_cmd->add_option("--n", bench.ns, "Insertions per row; repeat or separate by commas")
      ->required()
      ->delimiter(',');
  add_method_flags(bench_cmd, bench.flags);
  bench_cmd->add_option("--workload", bench.workload, "auto, random, bounded-length or nested-lb")
      ->check(CLI::IsMember({"auto", "random", "bounded-length", "nested-lb"}));
  bench_cmd->add_option("--delete-prob", bench.delete_prob, "Deletion probability after each insertion");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_flag("--timing", bench.timing, "Report wall time (otherwise '-')");
  bench_cmd->add_option("--output", bench.output, "Output file");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Oracle-check a recorded run log");
  verify_cmd->add_option("--log", verify.log, "Output of 'run'")->required();
  verify_cmd->add_option("--trace", verify.trace, "Trace the log must match");

  AdversaryArgs adv;
  auto* adv_cmd = app.add_subcommand("adversary", "Run a lower-bound adversary against an engine");
  adv_cmd->add_option("--kind", adv.kind, "general or local")->check(CLI::IsMember({"general", "local"}));
  adv_cmd->add_option("--n", adv.n, "Insertion budget");
  adv_cmd->add_option("--budget-c", adv.budget_c, "Assumed number of colors");
  adv_cmd->add_option("--budget-r", adv.budget_r, "Assumed recolorings per insertion");
  adv_cmd->add_option("--engine", adv.engine, "Method spec of the engine under attack")->required();
  add_method_flags(adv_cmd, adv.flags);
  adv_cmd->add_option("--check-every", adv.check_every, "Oracle period in insertions (0: final only)");
  adv_cmd->add_option("--output", adv.output, "Output file");

  KineticArgs kin;
  auto* kin_cmd = app.add_subcommand("kinetic", "Simulate the kinetic chain coloring");
  kin_cmd->add_option("--scenario", kin.scenario, "Scenario file ('-' for stdin)")->required();
  kin_cmd->add_option("--until", kin.until, "Process events up to this time");
  kin_cmd->add_flag("--to-completion", kin.to_completion, "Process every event");
  kin_cmd->add_option("--audit", kin.audit, "every or final")->check(CLI::IsMember({"every", "final"}));
  kin_cmd->add_flag("--exact", kin.exact, "Exact rational event times");
  kin_cmd->add_option("--output", kin.output, "Output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, out, err);
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out, err);
    if (verify_cmd->parsed()) return cmd_verify(verify, out);
    if (adv_cmd->parsed()) return cmd_adversary(adv, out);
    if (kin_cmd->parsed()) return cmd_kinetic(kin, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InvariantError& e) {
    err << "invariant failure: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitInputError;
}

}  // namespace cfc
