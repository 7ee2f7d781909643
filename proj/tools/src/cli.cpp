#include "hqc_tools/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "hqc/analytic.hpp"
#include "hqc/grid.hpp"
#include "hqc/sim_engine.hpp"
#include "hqc/strategy.hpp"
#include "hqc/tv_distance.hpp"
#include "hqc/verify.hpp"
#include "hqc_tools/report_io.hpp"

namespace hqc::cli {
namespace {

using nlohmann::json;

/// A usage or configuration problem; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format;
  std::string output;
};

struct SimulateOpts {
  std::optional<int> n;
  std::optional<int> k;
  std::string x0;
  std::string y0;
  std::string strategy = "optimal";
  bool lumped = false;
  std::size_t replicas = 10000;
  std::optional<std::uint64_t> seed;
  std::string t_grid = "log:0.01:10:50";
  unsigned parallelism = 1;
  double t_max = 1e4;
  bool debug_check = false;
};

struct ExactOpts {
  std::vector<int> k;
  std::optional<double> t;
  std::string t_grid;
  bool mean = false;
};

struct VerifyOpts {
  std::vector<std::string> checks;
  int m_max = 50;
  int k_max = 200;
  int n = 6;
  std::size_t replicas = 100000;
  std::optional<std::uint64_t> seed;
  unsigned parallelism = 1;
};

struct TvOpts {
  std::optional<int> n;
  int k = 0;
  std::optional<double> t;
  std::string t_grid;
  std::optional<double> level;
  bool gap = false;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::ostream& err) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HQC_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || ptr != end) {
      throw UsageError("HQC_SEED: not an unsigned integer: '" + std::string(env) + "'");
    }
    err << "seed: " << v << " (from HQC_SEED)\n";
    return v;
  }
  err << "seed: " << kDefaultSeed << " (default)\n";
  return kDefaultSeed;
}

std::vector<double> resolve_grid(const std::optional<double>& t, const std::string& grid) {
  if (t && !grid.empty()) throw UsageError("--t and --t-grid are mutually exclusive");
  if (t) {
    if (!(*t >= 0.0)) throw UsageError("--t: must be nonnegative");
    return {*t};
  }
  if (grid.empty()) return {};
  try {
    auto g = parse_grid(grid);
    if (g.front() < 0.0) throw UsageError("--t-grid: times must be nonnegative");
    return g;
  } catch (const GridError& e) {
    throw UsageError(std::string("--t-grid: ") + e.what());
  }
}

/// Writes text to --output, or to `out` when no path was given.
void emit(const Common& common, const std::string& text, std::ostream& out) {
  if (common.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(common.output, std::ios::binary);
  if (!file) throw UsageError("--output: cannot open '" + common.output + "' for writing");
  file << text;
  file.flush();
  if (!file) throw UsageError("--output: write to '" + common.output + "' failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Strategy resolve_strategy(const std::string& name, std::size_t n) {
  if (name == "optimal") return Strategy::optimal(n);
  if (name == "aldous") return Strategy::aldous(n);
  if (name == "independent") return Strategy::independent(n);
  if (name.rfind("file:", 0) == 0) {
    const std::string path = name.substr(5);
    try {
      return Strategy::parametric(load_strategy_params(path, n), name);
    } catch (const StrategyFileError& e) {
      throw UsageError("strategy file '" + path + "': " + e.what());
    } catch (const std::exception& e) {
      throw UsageError("strategy file '" + path + "': " + e.what());
    }
  }
  throw UsageError("--strategy: unknown strategy '" + name +
                   "' (expected optimal, aldous, independent or file:PATH)");
}

Vertex parse_vertex(const std::string& flag, const std::string& bits) {
  try {
    return Vertex::parse(bits);
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

int cmd_simulate(const SimulateOpts& o, const Common& common, std::ostream& out,
                 std::ostream& err) {
  Vertex x0(1);
  Vertex y0(1);
  json echo;
  if (!o.x0.empty() || !o.y0.empty()) {
    if (o.x0.empty() || o.y0.empty()) throw UsageError("--x0 and --y0 must be given together");
    if (o.k) throw UsageError("--k cannot be combined with --x0/--y0");
    x0 = parse_vertex("--x0", o.x0);
    y0 = parse_vertex("--y0", o.y0);
    if (x0.dim() != y0.dim()) throw UsageError("--x0/--y0: dimension mismatch");
    if (o.n && static_cast<std::size_t>(*o.n) != x0.dim()) {
      throw UsageError("--n: does not match the length of --x0");
    }
    echo["x0"] = o.x0;
    echo["y0"] = o.y0;
  } else {
    if (!o.n || !o.k) throw UsageError("either --n and --k, or --x0 and --y0, are required");
    if (*o.n < 1) throw UsageError("--n: must be at least 1");
    if (*o.k < 0 || *o.k > *o.n) throw UsageError("--k: must lie in [0, n]");
    x0 = Vertex(static_cast<std::size_t>(*o.n));
    y0 = Vertex(static_cast<std::size_t>(*o.n));
    for (int i = 1; i <= *o.k; ++i) y0.toggle(static_cast<std::size_t>(i));
  }
  const std::size_t n = x0.dim();
  const int k = static_cast<int>(hamming(x0, y0));
  const Strategy strategy = resolve_strategy(o.strategy, n);
  if (o.lumped && o.strategy != "optimal") {
    throw UsageError("--lumped: only available for the optimal strategy");
  }

  ReplicaConfig config;
  if (o.lumped) {
    config.start = LumpedStart{k};
  } else {
    config.start = BitLevelStart{x0, y0, strategy};
  }
  config.replicas = o.replicas;
  config.seed = resolve_seed(o.seed, err);
  config.t_grid = resolve_grid(std::nullopt, o.t_grid);
  config.parallelism = o.parallelism;
  config.t_max = o.t_max;
  config.debug_check = o.debug_check;

  SimReport report;
  try {
    report = run_replicas(config);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }

  if (common.format == "csv") {
    std::ostringstream os;
    io::write_tail_csv(os, report);
    emit(common, os.str(), out);
  } else {
    // Parallelism is left out of the echo so reports do not depend on it.
    echo["n"] = n;
    echo["k"] = k;
    echo["strategy"] = o.strategy;
    echo["lumped"] = o.lumped;
    echo["replicas"] = o.replicas;
    echo["seed"] = config.seed;
    echo["t_grid"] = o.t_grid;
    echo["t_max"] = o.t_max;
    emit(common, dump(io::envelope("simulate", echo, io::to_json(report))), out);
  }
  return kExitOk;
}

int cmd_exact(const ExactOpts& o, const Common& common, std::ostream& out) {
  if (o.k.empty()) throw UsageError("--k: at least one value is required");
  for (const int k : o.k) {
    if (k < 0) throw UsageError("--k: must be nonnegative");
    if (k > kClosedFormMaxK) {
      throw UsageError("--k: " + std::to_string(k) + " exceeds the closed-form limit " +
                       std::to_string(kClosedFormMaxK) + "; use simulate --lumped instead");
    }
  }
  const json echo{{"k", o.k}, {"t", o.t ? json(*o.t) : json(nullptr)},
                  {"t_grid", o.t_grid}, {"mean", o.mean}};
  if (o.mean) {
    if (o.t || !o.t_grid.empty()) throw UsageError("--mean takes no time arguments");
    if (common.format == "json") {
      json rows = json::array();
      for (const int k : o.k) rows.push_back({{"k", k}, {"mean_tau", expected_tau_hat(k)}});
      emit(common, dump(io::envelope("exact", echo, {{"rows", rows}})), out);
    } else {
      std::string text = "k,mean_tau\n";
      for (const int k : o.k) text += std::to_string(k) + "," + io::format_double(expected_tau_hat(k)) + "\n";
      emit(common, text, out);
    }
    return kExitOk;
  }
  const auto grid = resolve_grid(o.t, o.t_grid);
  if (grid.empty()) throw UsageError("one of --t, --t-grid or --mean is required");
  std::vector<io::VhatRow> rows;
  for (const int k : o.k) {
    for (const double t : grid) rows.push_back({k, t, vhat(k, t)});
  }
  if (common.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back({{"k", r.k}, {"t", r.t}, {"vhat", r.vhat}});
    emit(common, dump(io::envelope("exact", echo, {{"rows", arr}})), out);
  } else {
    std::ostringstream os;
    io::write_vhat_csv(os, rows);
    emit(common, os.str(), out);
  }
  return kExitOk;
}

int cmd_verify(const VerifyOpts& o, const Common& common, std::ostream& out, std::ostream& err) {
  std::vector<std::string> checks = o.checks;
  if (checks.empty()) checks = check_names();
  for (const auto& c : checks) {
    const auto& names = check_names();
    if (std::find(names.begin(), names.end(), c) == names.end()) {
      throw UsageError("--checks: unknown check '" + c + "'");
    }
  }
  if (o.m_max < 1) throw UsageError("--m-max: must be at least 1");
  if (o.k_max < 1) throw UsageError("--k-max: must be at least 1");
  if (o.n < 1) throw UsageError("--n: must be at least 1");
  if (o.replicas < 1) throw UsageError("--replicas: must be at least 1");

  VerifyOptions options;
  options.m_max = o.m_max;
  options.k_max = o.k_max;
  options.n = o.n;
  options.replicas = o.replicas;
  options.parallelism = o.parallelism;
  options.seed = resolve_seed(o.seed, err);

  json results = json::array();
  bool all = true;
  for (const auto& c : checks) {
    const CheckResult r = run_check(c, options);
    all = all && r.pass;
    results.push_back(io::to_json(r));
  }
  const json echo{{"checks", checks},         {"m_max", o.m_max}, {"k_max", o.k_max},
                  {"n", o.n},                 {"replicas", o.replicas},
                  {"seed", options.seed}};
  emit(common, dump(io::envelope("verify", echo, {{"checks", results}, {"pass", all}})), out);
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_tv(const TvOpts& o, const Common& common, std::ostream& out) {
  if (o.k < 0) throw UsageError("--k: must be nonnegative");
  const int n = o.n.value_or(o.k);
  if (n < o.k) throw UsageError("--n: must be at least k");
  json echo{{"n", n}, {"k", o.k}, {"gap", o.gap}};
  if (o.level) {
    if (o.t || !o.t_grid.empty()) throw UsageError("--level cannot be combined with --t/--t-grid");
    if (!(*o.level > 0.0 && *o.level < 1.0)) throw UsageError("--level: must lie in (0, 1)");
    if (o.k < 1) throw UsageError("--k: must be at least 1 with --level");
    const LevelCrossing c = level_crossing(n, o.k, *o.level);
    echo["level"] = *o.level;
    if (common.format == "json") {
      const json payload{{"t_tv", c.t_tv}, {"t_vhat", c.t_vhat}, {"ratio", c.ratio}};
      emit(common, dump(io::envelope("tv", echo, payload)), out);
    } else {
      emit(common,
           "n,k,level,t_tv,t_vhat,ratio\n" + std::to_string(n) + "," + std::to_string(o.k) + "," +
               io::format_double(*o.level) + "," + io::format_double(c.t_tv) + "," +
               io::format_double(c.t_vhat) + "," + io::format_double(c.ratio) + "\n",
           out);
    }
    return kExitOk;
  }
  const auto grid = resolve_grid(o.t, o.t_grid);
  if (grid.empty()) throw UsageError("one of --t, --t-grid or --level is required");
  echo["t"] = grid;
  if (o.gap) {
    std::vector<io::GapRow> rows;
    try {
      for (const double t : grid) rows.push_back({o.k, t, coupling_gap(o.k, t)});
    } catch (const std::out_of_range& e) {
      throw UsageError(std::string("--k: ") + e.what());
    }
    if (common.format == "json") {
      json arr = json::array();
      for (const auto& r : rows) {
        arr.push_back({{"k", r.k}, {"t", r.t}, {"tv", r.gap.tv}, {"vhat", r.gap.vhat},
                       {"gap", r.gap.gap}});
      }
      emit(common, dump(io::envelope("tv", echo, {{"rows", arr}})), out);
    } else {
      std::ostringstream os;
      io::write_gap_csv(os, rows);
      emit(common, os.str(), out);
    }
    return kExitOk;
  }
  const TvCurve curve = tv_curve(n, o.k, grid);
  if (common.format == "json") {
    json arr = json::array();
    for (const auto& [t, v] : curve.samples) arr.push_back({t, v});
    emit(common, dump(io::envelope("tv", echo, {{"samples", arr}})), out);
  } else {
    std::ostringstream os;
    io::write_tv_csv(os, curve);
    emit(common, os.str(), out);
  }
  return kExitOk;
}

void add_output_flags(CLI::App* cmd, Common& common, const std::string& default_format) {
  common.format = default_format;
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", common.output, "Write output to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Co-adapted couplings of random walks on the hypercube", "hqc"};
  app.require_subcommand(1);

  SimulateOpts sim;
  Common sim_out;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coupling-time tails");
  simulate->add_option("--n", sim.n, "Dimension");
  simulate->add_option("--k", sim.k, "Initial Hamming distance (starts at 0...0 vs 1..10..0)");
  simulate->add_option("--x0", sim.x0, "Explicit start of X as a bit string");
  simulate->add_option("--y0", sim.y0, "Explicit start of Y as a bit string");
  simulate->add_option("--strategy", sim.strategy, "optimal | aldous | independent | file:PATH")
      ->capture_default_str();
  simulate->add_flag("--lumped", sim.lumped, "Simulate only the distance chain (optimal strategy)");
  simulate->add_option("--replicas", sim.replicas, "Number of replicas")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Random seed (fallback: HQC_SEED)");
  simulate->add_option("--t-grid", sim.t_grid, "start:stop:step or log:start:stop:count")
      ->capture_default_str();
  simulate->add_option("--parallelism", sim.parallelism, "Replica worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--t-max", sim.t_max, "Censoring time")->capture_default_str();
  simulate->add_flag("--debug-check", sim.debug_check,
                     "Materialize Q at every step and cross-check the sampler");
  add_output_flags(simulate, sim_out, "json");

  ExactOpts exact;
  Common exact_out;
  auto* exact_cmd = app.add_subcommand("exact", "Exact tail and mean of the optimal coupling time");
  exact_cmd->add_option("--k", exact.k, "Start distances (comma separated)")
      ->delimiter(',')
      ->required();
  exact_cmd->add_option("--t", exact.t, "Single time");
  exact_cmd->add_option("--t-grid", exact.t_grid, "start:stop:step or log:start:stop:count");
  exact_cmd->add_flag("--mean", exact.mean, "Print E[tau] instead of tails");
  add_output_flags(exact_cmd, exact_out, "csv");

  VerifyOpts ver;
  Common ver_out;
  auto* verify = app.add_subcommand("verify", "Run verification checks; exit 1 on failure");
  verify->add_option("--checks", ver.checks,
                     "Comma separated subset of identities,parity,bellman,polytope,dominance,"
                     "lumping,marginals (default: all)")
      ->delimiter(',');
  verify->add_option("--m-max", ver.m_max, "Largest m for the Laplace identities")
      ->capture_default_str();
  verify->add_option("--k-max", ver.k_max, "Largest k for bellman and polytope")
      ->capture_default_str();
  verify->add_option("--n", ver.n, "Dimension for the Monte Carlo checks")->capture_default_str();
  verify->add_option("--replicas", ver.replicas, "Replicas per Monte Carlo curve")
      ->capture_default_str();
  verify->add_option("--seed", ver.seed, "Random seed (fallback: HQC_SEED)");
  verify->add_option("--parallelism", ver.parallelism, "Replica worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify->add_option("--output,-o", ver_out.output, "Write the report to this file");
  ver_out.format = "json";

  TvOpts tvo;
  Common tv_out;
  auto* tv_cmd = app.add_subcommand("tv", "Total variation distance and coupling gap");
  tv_cmd->add_option("--n", tvo.n, "Dimension (default: k)");
  tv_cmd->add_option("--k", tvo.k, "Initial Hamming distance")->required();
  tv_cmd->add_option("--t", tvo.t, "Single time");
  tv_cmd->add_option("--t-grid", tvo.t_grid, "start:stop:step or log:start:stop:count");
  tv_cmd->add_option("--level", tvo.level, "Report the times where tv and vhat cross this level");
  tv_cmd->add_flag("--gap", tvo.gap, "Emit k,t,tv,vhat,gap rows");
  add_output_flags(tv_cmd, tv_out, "csv");

  std::vector<const char*> argv{"hqc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, sim_out, out, err);
    if (exact_cmd->parsed()) return cmd_exact(exact, exact_out, out);
    if (verify->parsed()) return cmd_verify(ver, ver_out, out, err);
    if (tv_cmd->parsed()) return cmd_tv(tvo, tv_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hqc::cli
