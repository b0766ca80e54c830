#include "grw/cli.hpp"

#include <CLI11.hpp>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "grw/errors.hpp"
#include "grw/optimizer.hpp"
#include "grw/resetting.hpp"

namespace grw::cli {
namespace {

nlohmann::json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("GRW_DEFAULT_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || *env == '-') throw DomainError("GRW_DEFAULT_SEED is not an unsigned integer");
  return v;
}

std::vector<double> make_r_grid(double lo, double hi, int points, bool log_scale) {
  if (!(lo > 0.0 && hi < 1.0 && lo <= hi)) throw DomainError("r grid must satisfy 0 < r-min <= r-max < 1");
  if (points < 1) throw DomainError("r-points must be at least 1");
  if (points == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    g[static_cast<std::size_t>(i)] =
        log_scale ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<SweepRow> sweep(const WalkSpec& spec, const std::vector<double>& grid, const std::optional<McConfig>& mc) {
  spec.validate();
  if (grid.empty()) throw DomainError("empty r grid");
  for (double r : grid)
    if (!(r > 0.0 && r < 1.0)) throw DomainError("every r must lie in (0,1)");
  const FreeProcessGf free = gillis_free_process(spec.epsilon);
  const RegimeClass regime = classify_regime(spec.epsilon);
  std::vector<SweepRow> rows;
  for (double r : grid) {
    const MomentSummary m = moment_summary(free, spec, {r});
    SweepRow row{spec.epsilon, spec.x0, spec.xr, r, m.mean, m.std_dev, m.cv, {}, {}, to_string(regime.kind), regime.rho};
    if (mc) {
      const McEstimate e = estimate(spec, r, *mc);
      row.mean_mc = e.mean;
      row.se_mc = e.se_mean;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << '\n';
  for (const SweepRow& w : rows)
    out << format_double(w.epsilon) << ',' << w.x0 << ',' << w.xr << ',' << format_double(w.r) << ','
        << format_double(w.mean_analytic) << ',' << format_double(w.std_analytic) << ',' << format_double(w.cv) << ','
        << optional_field(w.mean_mc) << ',' << optional_field(w.se_mc) << ',' << w.regime << ','
        << optional_field(w.rho) << '\n';
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (const SweepRow& w : rows)
    a.push_back({{"epsilon", w.epsilon},
                 {"x0", w.x0},
                 {"xr", w.xr},
                 {"r", w.r},
                 {"mean_analytic", w.mean_analytic},
                 {"std_analytic", w.std_analytic},
                 {"cv", w.cv},
                 {"mean_mc", number_or_null(w.mean_mc)},
                 {"se_mc", number_or_null(w.se_mc)},
                 {"regime", w.regime},
                 {"rho", number_or_null(w.rho)}});
  return a;
}

nlohmann::json classify_report(double epsilon) {
  const RegimeClass c = classify_regime(epsilon);
  nlohmann::json j{{"epsilon", epsilon},
                   {"regime", to_string(c.kind)},
                   {"rho", number_or_null(c.rho)},
                   {"delta", number_or_null(c.delta)},
                   {"return_probability", nullptr},
                   {"mean_return_time", nullptr}};
  if (c.kind == RegimeKind::Transient) j["return_probability"] = return_probability(epsilon);
  if (c.kind == RegimeKind::PositiveRecurrent) j["mean_return_time"] = mean_return_time(epsilon);
  return j;
}

nlohmann::json optimize_report(const WalkSpec& spec) {
  const FreeProcessGf free = gillis_free_process(spec.epsilon);
  const OptimizationResult o = find_optimal_r(free, spec);
  nlohmann::json j;
  if (!o.r_star) {
    j = {{"r_star", nullptr}, {"z_star", nullptr}, {"mean_at_star", nullptr}, {"converged", false}, {"reason", o.reason}};
    return j;
  }
  const auto [lo, hi] = o.bracket;
  j = {{"r_star", *o.r_star},
       {"z_star", 1.0 - *o.r_star},
       {"mean_at_star", o.mean_at_star},
       {"converged", o.converged},
       {"certificate",
        {{"bracket", {lo, hi}},
         {"slope_at_bracket", {mean_fht_derivative(free, spec, {lo}), mean_fht_derivative(free, spec, {hi})}},
         {"cv_residual_at_star", cv_optimality_residual(free, spec, *o.r_star)},
         {"iterations", o.iterations},
         {"local_minima", o.local_minima}}}};
  return j;
}

nlohmann::json threshold_report(const WalkSpec& spec) {
  spec.validate();
  if (!(snap_epsilon(spec.epsilon) > 0.5))
    return {{"r_th", nullptr},
            {"z_th", nullptr},
            {"free_mean", nullptr},
            {"converged", false},
            {"reason", "free mean is infinite for epsilon <= 1/2"}};
  const FreeProcessGf free = gillis_free_process(spec.epsilon);
  const ThresholdResult t = find_threshold_r(free, spec);
  if (!t.r_th)
    return {{"r_th", nullptr}, {"z_th", nullptr}, {"free_mean", t.free_mean}, {"converged", false}, {"reason", t.reason}};
  return {{"r_th", *t.r_th},
          {"z_th", 1.0 - *t.r_th},
          {"free_mean", t.free_mean},
          {"converged", true},
          {"certificate", {{"mean_at_threshold", mean_fht(free, spec, {*t.r_th})}}}};
}

namespace {

struct Options {
  double epsilon = 0.0;
  std::int64_t x0 = 1;
  std::int64_t xr = 1;
  std::vector<double> r;
  std::optional<double> r_min, r_max;
  int r_points = 20;
  std::string r_scale = "log";
  std::optional<std::int64_t> mc;
  std::optional<std::uint64_t> seed;
  std::int64_t max_steps = kDefaultMaxSteps;
  int workers = 0;
  std::string out;
  std::string format;
  std::string dump;
  std::string suite;
};

McConfig mc_config(const Options& o, std::int64_t n) {
  McConfig c;
  c.n_trajectories = n;
  c.seed = o.seed ? *o.seed : default_seed();
  c.max_steps = o.max_steps;
  c.workers = o.workers > 0 ? o.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  c.validate();
  return c;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Data goes to --out (with a metadata sidecar) or to stdout.
void emit(const Options& o, const std::string& data, const std::string& command, const nlohmann::json& meta,
          std::ostream& out) {
  if (o.out.empty()) {
    out << data;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw DomainError("cannot open " + o.out + " for writing");
  f << data;
  if (!f) throw ResourceError("failed to write " + o.out);
  nlohmann::json side = meta;
  side["command"] = command;
  side["created_utc"] = utc_now();
  std::ofstream s(o.out + ".meta.json", std::ios::binary);
  if (!s) throw DomainError("cannot open " + o.out + ".meta.json for writing");
  s << side.dump(2) << '\n';
}

nlohmann::json spec_meta(const Options& o) { return {{"epsilon", o.epsilon}, {"x0", o.x0}, {"xr", o.xr}}; }

void add_spec_options(CLI::App* app, Options& o, bool with_xr) {
  app->add_option("--epsilon", o.epsilon, "bias parameter in (-1, 1]")->required();
  app->add_option("--x0", o.x0, "start site (nonzero)")->required();
  if (with_xr) app->add_option("--xr", o.xr, "reset site (nonzero); defaults to x0");
}

void add_mc_options(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "64-bit seed; GRW_DEFAULT_SEED is used when absent");
  app->add_option("--max-steps", o.max_steps, "step cap per trajectory")->check(CLI::PositiveNumber);
  app->add_option("--workers", o.workers, "threads (0: all hardware threads)")->check(CLI::NonNegativeNumber);
}

int dispatch(CLI::App& app, Options& o, std::ostream& out, std::ostream& err) {
  const auto xr_or_x0 = [&](CLI::App* sub) { return sub->count("--xr") ? o.xr : o.x0; };

  if (auto* sub = app.get_subcommand("classify"); sub->parsed()) {
    emit(o, classify_report(o.epsilon).dump(2) + "\n", "classify", {{"epsilon", o.epsilon}}, out);
    return kExitOk;
  }
  if (auto* sub = app.get_subcommand("sweep"); sub->parsed()) {
    o.xr = xr_or_x0(sub);
    const WalkSpec spec = WalkSpec::make(o.epsilon, o.x0, o.xr);
    std::vector<double> grid = o.r;
    if (grid.empty()) {
      if (!o.r_min || !o.r_max) throw DomainError("give --r or both --r-min and --r-max");
      grid = make_r_grid(*o.r_min, *o.r_max, o.r_points, o.r_scale == "log");
    }
    std::optional<McConfig> mc;
    if (o.mc) mc = mc_config(o, *o.mc);
    const auto rows = sweep(spec, grid, mc);
    std::ostringstream data;
    if (o.format == "json")
      data << sweep_json(rows).dump(2) << '\n';
    else
      write_sweep_csv(data, rows);
    nlohmann::json meta = spec_meta(o);
    meta["r"] = grid;
    if (mc) meta["mc"] = {{"n", mc->n_trajectories}, {"seed", mc->seed}, {"max_steps", mc->max_steps}};
    emit(o, data.str(), "sweep", meta, out);
    return kExitOk;
  }
  if (auto* sub = app.get_subcommand("optimize"); sub->parsed()) {
    o.xr = xr_or_x0(sub);
    emit(o, optimize_report(WalkSpec::make(o.epsilon, o.x0, o.xr)).dump(2) + "\n", "optimize", spec_meta(o), out);
    return kExitOk;
  }
  if (auto* sub = app.get_subcommand("threshold"); sub->parsed()) {
    o.xr = xr_or_x0(sub);
    emit(o, threshold_report(WalkSpec::make(o.epsilon, o.x0, o.xr)).dump(2) + "\n", "threshold", spec_meta(o), out);
    return kExitOk;
  }
  if (auto* sub = app.get_subcommand("simulate"); sub->parsed()) {
    o.xr = xr_or_x0(sub);
    const WalkSpec spec = WalkSpec::make(o.epsilon, o.x0, o.xr);
    if (o.r.size() != 1) throw DomainError("simulate takes exactly one --r");
    const McConfig cfg = mc_config(o, o.mc.value_or(10'000));
    const McSamples samples = simulate(spec, o.r[0], cfg);
    if (!o.dump.empty()) {
      std::ofstream f(o.dump, std::ios::binary);
      if (!f) throw DomainError("cannot open " + o.dump + " for writing");
      write_sample_dump(f, samples);
    }
    const McEstimate e = summarize(samples, cfg.max_steps);
    const nlohmann::json j{{"n", e.n},
                           {"mean", e.mean},
                           {"std_dev", e.std_dev},
                           {"se_mean", e.se_mean},
                           {"se_std", e.se_std},
                           {"censored_count", e.censored_count},
                           {"biased_low", e.biased_low},
                           {"seed", cfg.seed},
                           {"max_steps", cfg.max_steps}};
    nlohmann::json meta = spec_meta(o);
    meta["r"] = o.r[0];
    emit(o, j.dump(2) + "\n", "simulate", meta, out);
    return kExitOk;
  }
  if (auto* sub = app.get_subcommand("validate"); sub->parsed()) {
    const auto results = run_validation(o.suite);
    int failed = 0;
    for (const CheckResult& c : results) {
      out << (c.pass ? "PASS " : "FAIL ") << o.suite << '/' << c.name << "  " << c.detail << '\n';
      if (!c.pass) ++failed;
    }
    out << o.suite << ": " << results.size() - static_cast<std::size_t>(failed) << '/' << results.size()
        << " checks passed\n";
    return failed == 0 ? kExitOk : kExitNumeric;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gillis random walk with stochastic resetting"};
  app.require_subcommand(1);

  auto* classify = app.add_subcommand("classify", "regime, rho, delta and return statistics of a walk");
  classify->add_option("--epsilon", o.epsilon, "bias parameter in (-1, 1]")->required();
  classify->add_option("--out", o.out, "write to this file instead of stdout");

  auto* sw = app.add_subcommand("sweep", "analytic (and optionally Monte Carlo) moments over an r grid");
  add_spec_options(sw, o, true);
  auto* r_list = sw->add_option("--r", o.r, "comma-separated resetting probabilities")->delimiter(',');
  auto* r_min = sw->add_option("--r-min", o.r_min, "grid lower end");
  auto* r_max = sw->add_option("--r-max", o.r_max, "grid upper end");
  sw->add_option("--r-points", o.r_points, "grid size");
  sw->add_option("--r-scale", o.r_scale, "grid spacing")->check(CLI::IsMember({"log", "linear"}));
  r_list->excludes(r_min)->excludes(r_max);
  sw->add_option("--mc", o.mc, "add Monte Carlo columns with this many trajectories")->check(CLI::PositiveNumber);
  add_mc_options(sw, o);
  sw->add_option("--out", o.out, "write to this file instead of stdout");
  sw->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}))->default_val("csv");

  auto* opt = app.add_subcommand("optimize", "optimal resetting probability r*");
  add_spec_options(opt, o, true);
  opt->add_option("--out", o.out, "write to this file instead of stdout");

  auto* thr = app.add_subcommand("threshold", "threshold probability r_th (positive-recurrent walks)");
  add_spec_options(thr, o, true);
  thr->add_option("--out", o.out, "write to this file instead of stdout");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate at one r, with an optional raw sample dump");
  add_spec_options(sim, o, true);
  sim->add_option("--r", o.r, "resetting probability")->required();
  sim->add_option("--mc", o.mc, "number of trajectories (default 10000)")->check(CLI::PositiveNumber);
  add_mc_options(sim, o);
  sim->add_option("--dump", o.dump, "binary sample dump path");
  sim->add_option("--out", o.out, "write to this file instead of stdout");

  auto* val = app.add_subcommand("validate", "run an oracle cross-check suite");
  val->add_option("suite", o.suite, "suite name")->required()->check(CLI::IsMember(kValidationSuites));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return dispatch(app, o, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace grw::cli
