// Command-line front end over the roadq C API.
//
// Exit codes: 0 success, 2 invalid configuration or arguments, 3 numerical
// failure (singular model, non-convergence, oracle failure), 4 file I/O.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "roadq/roadq.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct ScenarioDeleter {
  void operator()(roadq_scenario* s) const { roadq_scenario_destroy(s); }
};
struct DistDeleter {
  void operator()(roadq_dist* d) const { roadq_dist_destroy(d); }
};
using ScenarioPtr = std::unique_ptr<roadq_scenario, ScenarioDeleter>;
using DistPtr = std::unique_ptr<roadq_dist, DistDeleter>;

// Thrown to unwind with a given exit code; message goes to stderr.
struct Failure {
  int code;
  std::string message;
  json payload;
};

int exit_code_for(roadq_status st) {
  switch (st) {
    case ROADQ_OK:
      return kExitOk;
    case ROADQ_E_INVALID_ARGUMENT:
    case ROADQ_E_CONFIG:
      return kExitUsage;
    case ROADQ_E_IO:
      return kExitIo;
    default:
      return kExitNumerical;
  }
}

void check(roadq_status st, json payload = nullptr) {
  if (st != ROADQ_OK) {
    throw Failure{exit_code_for(st), std::string(roadq_status_name(st)) + ": " + roadq_last_error(),
                  std::move(payload)};
  }
}

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<double> probs_of(const roadq_dist* d) {
  const auto* p = roadq_dist_probs(d);
  return {p, p + roadq_dist_size(d)};
}

std::vector<double> values_of(const roadq_dist* d) {
  const auto* v = roadq_dist_values(d);
  return {v, v + roadq_dist_size(d)};
}

double tv(const roadq_dist* a, const roadq_dist* b) {
  double out = 0.0;
  check(roadq_tv_distance(a, b, &out));
  return out;
}

// Options shared by the subcommands that read a scenario.
struct Common {
  std::string config;
  std::string output;
  std::string convention;
  std::string model;
  std::optional<double> lambda;
  int section = 1;
  std::optional<double> beta;
  std::optional<double> gamma;
};

void add_common(CLI::App* cmd, Common& c, bool with_lambda = true) {
  cmd->add_option("--config", c.config, "Scenario JSON path, or - for stdin")->required();
  cmd->add_option("--output", c.output, "Output path (default stdout)");
  cmd->add_option("--convention", c.convention, "Supply convention")->check(CLI::IsMember({"exact", "shifted"}));
  cmd->add_option("--model", c.model, "Queue model")->check(CLI::IsMember({"triangular", "linear", "exponential"}));
  if (with_lambda) cmd->add_option("--lambda", c.lambda, "Arrival rate (veh/s)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--section", c.section, "Section index, 1-based")->check(CLI::PositiveNumber);
  cmd->add_option("--beta", c.beta, "Exponential model scale")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", c.gamma, "Exponential model shape")->check(CLI::PositiveNumber);
}

ScenarioPtr load(const Common& c) {
  roadq_scenario* raw = nullptr;
  if (c.config == "-") {
    std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
    if (std::cin.bad()) throw Failure{kExitIo, "io: cannot read config from stdin", nullptr};
    check(roadq_scenario_parse(text.c_str(), &raw));
  } else {
    check(roadq_scenario_load(c.config.c_str(), &raw));
  }
  ScenarioPtr s(raw);
  if (!c.convention.empty()) {
    check(roadq_scenario_set_convention(s.get(), c.convention == "exact" ? ROADQ_CONVENTION_EXACT
                                                                         : ROADQ_CONVENTION_SHIFTED));
  }
  if (c.beta || c.gamma) {
    if (!(c.beta && c.gamma)) throw Failure{kExitUsage, "--beta and --gamma must be given together", nullptr};
    check(roadq_scenario_set_exponential(s.get(), *c.beta, *c.gamma));
  }
  if (!c.model.empty()) {
    const roadq_model m = c.model == "linear"        ? ROADQ_MODEL_LINEAR
                          : c.model == "exponential" ? ROADQ_MODEL_EXPONENTIAL
                                                     : ROADQ_MODEL_TRIANGULAR;
    check(roadq_scenario_set_model(s.get(), m));
  }
  if (static_cast<std::size_t>(c.section) > roadq_scenario_section_count(s.get())) {
    throw Failure{kExitUsage, "--section " + std::to_string(c.section) + " is not in the scenario", nullptr};
  }
  return s;
}

double lambda_of(const Common& c, const roadq_scenario* s) {
  if (c.lambda) return *c.lambda;
  double x = 0.0;
  if (roadq_scenario_lambda(s, &x)) return x;
  throw Failure{kExitUsage, "an arrival rate is required (--lambda or \"lambda\" in the config)", nullptr};
}

const char* model_name(roadq_model m) {
  switch (m) {
    case ROADQ_MODEL_LINEAR:
      return "linear";
    case ROADQ_MODEL_EXPONENTIAL:
      return "exponential";
    default:
      return "triangular";
  }
}

const char* convention_name(const roadq_scenario* s) {
  return roadq_scenario_convention(s) == ROADQ_CONVENTION_EXACT ? "exact" : "shifted";
}

void require_tandem(const roadq_scenario* s, const char* what) {
  if (roadq_scenario_section_count(s) != 2) {
    throw Failure{kExitUsage, std::string(what) + " needs a scenario with two sections", nullptr};
  }
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw Failure{kExitIo, "io: cannot open output file '" + path + "'", nullptr};
  out << text;
  if (!out) throw Failure{kExitIo, "io: cannot write output file '" + path + "'", nullptr};
}

json measures_json(const roadq_measures& m) {
  return {{"blocking", m.blocking},
          {"throughput", m.throughput},
          {"throughput_departure", m.throughput_departure},
          {"expected_count", m.expected_count},
          {"travel_time", m.travel_time},
          {"travel_time_is_free_flow", m.travel_time_is_free_flow != 0}};
}

struct Tandem {
  roadq_tandem_result result{};
  DistPtr marginal;
  DistPtr downstream;
};

Tandem solve_tandem(const roadq_scenario* s, double lambda, double tol = 1e-10, int max_iter = 200) {
  Tandem t;
  roadq_dist* m = nullptr;
  roadq_dist* d = nullptr;
  const auto st = roadq_solve_tandem(s, lambda, tol, max_iter, &t.result, &m, &d);
  if (st == ROADQ_E_CONVERGENCE) {
    check(st, {{"lambda", lambda},
               {"theta", t.result.theta},
               {"residual", t.result.residual},
               {"bracket", {t.result.bracket_lo, t.result.bracket_hi}}});
  }
  check(st, {{"lambda", lambda}});
  t.marginal.reset(m);
  t.downstream.reset(d);
  return t;
}

double tandem_tv_exact(const roadq_scenario* s, double lambda, const roadq_dist* marginal) {
  roadq_dist* raw = nullptr;
  check(roadq_tandem_exact_marginal(s, lambda, &raw));
  DistPtr exact(raw);
  return tv(marginal, exact.get());
}

std::pair<DistPtr, roadq_measures> solve_section(const roadq_scenario* s, std::size_t index, roadq_model model,
                                                 double lambda) {
  roadq_dist* raw = nullptr;
  roadq_measures m{};
  check(roadq_solve_section(s, index, model, lambda, &raw, &m), {{"lambda", lambda}});
  return {DistPtr(raw), m};
}

std::string csv_values(const roadq_dist* d) {
  std::ostringstream out;
  out << "value,probability\n";
  const auto v = values_of(d);
  const auto p = probs_of(d);
  for (std::size_t i = 0; i < v.size(); ++i) out << fmt12(v[i]) << ',' << fmt12(p[i]) << '\n';
  return out.str();
}

std::vector<double> sweep_grid(std::optional<double> from, std::optional<double> to, std::optional<int> steps,
                               const roadq_scenario* s, double def_from, double def_to, int def_steps) {
  double f = def_from;
  double t = def_to;
  int n = def_steps;
  double cf = 0.0;
  double ct = 0.0;
  int cn = 0;
  if (roadq_scenario_sweep(s, &cf, &ct, &cn)) {
    f = cf;
    t = ct;
    n = cn;
  }
  if (from) f = *from;
  if (to) t = *to;
  if (steps) n = *steps;
  if (n < 2) throw Failure{kExitUsage, "--steps must be at least 2", nullptr};
  if (!(f >= 0.0) || !(t > f)) throw Failure{kExitUsage, "sweep needs 0 <= lambda-from < lambda-to", nullptr};
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) xs[k] = f + (t - f) * k / (n - 1);
  xs.back() = t;
  return xs;
}

// ---------------------------------------------------------------------------

int run_solve_section(const Common& c) {
  auto s = load(c);
  const double lambda = lambda_of(c, s.get());
  const auto model = roadq_scenario_model(s.get());
  auto [dist, m] = solve_section(s.get(), static_cast<std::size_t>(c.section - 1), model, lambda);
  json out = {{"model", model_name(model)},
              {"convention", convention_name(s.get())},
              {"section", c.section},
              {"lambda", lambda},
              {"distribution", probs_of(dist.get())}};
  out.update(measures_json(m));
  emit(c.output, out.dump(2) + "\n");
  return kExitOk;
}

int run_solve_tandem(const Common& c, double tol, int max_iter, bool scan, int scan_points) {
  auto s = load(c);
  require_tandem(s.get(), "solve-tandem");
  const double lambda = lambda_of(c, s.get());
  const auto t = solve_tandem(s.get(), lambda, tol, max_iter);
  json out = {{"convention", convention_name(s.get())},
              {"lambda", lambda},
              {"theta", t.result.theta},
              {"residual", t.result.residual},
              {"iterations", t.result.iterations},
              {"marginal", probs_of(t.marginal.get())},
              {"downstream", probs_of(t.downstream.get())},
              {"tv_vs_exact_2d", tandem_tv_exact(s.get(), lambda, t.marginal.get())}};
  out.update(measures_json(t.result.measures));
  if (scan) {
    std::size_t count = 0;
    check(roadq_tandem_roots(s.get(), lambda, scan_points, tol, nullptr, 0, &count));
    std::vector<double> roots(count);
    check(roadq_tandem_roots(s.get(), lambda, scan_points, tol, roots.data(), roots.size(), &count));
    out["roots"] = roots;
  }
  emit(c.output, out.dump(2) + "\n");
  return kExitOk;
}

int run_sweep(const Common& c, std::optional<double> from, std::optional<double> to, std::optional<int> steps,
              bool tandem) {
  auto s = load(c);
  const auto grid = sweep_grid(from, to, steps, s.get(), 0.1, 2.0, 20);
  std::ostringstream out;
  if (tandem) {
    require_tandem(s.get(), "sweep --tandem");
    out << "lambda,theta,blocking,expected_count,travel_time,tv_vs_exact_2d\n";
    for (double lambda : grid) {
      const auto t = solve_tandem(s.get(), lambda);
      const auto& m = t.result.measures;
      out << fmt12(lambda) << ',' << fmt12(t.result.theta) << ',' << fmt12(m.blocking) << ','
          << fmt12(m.expected_count) << ',' << fmt12(m.travel_time) << ','
          << fmt12(tandem_tv_exact(s.get(), lambda, t.marginal.get())) << '\n';
    }
  } else {
    const auto model = roadq_scenario_model(s.get());
    out << "lambda,blocking,throughput,expected_count,travel_time\n";
    for (double lambda : grid) {
      const auto [dist, m] = solve_section(s.get(), static_cast<std::size_t>(c.section - 1), model, lambda);
      out << fmt12(lambda) << ',' << fmt12(m.blocking) << ',' << fmt12(m.throughput) << ','
          << fmt12(m.expected_count) << ',' << fmt12(m.travel_time) << '\n';
    }
  }
  emit(c.output, out.str());
  return kExitOk;
}

int run_distributions(const Common& c, const std::string& kind, const std::string& mode, std::string source) {
  auto s = load(c);
  const double lambda = lambda_of(c, s.get());
  const auto model = roadq_scenario_model(s.get());
  if (source.empty()) source = roadq_scenario_section_count(s.get()) == 2 ? "tandem" : "section";
  if (source == "tandem" && model == ROADQ_MODEL_TRIANGULAR) require_tandem(s.get(), "--source tandem");
  roadq_dist* raw = nullptr;
  check(roadq_distribution(s.get(), model, source == "tandem" ? ROADQ_SOURCE_TANDEM : ROADQ_SOURCE_SECTION,
                           kind == "speed" ? ROADQ_KIND_SPEED : ROADQ_KIND_TRAVEL_TIME,
                           mode == "paper-grid" ? ROADQ_MODE_PAPER_GRID : ROADQ_MODE_PUSHFORWARD, lambda, &raw,
                           nullptr),
        {{"lambda", lambda}});
  DistPtr dist(raw);
  emit(c.output, csv_values(dist.get()));
  return kExitOk;
}

int run_simulate(const Common& c, std::uint64_t events, std::uint64_t seed) {
  auto s = load(c);
  const double lambda = lambda_of(c, s.get());
  const auto model = roadq_scenario_model(s.get());
  roadq_dist* raw = nullptr;
  roadq_sim_info info{};
  check(roadq_simulate(s.get(), static_cast<std::size_t>(c.section - 1), model, lambda, events, seed, &raw, &info),
        {{"lambda", lambda}});
  DistPtr dist(raw);
  json out = {{"model", model_name(model)},
              {"convention", convention_name(s.get())},
              {"section", c.section},
              {"lambda", lambda},
              {"seed", info.seed},
              {"events", info.events},
              {"blocked_arrivals", info.blocked_arrivals},
              {"elapsed_model_time", info.elapsed_model_time},
              {"absorbed", info.absorbed != 0},
              {"rng", info.rng_algorithm},
              {"distribution", probs_of(dist.get())}};
  emit(c.output, out.dump(2) + "\n");
  return kExitOk;
}

int run_compare(const Common& c, std::uint64_t events, std::uint64_t seed) {
  auto s = load(c);
  const double lambda = lambda_of(c, s.get());
  const auto model = roadq_scenario_model(s.get());
  const auto index = static_cast<std::size_t>(c.section - 1);

  auto [analytical, m] = solve_section(s.get(), index, model, lambda);
  roadq_dist* raw = nullptr;
  check(roadq_section_exact(s.get(), index, model, lambda, &raw));
  DistPtr exact(raw);

  json out = {{"model", model_name(model)},
              {"convention", convention_name(s.get())},
              {"section", c.section},
              {"lambda", lambda},
              {"analytical", probs_of(analytical.get())},
              {"exact", probs_of(exact.get())},
              {"tv_analytical_exact", tv(analytical.get(), exact.get())}};
  if (lambda > 0.0) {
    roadq_sim_info info{};
    check(roadq_simulate(s.get(), index, model, lambda, events, seed, &raw, &info));
    DistPtr simulated(raw);
    out["simulated"] = probs_of(simulated.get());
    out["seed"] = info.seed;
    out["events"] = info.events;
    out["rng"] = info.rng_algorithm;
    out["absorbed"] = info.absorbed != 0;
    out["tv_analytical_simulated"] = tv(analytical.get(), simulated.get());
    out["tv_exact_simulated"] = tv(exact.get(), simulated.get());
  }
  if (roadq_scenario_section_count(s.get()) == 2 && model == ROADQ_MODEL_TRIANGULAR && c.section == 1) {
    const auto t = solve_tandem(s.get(), lambda);
    check(roadq_tandem_exact_marginal(s.get(), lambda, &raw));
    DistPtr joint(raw);
    out["tandem"] = {{"theta", t.result.theta},
                     {"marginal", probs_of(t.marginal.get())},
                     {"exact_2d_marginal", probs_of(joint.get())},
                     {"tv_vs_exact_2d", tv(t.marginal.get(), joint.get())}};
  }
  emit(c.output, out.dump(2) + "\n");
  return kExitOk;
}

int run_fit(double vf, double a, double va, double b, double vb, const std::string& output) {
  double beta = 0.0;
  double gamma = 0.0;
  check(roadq_fit_exponential(vf, a, va, b, vb, &beta, &gamma));
  emit(output, json{{"beta", beta}, {"gamma", gamma}}.dump(2) + "\n");
  return kExitOk;
}

// Data behind the comparison figures: ours = downstream-supply model,
// jain_smith = linear Jain-Smith queue on section 1.
int run_figure(const Common& c, const std::string& figure, const std::string& kind, const std::string& panel,
               std::optional<double> from, std::optional<double> to, std::optional<int> steps) {
  auto s = load(c);
  std::ostringstream out;
  const bool needs_tandem = figure != "fig8";
  if (needs_tandem) require_tandem(s.get(), figure.c_str());

  if (figure == "fig4") {
    out << "lambda,n,ours,jain_smith\n";
    for (double lambda : {0.5, 1.0, 1.5}) {
      const auto t = solve_tandem(s.get(), lambda);
      const auto [js, m] = solve_section(s.get(), 0, ROADQ_MODEL_LINEAR, lambda);
      const auto ours = probs_of(t.marginal.get());
      const auto theirs = probs_of(js.get());
      for (std::size_t n = 0; n < ours.size(); ++n) {
        out << fmt12(lambda) << ',' << n << ',' << fmt12(ours[n]) << ',' << fmt12(theirs[n]) << '\n';
      }
    }
  } else if (figure == "fig5" || figure == "fig6" || figure == "fig7") {
    const auto grid = sweep_grid(from, to, steps, s.get(), 0.1, 2.0, 40);
    out << "lambda,ours,jain_smith\n";
    for (double lambda : grid) {
      const auto t = solve_tandem(s.get(), lambda);
      const auto [js, m] = solve_section(s.get(), 0, ROADQ_MODEL_LINEAR, lambda);
      const auto& mo = t.result.measures;
      double ours = 0.0;
      double theirs = 0.0;
      if (figure == "fig5") {
        ours = panel == "blocking" ? mo.blocking : mo.expected_count;
        theirs = panel == "blocking" ? m.blocking : m.expected_count;
      } else if (figure == "fig6") {
        ours = mo.travel_time;
        theirs = m.travel_time;
      } else {
        ours = t.result.theta;
        theirs = m.throughput;
      }
      out << fmt12(lambda) << ',' << fmt12(ours) << ',' << fmt12(theirs) << '\n';
    }
  } else {
    const roadq_kind k = kind == "travel-time" ? ROADQ_KIND_TRAVEL_TIME : ROADQ_KIND_SPEED;
    roadq_dist* raw = nullptr;
    if (figure == "fig8") {
      const double lambda = c.lambda.value_or(0.8);
      check(roadq_distribution(s.get(), ROADQ_MODEL_LINEAR, ROADQ_SOURCE_SECTION, k, ROADQ_MODE_PAPER_GRID, lambda,
                               &raw, nullptr));
    } else {
      const double lambda = c.lambda.value_or(figure == "fig9" ? 0.8 : 2.0);
      check(roadq_distribution(s.get(), ROADQ_MODEL_TRIANGULAR, ROADQ_SOURCE_TANDEM, k, ROADQ_MODE_PUSHFORWARD,
                               lambda, &raw, nullptr));
    }
    DistPtr dist(raw);
    out << csv_values(dist.get());
  }
  emit(c.output, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary analysis of finite-capacity road sections"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(roadq_version()));

  Common common;

  auto* solve_section_cmd = app.add_subcommand("solve-section", "Occupancy law and measures of one section");
  add_common(solve_section_cmd, common);

  double tol = 1e-10;
  int max_iter = 200;
  bool scan = false;
  int scan_points = 1000;
  auto* tandem_cmd = app.add_subcommand("solve-tandem", "Throughput fixed point of the downstream-supply model");
  add_common(tandem_cmd, common);
  tandem_cmd->add_option("--tol", tol, "Residual tolerance (veh/s)")->check(CLI::PositiveNumber);
  tandem_cmd->add_option("--max-iter", max_iter, "Bisection iteration limit")->check(CLI::PositiveNumber);
  tandem_cmd->add_flag("--scan-roots", scan, "Report every sign change of the residual on a grid");
  tandem_cmd->add_option("--scan-points", scan_points, "Grid size for --scan-roots")->check(CLI::Range(2, 10000000));

  std::optional<double> from;
  std::optional<double> to;
  std::optional<int> steps;
  bool sweep_tandem = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Measures over a grid of arrival rates (CSV)");
  add_common(sweep_cmd, common, false);
  sweep_cmd->add_option("--lambda-from", from, "First arrival rate")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--lambda-to", to, "Last arrival rate")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--steps", steps, "Number of grid points");
  sweep_cmd->add_flag("--tandem", sweep_tandem, "Sweep the downstream-supply model");

  std::string kind = "speed";
  std::string mode = "pushforward";
  std::string source;
  auto* dist_cmd = app.add_subcommand("distributions", "Speed or travel-time distribution (CSV)");
  add_common(dist_cmd, common);
  dist_cmd->add_option("--kind", kind)->check(CLI::IsMember({"speed", "travel-time"}));
  dist_cmd->add_option("--mode", mode)->check(CLI::IsMember({"pushforward", "paper-grid"}));
  dist_cmd->add_option("--source", source, "Occupancy law for the triangular model")
      ->check(CLI::IsMember({"section", "tandem"}));

  std::uint64_t events = 1000000;
  std::uint64_t seed = 42;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo run of one section");
  add_common(sim_cmd, common);
  sim_cmd->add_option("--events", events, "Number of events")->check(CLI::Range(std::uint64_t{10000}, std::uint64_t{UINT64_MAX}));
  sim_cmd->add_option("--seed", seed, "Random seed");

  auto* cmp_cmd = app.add_subcommand("compare", "Product form vs exact CTMC vs simulation");
  add_common(cmp_cmd, common);
  cmp_cmd->add_option("--events", events, "Number of simulated events")->check(CLI::Range(std::uint64_t{10000}, std::uint64_t{UINT64_MAX}));
  cmp_cmd->add_option("--seed", seed, "Random seed");

  double fit_vf = 0.0;
  double fit_a = 0.0;
  double fit_va = 0.0;
  double fit_b = 0.0;
  double fit_vb = 0.0;
  std::string fit_output;
  auto* fit_cmd = app.add_subcommand("fit-exponential", "Fit beta and gamma through two anchor points");
  fit_cmd->add_option("--v-f", fit_vf, "Free speed (same unit as the anchor speeds)")->required();
  fit_cmd->add_option("--fit-a", fit_a, "First anchor count")->required();
  fit_cmd->add_option("--fit-va", fit_va, "Speed at the first anchor")->required();
  fit_cmd->add_option("--fit-b", fit_b, "Second anchor count")->required();
  fit_cmd->add_option("--fit-vb", fit_vb, "Speed at the second anchor")->required();
  fit_cmd->add_option("--output", fit_output, "Output path (default stdout)");

  std::string figure;
  std::string panel = "count";
  auto* fig_cmd = app.add_subcommand("figure", "Plot data for the model comparison figures (CSV)");
  add_common(fig_cmd, common);
  fig_cmd->add_option("--figure", figure)
      ->required()
      ->check(CLI::IsMember({"fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"}));
  fig_cmd->add_option("--kind", kind)->check(CLI::IsMember({"speed", "travel-time"}));
  fig_cmd->add_option("--panel", panel, "fig5 panel")->check(CLI::IsMember({"count", "blocking"}));
  fig_cmd->add_option("--lambda-from", from)->check(CLI::NonNegativeNumber);
  fig_cmd->add_option("--lambda-to", to)->check(CLI::NonNegativeNumber);
  fig_cmd->add_option("--steps", steps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*solve_section_cmd) return run_solve_section(common);
    if (*tandem_cmd) return run_solve_tandem(common, tol, max_iter, scan, scan_points);
    if (*sweep_cmd) return run_sweep(common, from, to, steps, sweep_tandem);
    if (*dist_cmd) return run_distributions(common, kind, mode, source);
    if (*sim_cmd) return run_simulate(common, events, seed);
    if (*cmp_cmd) return run_compare(common, events, seed);
    if (*fit_cmd) return run_fit(fit_vf, fit_a, fit_va, fit_b, fit_vb, fit_output);
    if (*fig_cmd) return run_figure(common, figure, kind, panel, from, to, steps);
  } catch (const Failure& f) {
    std::cerr << "roadq: " << f.message << '\n';
    if (!f.payload.is_null()) std::cerr << json{{"error", f.message}, {"context", f.payload}}.dump() << '\n';
    return f.code;
  }
  return kExitUsage;
}
