#include "roadq/roadq.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "roadq/config.hpp"
#include "roadq/distributions.hpp"
#include "roadq/errors.hpp"
#include "roadq/occupancy.hpp"
#include "roadq/oracle.hpp"
#include "roadq/tandem.hpp"

struct roadq_scenario {
  roadq::ScenarioConfig config;
};

struct roadq_dist {
  std::vector<double> values;
  std::vector<double> probs;
};

namespace {

thread_local std::string last_error;

roadq_status fail(roadq_status status, const std::string& message) {
  last_error = message;
  return status;
}

roadq_status status_for(roadq::ErrorKind kind) {
  using roadq::ErrorKind;
  switch (kind) {
    case ErrorKind::Domain:
      return ROADQ_E_INVALID_ARGUMENT;
    case ErrorKind::Config:
      return ROADQ_E_CONFIG;
    case ErrorKind::SingularModel:
      return ROADQ_E_SINGULAR;
    case ErrorKind::Convergence:
      return ROADQ_E_CONVERGENCE;
    case ErrorKind::Oracle:
      return ROADQ_E_ORACLE;
    case ErrorKind::Io:
      return ROADQ_E_IO;
    case ErrorKind::Internal:
      return ROADQ_E_INTERNAL;
  }
  return ROADQ_E_INTERNAL;
}

template <typename F>
roadq_status guarded(F&& body) {
  try {
    body();
    return ROADQ_OK;
  } catch (const roadq::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ROADQ_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ROADQ_E_INTERNAL, e.what());
  } catch (...) {
    return fail(ROADQ_E_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw roadq::DomainError(std::string(name) + " must not be null");
}

roadq::ServiceConvention to_cpp(roadq_convention c) {
  return c == ROADQ_CONVENTION_EXACT ? roadq::ServiceConvention::Exact : roadq::ServiceConvention::Shifted;
}

roadq::ModelKind to_cpp(roadq_model m) {
  switch (m) {
    case ROADQ_MODEL_TRIANGULAR:
      return roadq::ModelKind::Triangular;
    case ROADQ_MODEL_LINEAR:
      return roadq::ModelKind::JainSmithLinear;
    case ROADQ_MODEL_EXPONENTIAL:
      return roadq::ModelKind::JainSmithExponential;
  }
  throw roadq::DomainError("unknown model");
}

roadq::CongestionModel congestion_for(const roadq::ScenarioConfig& cfg, std::size_t index, roadq::ModelKind model) {
  roadq::ScenarioConfig copy = cfg;
  copy.model = model;
  return copy.congestion_model(index);
}

std::vector<double> rates_for(const roadq::ScenarioConfig& cfg, std::size_t index, roadq::ModelKind model) {
  const auto section = cfg.section(index);
  if (model == roadq::ModelKind::Triangular) return roadq::triangular_rates(section, cfg.convention);
  return roadq::jain_smith_rates(congestion_for(cfg, index, model), section.length());
}

roadq_dist* make_dist(const roadq::OccupancyDistribution& occ) {
  auto* d = new roadq_dist;
  d->probs.assign(occ.probs().begin(), occ.probs().end());
  d->values.resize(d->probs.size());
  for (std::size_t n = 0; n < d->values.size(); ++n) d->values[n] = static_cast<double>(n);
  return d;
}

roadq_dist* make_dist(const roadq::DiscreteDistribution& dist) {
  auto* d = new roadq_dist;
  d->values.assign(dist.support().begin(), dist.support().end());
  d->probs.assign(dist.probs().begin(), dist.probs().end());
  return d;
}

void fill(roadq_measures* out, const roadq::PerformanceMeasures& m, double departure) {
  out->blocking = m.blocking;
  out->throughput = m.throughput;
  out->throughput_departure = departure;
  out->expected_count = m.expected_count;
  out->travel_time = m.expected_travel_time;
  out->travel_time_is_free_flow = m.travel_time_is_free_flow ? 1 : 0;
}

}  // namespace

extern "C" {

const char* roadq_version(void) { return "1.0.0"; }

const char* roadq_last_error(void) { return last_error.c_str(); }

const char* roadq_status_name(roadq_status status) {
  switch (status) {
    case ROADQ_OK:
      return "ok";
    case ROADQ_E_INVALID_ARGUMENT:
      return "invalid_argument";
    case ROADQ_E_CONFIG:
      return "config";
    case ROADQ_E_SINGULAR:
      return "singular_model";
    case ROADQ_E_CONVERGENCE:
      return "convergence";
    case ROADQ_E_ORACLE:
      return "oracle";
    case ROADQ_E_IO:
      return "io";
    case ROADQ_E_INTERNAL:
      return "internal";
  }
  return "unknown";
}

roadq_status roadq_scenario_parse(const char* json_text, roadq_scenario** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = new roadq_scenario{roadq::parse_scenario(json_text)};
  });
}

roadq_status roadq_scenario_load(const char* path, roadq_scenario** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new roadq_scenario{roadq::load_scenario(path)};
  });
}

roadq_status roadq_scenario_reference(roadq_scenario** out) {
  return guarded([&] {
    require(out, "out");
    *out = new roadq_scenario{roadq::reference_scenario()};
  });
}

void roadq_scenario_destroy(roadq_scenario* scenario) { delete scenario; }

roadq_status roadq_scenario_to_json(const roadq_scenario* scenario, char** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    const auto text = roadq::to_json(scenario->config);
    auto* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void roadq_string_free(char* text) { delete[] text; }

size_t roadq_scenario_section_count(const roadq_scenario* scenario) {
  return scenario == nullptr ? 0 : scenario->config.sections.size();
}

roadq_status roadq_scenario_section(const roadq_scenario* scenario, size_t index, roadq_section_info* out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    const auto s = scenario->config.section(index);
    const auto& d = s.diagram();
    *out = roadq_section_info{s.length(),   d.free_speed(),       d.wave_speed(), d.jam_density(),
                              d.max_flow(), d.critical_density(), s.capacity(),   s.critical_count()};
  });
}

roadq_status roadq_scenario_set_convention(roadq_scenario* scenario, roadq_convention convention) {
  return guarded([&] {
    require(scenario, "scenario");
    if (convention != ROADQ_CONVENTION_SHIFTED && convention != ROADQ_CONVENTION_EXACT) {
      throw roadq::DomainError("unknown convention");
    }
    scenario->config.convention = to_cpp(convention);
  });
}

roadq_convention roadq_scenario_convention(const roadq_scenario* scenario) {
  if (scenario == nullptr) return ROADQ_CONVENTION_SHIFTED;
  return scenario->config.convention == roadq::ServiceConvention::Exact ? ROADQ_CONVENTION_EXACT
                                                                         : ROADQ_CONVENTION_SHIFTED;
}

roadq_status roadq_scenario_set_model(roadq_scenario* scenario, roadq_model model) {
  return guarded([&] {
    require(scenario, "scenario");
    const auto kind = to_cpp(model);
    if (kind == roadq::ModelKind::JainSmithExponential && !scenario->config.exponential) {
      throw roadq::DomainError("set beta and gamma before selecting the exponential model");
    }
    scenario->config.model = kind;
  });
}

roadq_model roadq_scenario_model(const roadq_scenario* scenario) {
  if (scenario == nullptr) return ROADQ_MODEL_TRIANGULAR;
  switch (scenario->config.model) {
    case roadq::ModelKind::JainSmithLinear:
      return ROADQ_MODEL_LINEAR;
    case roadq::ModelKind::JainSmithExponential:
      return ROADQ_MODEL_EXPONENTIAL;
    default:
      return ROADQ_MODEL_TRIANGULAR;
  }
}

roadq_status roadq_scenario_set_exponential(roadq_scenario* scenario, double beta, double gamma) {
  return guarded([&] {
    require(scenario, "scenario");
    if (!(beta > 0.0) || !(gamma > 0.0)) throw roadq::DomainError("beta and gamma must be positive");
    scenario->config.exponential = roadq::ExponentialFit{beta, gamma};
  });
}

int roadq_scenario_lambda(const roadq_scenario* scenario, double* lambda) {
  if (scenario == nullptr || !scenario->config.lambda) return 0;
  if (lambda != nullptr) *lambda = *scenario->config.lambda;
  return 1;
}

int roadq_scenario_sweep(const roadq_scenario* scenario, double* from, double* to, int* steps) {
  if (scenario == nullptr || !scenario->config.sweep) return 0;
  const auto& s = *scenario->config.sweep;
  if (from != nullptr) *from = s.from;
  if (to != nullptr) *to = s.to;
  if (steps != nullptr) *steps = s.steps;
  return 1;
}

roadq_status roadq_service_rate(const roadq_scenario* scenario, size_t section, int n, double* out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    *out = roadq::service_rate(scenario->config.section(section), n, scenario->config.convention);
  });
}

roadq_status roadq_solve_section(const roadq_scenario* scenario, size_t section, roadq_model model, double lambda,
                                 roadq_dist** occupancy, roadq_measures* measures) {
  return guarded([&] {
    require(scenario, "scenario");
    const auto& cfg = scenario->config;
    const auto s = cfg.section(section);
    const auto rates = rates_for(cfg, section, to_cpp(model));
    const auto occ = roadq::solve_birth_death(lambda, rates);
    if (measures != nullptr) {
      fill(measures, roadq::measures(occ, lambda, rates, s.free_flow_time()), roadq::throughput_departure(occ, rates));
    }
    if (occupancy != nullptr) *occupancy = make_dist(occ);
  });
}

roadq_status roadq_solve_tandem(const roadq_scenario* scenario, double lambda, double tolerance, int max_iterations,
                                roadq_tandem_result* result, roadq_dist** marginal, roadq_dist** downstream) {
  return guarded([&] {
    require(scenario, "scenario");
    const auto cfg = scenario->config.tandem();
    try {
      const auto fp = roadq::solve_fixed_point(cfg, lambda, {tolerance, max_iterations});
      if (result != nullptr) {
        result->theta = fp.theta;
        result->residual = fp.residual;
        result->bracket_lo = fp.bracket_lo;
        result->bracket_hi = fp.bracket_hi;
        result->iterations = fp.iterations;
        // sum over n2 of P2(n2) sum_n1 q12 P(n1|n2)
        double departure = 0.0;
        for (int n2 = 0; n2 <= cfg.downstream.capacity(); ++n2) {
          const auto cond = roadq::conditional_distribution(cfg, lambda, n2);
          double out = 0.0;
          for (int n1 = 1; n1 <= cfg.upstream.capacity(); ++n1) out += roadq::coupled_rate(cfg, n1, n2) * cond[n1];
          departure += fp.downstream[n2] * out;
        }
        fill(&result->measures, roadq::tandem_measures(cfg, fp, lambda), departure);
      }
      if (marginal != nullptr) *marginal = make_dist(fp.marginal);
      if (downstream != nullptr) *downstream = make_dist(fp.downstream);
    } catch (const roadq::ConvergenceError& e) {
      if (result != nullptr) {
        *result = roadq_tandem_result{};
        result->theta = 0.5 * (e.bracket_lo() + e.bracket_hi());
        result->bracket_lo = e.bracket_lo();
        result->bracket_hi = e.bracket_hi();
        result->iterations = max_iterations;
        result->residual = roadq::TandemEvaluator(cfg, lambda).residual(result->theta);
      }
      throw;
    }
  });
}

roadq_status roadq_tandem_roots(const roadq_scenario* scenario, double lambda, int grid_points, double tolerance,
                                double* roots, size_t capacity, size_t* count) {
  return guarded([&] {
    require(scenario, "scenario");
    require(count, "count");
    if (capacity > 0) require(roots, "roots");
    const auto found = roadq::scan_fixed_point_roots(scenario->config.tandem(), lambda, grid_points, tolerance);
    for (std::size_t i = 0; i < found.size() && i < capacity; ++i) roots[i] = found[i];
    *count = found.size();
  });
}

roadq_status roadq_tandem_exact_marginal(const roadq_scenario* scenario, double lambda, roadq_dist** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    const auto chain = roadq::build_tandem_2d(scenario->config.tandem(), lambda);
    const auto pi = roadq::exact_stationary(chain.chain);
    *out = make_dist(roadq::upstream_marginal(chain, pi));
  });
}

roadq_status roadq_section_exact(const roadq_scenario* scenario, size_t section, roadq_model model, double lambda,
                                 roadq_dist** out) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    const auto rates = rates_for(scenario->config, section, to_cpp(model));
    const auto pi = roadq::exact_stationary(roadq::build_birth_death(lambda, rates));
    *out = make_dist(roadq::OccupancyDistribution(pi));
  });
}

roadq_status roadq_simulate(const roadq_scenario* scenario, size_t section, roadq_model model, double lambda,
                            uint64_t events, uint64_t seed, roadq_dist** out, roadq_sim_info* info) {
  return guarded([&] {
    require(scenario, "scenario");
    const auto rates = rates_for(scenario->config, section, to_cpp(model));
    const auto sim = roadq::simulate(lambda, rates, seed, events);
    if (info != nullptr) {
      *info = roadq_sim_info{sim.events,           sim.seed, sim.blocked_arrivals, sim.elapsed_model_time,
                             sim.absorbed ? 1 : 0, sim.rng_algorithm};
    }
    if (out != nullptr) *out = make_dist(sim.empirical);
  });
}

roadq_status roadq_distribution(const roadq_scenario* scenario, roadq_model model, roadq_source source,
                                roadq_kind kind, roadq_grid_mode mode, double lambda, roadq_dist** out,
                                int* truncated) {
  return guarded([&] {
    require(scenario, "scenario");
    require(out, "out");
    const auto& cfg = scenario->config;
    const bool speed = kind == ROADQ_KIND_SPEED;
    if (model == ROADQ_MODEL_TRIANGULAR) {
      if (mode != ROADQ_MODE_PUSHFORWARD) throw roadq::DomainError("paper grid is defined for the linear model only");
      const auto section = cfg.section(0);
      const auto occ = source == ROADQ_SOURCE_TANDEM
                           ? roadq::solve_fixed_point(cfg.tandem(), lambda).marginal
                           : roadq::solve_triangular(lambda, section, cfg.convention);
      const auto dist = speed ? roadq::speed_dist_triangular(occ, section, cfg.convention)
                              : roadq::travel_time_dist_triangular(occ, section, cfg.convention);
      if (truncated != nullptr) *truncated = 0;
      *out = make_dist(dist);
      return;
    }
    if (model != ROADQ_MODEL_LINEAR) throw roadq::DomainError("speed distributions need the triangular or linear model");
    const auto section = cfg.section(0);
    const auto lin = cfg.linear_model(0);
    const auto grid = mode == ROADQ_MODE_PAPER_GRID ? roadq::GridMode::PaperGrid : roadq::GridMode::Pushforward;
    const auto res = speed ? roadq::speed_dist_linear(lambda, lin, section.length(), grid)
                           : roadq::travel_time_dist_linear(lambda, lin, section.length(), grid);
    if (truncated != nullptr) *truncated = res.truncated ? 1 : 0;
    *out = make_dist(res.distribution);
  });
}

roadq_status roadq_fit_exponential(double free_speed, double a, double speed_a, double b, double speed_b,
                                   double* beta, double* gamma) {
  return guarded([&] {
    require(beta, "beta");
    require(gamma, "gamma");
    const auto fit = roadq::fit_exponential({a, speed_a, b, speed_b, free_speed});
    *beta = fit.beta;
    *gamma = fit.gamma;
  });
}

size_t roadq_dist_size(const roadq_dist* dist) { return dist == nullptr ? 0 : dist->values.size(); }

const double* roadq_dist_values(const roadq_dist* dist) { return dist == nullptr ? nullptr : dist->values.data(); }

const double* roadq_dist_probs(const roadq_dist* dist) { return dist == nullptr ? nullptr : dist->probs.data(); }

double roadq_dist_mean(const roadq_dist* dist) {
  if (dist == nullptr) return 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i < dist->values.size(); ++i) m += dist->values[i] * dist->probs[i];
  return m;
}

roadq_status roadq_tv_distance(const roadq_dist* p, const roadq_dist* q, double* out) {
  return guarded([&] {
    require(p, "p");
    require(q, "q");
    require(out, "out");
    *out = roadq::tv_distance(p->probs, q->probs);
  });
}

void roadq_dist_destroy(roadq_dist* dist) { delete dist; }

}  // extern "C"
