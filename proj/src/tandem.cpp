#include "roadq/tandem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roadq/errors.hpp"

namespace roadq {

namespace {

void check_rate(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be finite and nonnegative");
}

// Bisection on a bracket [lo, hi] with g(lo) <= 0 <= g(hi).
template <typename G>
double bisect(G&& g, double lo, double hi, double tol, int max_iter, int& iterations, double& residual) {
  for (iterations = 1; iterations <= max_iter; ++iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (std::abs(gm) <= tol) {
      residual = std::abs(gm);
      return mid;
    }
    (gm > 0.0 ? hi : lo) = mid;
  }
  throw ConvergenceError("fixed point did not reach tolerance " + std::to_string(tol), lo, hi);
}

}  // namespace

double coupled_rate(const TandemConfig& cfg, int n1, int n2) {
  const auto& s1 = cfg.upstream;
  const auto& s2 = cfg.downstream;
  if (n1 < 0 || n1 > s1.capacity()) throw DomainError("n1 = " + std::to_string(n1) + " outside [0, c1]");
  if (n2 < 0 || n2 > s2.capacity()) throw DomainError("n2 = " + std::to_string(n2) + " outside [0, c2]");
  if (n1 == 0) return 0.0;
  const int room = s2.capacity() - n2 + (cfg.convention == ServiceConvention::Shifted ? 1 : 0);
  const double send = std::min(s1.diagram().free_speed() * n1 / s1.length(), s1.diagram().max_flow());
  const double receive = std::min(s2.diagram().max_flow(), s2.diagram().wave_speed() * room / s2.length());
  return std::min(send, receive);
}

OccupancyDistribution downstream_distribution(const TandemConfig& cfg, double theta) {
  check_rate(theta, "downstream arrival rate");
  return solve_triangular(theta, cfg.downstream, cfg.convention);
}

OccupancyDistribution conditional_distribution(const TandemConfig& cfg, double lambda, int n2) {
  check_rate(lambda, "arrival rate");
  const int c1 = cfg.upstream.capacity();
  std::vector<double> q(static_cast<std::size_t>(c1));
  bool any_positive = false;
  for (int i = 1; i <= c1; ++i) {
    q[i - 1] = coupled_rate(cfg, i, n2);
    any_positive = any_positive || q[i - 1] > 0.0;
  }
  if (lambda > 0.0 && !any_positive) return OccupancyDistribution::point_mass(c1, c1);
  return solve_birth_death(lambda, q);
}

TandemEvaluator::TandemEvaluator(const TandemConfig& config, double lambda) : config_(config), lambda_(lambda) {
  check_rate(lambda, "arrival rate");
  const int c2 = config.downstream.capacity();
  conditionals_.reserve(static_cast<std::size_t>(c2) + 1);
  for (int n2 = 0; n2 <= c2; ++n2) conditionals_.push_back(conditional_distribution(config, lambda, n2));
}

double TandemEvaluator::upstream_blocking(double theta) const {
  const auto p2 = downstream_distribution(config_, theta);
  double pc = 0.0;
  for (std::size_t n2 = 0; n2 < conditionals_.size(); ++n2) pc += conditionals_[n2].blocking() * p2[n2];
  return pc;
}

double TandemEvaluator::residual(double theta) const {
  return theta - lambda_ * (1.0 - upstream_blocking(theta));
}

OccupancyDistribution TandemEvaluator::marginal(double theta) const {
  const auto p2 = downstream_distribution(config_, theta);
  const std::size_t c1 = static_cast<std::size_t>(config_.upstream.capacity());
  std::vector<double> mix(c1 + 1, 0.0);
  for (std::size_t n2 = 0; n2 < conditionals_.size(); ++n2) {
    const auto probs = conditionals_[n2].probs();
    for (std::size_t n1 = 0; n1 <= c1; ++n1) mix[n1] += probs[n1] * p2[n2];
  }
  // a convex combination of normalized vectors; drop the rounding drift
  double total = 0.0;
  for (double p : mix) total += p;
  for (double& p : mix) p /= total;
  return OccupancyDistribution(std::move(mix));
}

OccupancyDistribution marginal_distribution(const TandemConfig& cfg, double lambda, double theta) {
  check_rate(theta, "downstream arrival rate");
  return TandemEvaluator(cfg, lambda).marginal(theta);
}

FixedPointResult solve_fixed_point(const TandemConfig& cfg, double lambda, FixedPointOptions opt) {
  check_rate(lambda, "arrival rate");
  if (!(opt.tolerance > 0.0)) throw DomainError("fixed-point tolerance must be positive");
  if (opt.max_iterations < 1) throw DomainError("fixed-point iteration limit must be positive");

  const TandemEvaluator eval(cfg, lambda);
  const auto g = [&eval](double theta) { return eval.residual(theta); };

  auto finish = [&](double theta, double residual, int iterations, double lo, double hi) {
    return FixedPointResult{theta, residual, iterations, lo, hi, eval.marginal(theta),
                            downstream_distribution(cfg, theta)};
  };

  if (lambda == 0.0) return finish(0.0, 0.0, 0, 0.0, 0.0);

  const double g_lo = g(0.0);
  if (std::abs(g_lo) <= opt.tolerance) return finish(0.0, std::abs(g_lo), 0, 0.0, lambda);
  const double g_hi = g(lambda);
  if (std::abs(g_hi) <= opt.tolerance) return finish(lambda, std::abs(g_hi), 0, 0.0, lambda);
  if (g_lo > 0.0 || g_hi < 0.0) {
    throw InternalError("fixed-point residual does not bracket a root on [0, lambda]");
  }

  int iterations = 0;
  double residual = 0.0;
  const double theta = bisect(g, 0.0, lambda, opt.tolerance, opt.max_iterations, iterations, residual);
  return finish(theta, residual, iterations, 0.0, lambda);
}

std::vector<double> scan_fixed_point_roots(const TandemConfig& cfg, double lambda, int grid_points,
                                           double tolerance) {
  check_rate(lambda, "arrival rate");
  if (grid_points < 2) throw DomainError("root scan needs at least 2 grid points");
  if (lambda == 0.0) return {0.0};

  const TandemEvaluator eval(cfg, lambda);
  const auto g = [&eval](double theta) { return eval.residual(theta); };

  std::vector<double> roots;
  auto add = [&roots](double r) {
    if (roots.empty() || std::abs(roots.back() - r) > 1e-9) roots.push_back(r);
  };

  double prev_x = 0.0;
  double prev_g = g(0.0);
  if (std::abs(prev_g) <= tolerance) add(0.0);
  for (int k = 1; k < grid_points; ++k) {
    const double x = lambda * static_cast<double>(k) / (grid_points - 1);
    const double gx = g(x);
    if (std::abs(gx) <= tolerance) {
      add(x);
    } else if (std::abs(prev_g) > tolerance && (prev_g < 0.0) != (gx < 0.0)) {
      int iterations = 0;
      double residual = 0.0;
      const auto oriented = [&](double t) { return prev_g < 0.0 ? g(t) : -g(t); };
      try {
        add(bisect(oriented, prev_x, x, tolerance, 200, iterations, residual));
      } catch (const ConvergenceError& e) {
        add(0.5 * (e.bracket_lo() + e.bracket_hi()));
      }
    }
    prev_x = x;
    prev_g = gx;
  }
  return roots;
}

PerformanceMeasures tandem_measures(const TandemConfig& cfg, const FixedPointResult& result, double lambda) {
  check_rate(lambda, "arrival rate");
  PerformanceMeasures m;
  m.blocking = result.marginal.blocking();
  m.throughput = result.theta;
  m.expected_count = result.marginal.mean();
  if (m.throughput > 0.0) {
    m.expected_travel_time = m.expected_count / m.throughput;
  } else {
    m.expected_travel_time = cfg.upstream.free_flow_time();
    m.travel_time_is_free_flow = true;
  }
  return m;
}

}  // namespace roadq
