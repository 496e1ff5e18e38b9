#pragma once

#include <vector>

#include "roadq/fundamental.hpp"
#include "roadq/occupancy.hpp"

namespace roadq {

/// Section 1 feeding section 2; section 1's outflow is capped by section 2's
/// supply. Both supply terms use the same convention.
struct TandemConfig {
  RoadSection upstream;
  RoadSection downstream;
  ServiceConvention convention = ServiceConvention::Shifted;
};

struct FixedPointResult {
  double theta = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  OccupancyDistribution marginal;    // section 1
  OccupancyDistribution downstream;  // section 2, driven by theta
};

struct FixedPointOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
};

/// min(v_f1 n1/L1, q_max1, q_max2, w2 (c2 - n2 [+1]) / L2)
double coupled_rate(const TandemConfig& config, int n1, int n2);

/// Section 2's triangular occupancy law with arrival rate theta.
OccupancyDistribution downstream_distribution(const TandemConfig& config, double theta);

/// Section 1's occupancy law while section 2 is frozen at n2 cars. A supply of
/// zero for every n1 traps all arrivals, giving a point mass at c1.
OccupancyDistribution conditional_distribution(const TandemConfig& config, double lambda, int n2);

/// Mixture of the conditionals weighted by downstream_distribution(theta).
OccupancyDistribution marginal_distribution(const TandemConfig& config, double lambda, double theta);

/// Throughput fixed point theta = lambda (1 - P1_c1(lambda, theta)) by
/// bisection on [0, lambda]. Throws ConvergenceError with the last bracket.
FixedPointResult solve_fixed_point(const TandemConfig& config, double lambda, FixedPointOptions options = {});

/// All sign changes of theta - lambda (1 - P1_c1) on a uniform grid over
/// [0, lambda], each refined by bisection. Exact zeros on grid nodes count.
std::vector<double> scan_fixed_point_roots(const TandemConfig& config, double lambda, int grid_points = 1000,
                                           double tolerance = 1e-10);

PerformanceMeasures tandem_measures(const TandemConfig& config, const FixedPointResult& result, double lambda);

/// Caches the conditionals for one lambda; the fixed-point residual then
/// costs one downstream solve and a dot product per evaluation.
class TandemEvaluator {
 public:
  TandemEvaluator(const TandemConfig& config, double lambda);

  double lambda() const noexcept { return lambda_; }
  const std::vector<OccupancyDistribution>& conditionals() const noexcept { return conditionals_; }

  /// P^(1)_{c1}(lambda, theta)
  double upstream_blocking(double theta) const;
  /// theta - lambda (1 - P^(1)_{c1}(lambda, theta))
  double residual(double theta) const;
  OccupancyDistribution marginal(double theta) const;

 private:
  TandemConfig config_;
  double lambda_;
  std::vector<OccupancyDistribution> conditionals_;
};

}  // namespace roadq
