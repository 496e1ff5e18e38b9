#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roadq/congestion.hpp"
#include "roadq/fundamental.hpp"

namespace roadq {

/// Stationary probabilities P_0..P_c of the number of cars on a section.
class OccupancyDistribution {
 public:
  /// Validates nonnegativity and normalization (1e-12).
  explicit OccupancyDistribution(std::vector<double> probs);

  static OccupancyDistribution point_mass(int capacity, int state);

  int capacity() const noexcept { return static_cast<int>(probs_.size()) - 1; }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t n) const { return probs_.at(n); }
  double blocking() const noexcept { return probs_.back(); }
  double mean() const noexcept;

 private:
  std::vector<double> probs_;
};

struct PerformanceMeasures {
  double blocking = 0.0;
  double throughput = 0.0;
  double expected_count = 0.0;
  double expected_travel_time = 0.0;
  // set when throughput is zero and the travel time is the free-flow time
  bool travel_time_is_free_flow = false;
};

/// Per-state total service rates q_1..q_c; index 0 of the result is q_1.
std::vector<double> triangular_rates(const RoadSection& section, ServiceConvention conv);
std::vector<double> jain_smith_rates(const CongestionModel& model, double length);

/// Product-form stationary law of a birth-death chain with arrival rate
/// lambda (blocked at c) and death rates q_1..q_c.
OccupancyDistribution solve_birth_death(double lambda, std::span<const double> rates);

/// Jain-Smith state-dependent queue: q_n = n f(n) v_f / L.
OccupancyDistribution solve_jain_smith(double lambda, double length, const CongestionModel& model);

/// Triangular-diagram queue: q_n = service_rate(section, n, conv).
OccupancyDistribution solve_triangular(double lambda, const RoadSection& section, ServiceConvention conv);

/// Departure-side throughput sum_n q_n P_n.
double throughput_departure(const OccupancyDistribution& dist, std::span<const double> rates);

PerformanceMeasures measures(const OccupancyDistribution& dist, double lambda, std::span<const double> rates,
                             double free_flow_time);

}  // namespace roadq
