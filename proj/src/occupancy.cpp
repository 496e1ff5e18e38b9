#include "roadq/occupancy.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "roadq/errors.hpp"

namespace roadq {

namespace {

constexpr double kRescaleAbove = 1e250;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("arrival rate must be finite and nonnegative");
  }
}

}  // namespace

OccupancyDistribution::OccupancyDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw DomainError("occupancy distribution needs at least one state");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("occupancy probability must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("occupancy distribution sums to " + std::to_string(total));
  }
}

OccupancyDistribution OccupancyDistribution::point_mass(int capacity, int state) {
  if (capacity < 0 || state < 0 || state > capacity) throw DomainError("point mass outside [0, c]");
  std::vector<double> p(static_cast<std::size_t>(capacity) + 1, 0.0);
  p[static_cast<std::size_t>(state)] = 1.0;
  return OccupancyDistribution(std::move(p));
}

double OccupancyDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t n = 1; n < probs_.size(); ++n) m += static_cast<double>(n) * probs_[n];
  return m;
}

std::vector<double> triangular_rates(const RoadSection& section, ServiceConvention conv) {
  std::vector<double> q(static_cast<std::size_t>(section.capacity()));
  for (int n = 1; n <= section.capacity(); ++n) q[n - 1] = service_rate(section, n, conv);
  return q;
}

std::vector<double> jain_smith_rates(const CongestionModel& model, double length) {
  if (!(length > 0.0)) throw DomainError("section length must be positive");
  const int c = capacity(model);
  const double vf = free_speed(model);
  std::vector<double> q(static_cast<std::size_t>(c));
  for (int n = 1; n <= c; ++n) q[n - 1] = n * normalized_rate(model, n) * vf / length;
  return q;
}

OccupancyDistribution solve_birth_death(double lambda, std::span<const double> rates) {
  check_lambda(lambda);
  const std::size_t c = rates.size();
  for (std::size_t i = 0; i < c; ++i) {
    if (!(rates[i] >= 0.0) || !std::isfinite(rates[i])) {
      throw DomainError("service rate at state " + std::to_string(i + 1) + " must be finite and >= 0");
    }
  }
  std::vector<double> w(c + 1, 0.0);
  w[0] = 1.0;
  if (lambda == 0.0) return OccupancyDistribution(std::move(w));

  // P_n / P_{n-1} = lambda / q_n; rescale the prefix whenever the running
  // weight grows large so the tail never overflows.
  for (std::size_t n = 1; n <= c; ++n) {
    const double q = rates[n - 1];
    if (q == 0.0) throw SingularModelError(n);
    w[n] = w[n - 1] * (lambda / q);
    if (w[n] > kRescaleAbove) {
      const double s = 1.0 / w[n];
      for (std::size_t k = 0; k <= n; ++k) w[k] *= s;
    }
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return OccupancyDistribution(std::move(w));
}

OccupancyDistribution solve_jain_smith(double lambda, double length, const CongestionModel& model) {
  const auto q = jain_smith_rates(model, length);
  return solve_birth_death(lambda, q);
}

OccupancyDistribution solve_triangular(double lambda, const RoadSection& section, ServiceConvention conv) {
  const auto q = triangular_rates(section, conv);
  return solve_birth_death(lambda, q);
}

double throughput_departure(const OccupancyDistribution& dist, std::span<const double> rates) {
  if (rates.size() != static_cast<std::size_t>(dist.capacity())) {
    throw DomainError("rate vector length does not match distribution capacity");
  }
  double theta = 0.0;
  for (std::size_t n = 1; n < dist.probs().size(); ++n) theta += rates[n - 1] * dist[n];
  return theta;
}

PerformanceMeasures measures(const OccupancyDistribution& dist, double lambda, std::span<const double> rates,
                             double free_flow_time) {
  check_lambda(lambda);
  if (rates.size() != static_cast<std::size_t>(dist.capacity())) {
    throw DomainError("rate vector length does not match distribution capacity");
  }
  PerformanceMeasures m;
  m.blocking = dist.blocking();
  m.throughput = lambda * (1.0 - m.blocking);
  m.expected_count = dist.mean();
  if (m.throughput > 0.0) {
    m.expected_travel_time = m.expected_count / m.throughput;
  } else {
    m.expected_travel_time = free_flow_time;
    m.travel_time_is_free_flow = true;
  }
  return m;
}

}  // namespace roadq
