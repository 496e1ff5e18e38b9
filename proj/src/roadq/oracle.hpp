#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "roadq/occupancy.hpp"
#include "roadq/tandem.hpp"

namespace roadq {

/// Dense CTMC generator. Off-diagonal rates are added one transition at a
/// time; the diagonal is kept at minus the row's outflow.
class Ctmc {
 public:
  explicit Ctmc(std::size_t states);

  void add_transition(std::size_t from, std::size_t to, double rate);

  std::size_t size() const noexcept { return size_; }
  double rate(std::size_t from, std::size_t to) const { return generator_[from * size_ + to]; }
  std::span<const double> generator() const noexcept { return generator_; }

 private:
  std::size_t size_;
  std::vector<double> generator_;  // row-major
};

/// Solves pi Q = 0, sum pi = 1 by dense LU with the last balance equation
/// replaced by normalization. Throws OracleError when the result is not a
/// probability vector or the balance residual exceeds 1e-12.
std::vector<double> exact_stationary(const Ctmc& chain);

/// max_j |(pi Q)_j|
double balance_residual(const Ctmc& chain, std::span<const double> pi);

Ctmc build_birth_death(double lambda, std::span<const double> rates);

/// Full joint chain of the two-section system; state (n1, n2) sits at
/// n1 * (c2 + 1) + n2.
struct TandemChain {
  Ctmc chain;
  int c1;
  int c2;

  std::size_t index(int n1, int n2) const noexcept {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(c2 + 1) + static_cast<std::size_t>(n2);
  }
};

TandemChain build_tandem_2d(const TandemConfig& config, double lambda);

OccupancyDistribution upstream_marginal(const TandemChain& chain, std::span<const double> pi);

struct SimulationResult {
  OccupancyDistribution empirical;
  std::uint64_t events = 0;
  std::uint64_t seed = 0;
  std::uint64_t blocked_arrivals = 0;
  double elapsed_model_time = 0.0;
  // stuck in a full state with no departure; empirical covers the time before
  bool absorbed = false;
  const char* rng_algorithm = nullptr;
};

inline constexpr const char* kSimulationRng = "mt19937_64/u53-inverse-cdf";

/// Event-driven run of the birth-death chain from an empty section.
/// Occupancy is estimated from time spent in each state.
SimulationResult simulate(double lambda, std::span<const double> rates, std::uint64_t seed,
                          std::uint64_t max_events);

double tv_distance(std::span<const double> p, std::span<const double> q);

}  // namespace roadq
