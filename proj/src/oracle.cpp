#include "roadq/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "roadq/errors.hpp"

namespace roadq {

Ctmc::Ctmc(std::size_t states) : size_(states), generator_(states * states, 0.0) {
  if (states == 0) throw DomainError("chain needs at least one state");
}

void Ctmc::add_transition(std::size_t from, std::size_t to, double rate) {
  if (from >= size_ || to >= size_ || from == to) throw DomainError("invalid transition");
  if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError("transition rate must be finite and >= 0");
  if (rate == 0.0) return;
  generator_[from * size_ + to] += rate;
  double out = 0.0;
  for (std::size_t j = 0; j < size_; ++j) {
    if (j != from) out += generator_[from * size_ + j];
  }
  generator_[from * size_ + from] = -out;
}

double balance_residual(const Ctmc& chain, std::span<const double> pi) {
  const std::size_t n = chain.size();
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += pi[i] * chain.rate(i, j);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

std::vector<double> exact_stationary(const Ctmc& chain) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const Matrix> q(chain.generator().data(), n, n);

  Eigen::MatrixXd a = q.transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(b);
  x += lu.solve(b - a * x);  // one step of iterative refinement
  if (!x.allFinite()) throw OracleError("stationary solve is singular");

  std::vector<double> pi(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = x(i);
    if (p < 0.0) {
      if (p < -1e-12) throw OracleError("stationary solve produced negative mass " + std::to_string(p));
      p = 0.0;
    }
    pi[static_cast<std::size_t>(i)] = p;
  }
  double total = 0.0;
  for (double p : pi) total += p;
  for (double& p : pi) p /= total;

  const double r = balance_residual(chain, pi);
  if (!(r < 1e-12)) throw OracleError("stationary balance residual " + std::to_string(r) + " exceeds 1e-12");
  return pi;
}

Ctmc build_birth_death(double lambda, std::span<const double> rates) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("arrival rate must be finite and >= 0");
  const std::size_t c = rates.size();
  Ctmc chain(c + 1);
  for (std::size_t n = 0; n < c; ++n) {
    chain.add_transition(n, n + 1, lambda);
    chain.add_transition(n + 1, n, rates[n]);
  }
  return chain;
}

TandemChain build_tandem_2d(const TandemConfig& cfg, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("arrival rate must be finite and >= 0");
  const int c1 = cfg.upstream.capacity();
  const int c2 = cfg.downstream.capacity();
  TandemChain t{Ctmc(static_cast<std::size_t>(c1 + 1) * static_cast<std::size_t>(c2 + 1)), c1, c2};
  for (int n1 = 0; n1 <= c1; ++n1) {
    for (int n2 = 0; n2 <= c2; ++n2) {
      const auto here = t.index(n1, n2);
      if (n1 < c1) t.chain.add_transition(here, t.index(n1 + 1, n2), lambda);
      if (n1 > 0 && n2 < c2) t.chain.add_transition(here, t.index(n1 - 1, n2 + 1), coupled_rate(cfg, n1, n2));
      if (n2 > 0) t.chain.add_transition(here, t.index(n1, n2 - 1), service_rate(cfg.downstream, n2, cfg.convention));
    }
  }
  return t;
}

OccupancyDistribution upstream_marginal(const TandemChain& t, std::span<const double> pi) {
  if (pi.size() != t.chain.size()) throw DomainError("stationary vector does not match chain size");
  std::vector<double> m(static_cast<std::size_t>(t.c1) + 1, 0.0);
  for (int n1 = 0; n1 <= t.c1; ++n1) {
    for (int n2 = 0; n2 <= t.c2; ++n2) m[n1] += pi[t.index(n1, n2)];
  }
  double total = 0.0;
  for (double p : m) total += p;
  for (double& p : m) p /= total;
  return OccupancyDistribution(std::move(m));
}

SimulationResult simulate(double lambda, std::span<const double> rates, std::uint64_t seed,
                          std::uint64_t max_events) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("simulation needs a positive arrival rate");
  if (max_events < 10000) throw DomainError("simulation needs at least 10^4 events");
  const std::size_t c = rates.size();
  for (double q : rates) {
    if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("service rate must be finite and >= 0");
  }

  std::mt19937_64 rng(seed);
  const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  std::vector<double> time_in(c + 1, 0.0);
  std::size_t n = 0;
  double clock = 0.0;
  std::uint64_t events = 0;
  std::uint64_t blocked = 0;
  bool absorbed = false;

  while (events < max_events) {
    const double death = n > 0 ? rates[n - 1] : 0.0;
    if (n == c && death == 0.0) {
      absorbed = true;
      break;
    }
    const double total = lambda + death;
    const double dt = -std::log1p(-uniform()) / total;
    time_in[n] += dt;
    clock += dt;
    ++events;
    if (uniform() * total < lambda) {
      if (n < c) {
        ++n;
      } else {
        ++blocked;
      }
    } else {
      --n;
    }
  }

  if (!(clock > 0.0)) throw InternalError("simulation accumulated no model time");
  for (double& x : time_in) x /= clock;
  double total = 0.0;
  for (double p : time_in) total += p;
  for (double& p : time_in) p /= total;

  SimulationResult r{OccupancyDistribution(std::move(time_in))};
  r.events = events;
  r.seed = seed;
  r.blocked_arrivals = blocked;
  r.elapsed_model_time = clock;
  r.absorbed = absorbed;
  r.rng_algorithm = kSimulationRng;
  return r;
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DomainError("distributions have different lengths");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace roadq
