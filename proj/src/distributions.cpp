#include "roadq/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>

#include "roadq/errors.hpp"

namespace roadq {

namespace {

// Support values are merged after rounding to 12 significant digits.
double round12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

DiscreteDistribution from_atoms(const std::map<double, double>& atoms) {
  std::vector<double> support;
  std::vector<double> probs;
  support.reserve(atoms.size());
  probs.reserve(atoms.size());
  for (const auto& [value, p] : atoms) {
    support.push_back(value);
    probs.push_back(p);
  }
  return DiscreteDistribution(std::move(support), std::move(probs));
}

// log of (lambda L / v_f)^n / prod_{i<=n} i f(i) for n = 0..c
std::vector<double> linear_log_weights(double lambda, const LinearCongestionModel& model, double length) {
  const int c = model.capacity;
  std::vector<double> lw(static_cast<std::size_t>(c) + 1, 0.0);
  const double log_load = std::log(lambda * length / model.free_speed);
  for (int n = 1; n <= c; ++n) {
    lw[n] = lw[n - 1] + log_load - std::log(n * normalized_rate(model, n));
  }
  return lw;
}

std::vector<GridCell> grid_from_indices(const std::vector<std::pair<double, int>>& cells,
                                        const std::vector<double>& lw) {
  // P_0 = (1 + sum over grid cells)^-1, evaluated with a common shift
  double shift = 0.0;
  for (const auto& [value, state] : cells) shift = std::max(shift, lw[state]);
  double total = std::exp(-shift);
  for (const auto& [value, state] : cells) total += std::exp(lw[state] - shift);
  std::vector<GridCell> out;
  out.reserve(cells.size());
  for (const auto& [value, state] : cells) out.push_back({value, state, std::exp(lw[state] - shift) / total});
  return out;
}

GridDistribution normalize_grid(const std::vector<GridCell>& cells, bool truncated) {
  double total = 0.0;
  for (const auto& cell : cells) total += cell.probability;
  if (!(total > 0.0)) throw DomainError("paper grid carries no probability mass");
  std::vector<std::pair<double, double>> atoms;
  for (const auto& cell : cells) atoms.emplace_back(cell.value, cell.probability / total);
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> support;
  std::vector<double> probs;
  for (const auto& [v, p] : atoms) {
    support.push_back(v);
    probs.push_back(p);
  }
  return {DiscreteDistribution(std::move(support), std::move(probs)), truncated};
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("arrival rate must be finite and nonnegative");
}

void check_length(double length) {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("section length must be positive");
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.size() != probs_.size()) throw DomainError("support and probability lengths differ");
  if (support_.empty()) throw DomainError("distribution needs at least one atom");
  double total = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) throw DomainError("probability must be finite and >= 0");
    if (!std::isfinite(support_[i])) throw DomainError("support value must be finite");
    if (i > 0 && !(support_[i] > support_[i - 1])) throw DomainError("support must be strictly increasing");
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("distribution sums to " + std::to_string(total));
}

double mean(const DiscreteDistribution& dist) {
  double m = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) m += dist.support()[i] * dist.probs()[i];
  return m;
}

double mode(const DiscreteDistribution& dist) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < dist.size(); ++i) {
    if (dist.probs()[i] > dist.probs()[best]) best = i;
  }
  return dist.support()[best];
}

std::vector<GridCell> paper_speed_grid(double lambda, const LinearCongestionModel& model, double length) {
  check_lambda(lambda);
  check_length(length);
  const int top = static_cast<int>(std::floor(model.free_speed));
  if (top < 1) throw DomainError("speed grid is empty for free speed below 1");
  if (lambda == 0.0) throw DomainError("paper grid carries no probability mass at zero arrival rate");
  const auto lw = linear_log_weights(lambda, model, length);
  const int c = model.capacity;
  std::vector<std::pair<double, int>> cells;
  for (int v = 1; v <= top; ++v) {
    int n = static_cast<int>(std::floor(1.0 + c * (1.0 - v / model.free_speed)));
    n = std::clamp(n, 1, c);
    cells.emplace_back(static_cast<double>(v), n);
  }
  return grid_from_indices(cells, lw);
}

std::vector<GridCell> paper_travel_time_grid(double lambda, const LinearCongestionModel& model, double length) {
  check_lambda(lambda);
  check_length(length);
  if (lambda == 0.0) throw DomainError("paper grid carries no probability mass at zero arrival rate");
  const auto lw = linear_log_weights(lambda, model, length);
  const int c = model.capacity;
  const int first = std::max(1, static_cast<int>(std::floor(length / model.free_speed)));
  const int last = static_cast<int>(std::floor(length));
  std::vector<std::pair<double, int>> cells;
  for (int t = first; t <= last; ++t) {
    const double x = 1.0 + c * (1.0 - length / (t * model.free_speed));
    const int n = static_cast<int>(std::floor(x));
    if (n < 1) continue;  // faster than free flow
    cells.emplace_back(static_cast<double>(t), std::min(n, c));
  }
  if (cells.empty()) throw DomainError("travel-time grid is empty");
  return grid_from_indices(cells, lw);
}

GridDistribution speed_dist_linear(double lambda, const LinearCongestionModel& model, double length,
                                   GridMode mode) {
  if (mode == GridMode::PaperGrid) {
    const bool truncated = std::floor(model.free_speed) != model.free_speed;
    return normalize_grid(paper_speed_grid(lambda, model, length), truncated);
  }
  const auto occ = solve_jain_smith(lambda, length, model);
  std::map<double, double> atoms;
  atoms[round12(model.free_speed)] += occ[0];  // empty road: free speed
  for (int n = 1; n <= model.capacity; ++n) atoms[round12(linear_speed(model, n))] += occ[n];
  return {from_atoms(atoms), false};
}

GridDistribution travel_time_dist_linear(double lambda, const LinearCongestionModel& model, double length,
                                         GridMode mode) {
  if (mode == GridMode::PaperGrid) {
    const bool truncated = std::floor(length) != length;
    return normalize_grid(paper_travel_time_grid(lambda, model, length), truncated);
  }
  const auto occ = solve_jain_smith(lambda, length, model);
  std::map<double, double> atoms;
  atoms[round12(length / model.free_speed)] += occ[0];
  for (int n = 1; n <= model.capacity; ++n) atoms[round12(length / linear_speed(model, n))] += occ[n];
  return {from_atoms(atoms), false};
}

double triangular_state_speed(const RoadSection& section, int n, ServiceConvention conv) {
  if (n < 0 || n > section.capacity()) throw DomainError("car count outside [0, c]");
  if (n <= section.critical_count()) return section.diagram().free_speed();
  return service_rate(section, n, conv) / (n / section.length());
}

DiscreteDistribution speed_dist_triangular(const OccupancyDistribution& dist, const RoadSection& section,
                                           ServiceConvention conv) {
  if (dist.capacity() != section.capacity()) throw DomainError("distribution does not match section capacity");
  std::map<double, double> atoms;
  for (int n = 0; n <= section.capacity(); ++n) {
    atoms[round12(triangular_state_speed(section, n, conv))] += dist[n];
  }
  return from_atoms(atoms);
}

DiscreteDistribution travel_time_dist_triangular(const OccupancyDistribution& dist, const RoadSection& section,
                                                 ServiceConvention conv) {
  if (dist.capacity() != section.capacity()) throw DomainError("distribution does not match section capacity");
  std::map<double, double> atoms;
  for (int n = 0; n <= section.capacity(); ++n) {
    const double v = triangular_state_speed(section, n, conv);
    if (v == 0.0) {
      if (dist[n] > 0.0) throw DomainError("travel time is infinite at a jammed state with positive probability");
      continue;
    }
    atoms[round12(section.length() / v)] += dist[n];
  }
  return from_atoms(atoms);
}

int occupancy_for_speed(const RoadSection& section, double v) {
  const double w = section.diagram().wave_speed();
  const double x = w * section.capacity() / (v + w);
  return static_cast<int>(std::floor(x * (1.0 + 1e-12)));
}

int occupancy_for_travel_time(const RoadSection& section, double t) {
  const double w = section.diagram().wave_speed();
  const double x = w * section.capacity() * t / (section.length() + w * t);
  return static_cast<int>(std::floor(x * (1.0 + 1e-12)));
}

double piecewise_speed_probability(const OccupancyDistribution& dist, const RoadSection& section, double v) {
  const double vf = section.diagram().free_speed();
  if (v > vf) return 0.0;
  if (v == vf) {
    double p = 0.0;
    for (int n = 0; n <= section.critical_count(); ++n) p += dist[n];
    return p;
  }
  const int n = occupancy_for_speed(section, v);
  return (n >= 0 && n <= dist.capacity()) ? dist[n] : 0.0;
}

double piecewise_travel_time_probability(const OccupancyDistribution& dist, const RoadSection& section,
                                         double t) {
  const double tf = section.free_flow_time();
  if (t < tf) return 0.0;
  if (t == tf) {
    double p = 0.0;
    for (int n = 0; n <= section.critical_count(); ++n) p += dist[n];
    return p;
  }
  const int n = occupancy_for_travel_time(section, t);
  return (n >= 0 && n <= dist.capacity()) ? dist[n] : 0.0;
}

}  // namespace roadq
