#pragma once

#include <span>
#include <vector>

#include "roadq/congestion.hpp"
#include "roadq/fundamental.hpp"
#include "roadq/occupancy.hpp"

namespace roadq {

/// Finite distribution over strictly increasing support values.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<double> support, std::vector<double> probs);

  std::span<const double> support() const noexcept { return support_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return support_.size(); }

 private:
  std::vector<double> support_;
  std::vector<double> probs_;
};

double mean(const DiscreteDistribution& dist);

/// Atom with the largest probability; ties go to the smallest value.
double mode(const DiscreteDistribution& dist);

enum class GridMode {
  Pushforward,  // relabel occupancy atoms, merging equal values
  PaperGrid,    // integer speed / time grid, renormalized over the grid
};

struct GridDistribution {
  DiscreteDistribution distribution;
  // v_f (speed) or L (time) is not an integer; the grid stops at its floor
  bool truncated = false;
};

/// One cell of the integer grid: grid value, occupancy index it maps to, and
/// its probability with P_0 taken from the grid sum itself.
struct GridCell {
  double value;
  int state;
  double probability;
};

std::vector<GridCell> paper_speed_grid(double lambda, const LinearCongestionModel& model, double length);
std::vector<GridCell> paper_travel_time_grid(double lambda, const LinearCongestionModel& model, double length);

GridDistribution speed_dist_linear(double lambda, const LinearCongestionModel& model, double length,
                                   GridMode mode = GridMode::Pushforward);
GridDistribution travel_time_dist_linear(double lambda, const LinearCongestionModel& model, double length,
                                         GridMode mode = GridMode::Pushforward);

/// Per-state speed on a triangular section: v_f up to n_cr, q_n / (n / L) above.
double triangular_state_speed(const RoadSection& section, int n, ServiceConvention conv);

DiscreteDistribution speed_dist_triangular(const OccupancyDistribution& dist, const RoadSection& section,
                                           ServiceConvention conv);
DiscreteDistribution travel_time_dist_triangular(const OccupancyDistribution& dist, const RoadSection& section,
                                                 ServiceConvention conv);

/// The closed piecewise forms: P(v) via N = floor(w c / (v + w)) below v_f,
/// P(t) via N = floor(w c t / (L + w t)) above L / v_f.
int occupancy_for_speed(const RoadSection& section, double speed);
int occupancy_for_travel_time(const RoadSection& section, double time);
double piecewise_speed_probability(const OccupancyDistribution& dist, const RoadSection& section, double speed);
double piecewise_travel_time_probability(const OccupancyDistribution& dist, const RoadSection& section,
                                         double time);

}  // namespace roadq
