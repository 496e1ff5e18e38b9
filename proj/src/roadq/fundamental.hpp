#pragma once

#include <optional>

namespace roadq {

/// Triangular density-flow diagram in SI units (m/s, veh/m, veh/s).
/// q_max and rho_cr are always derived from the three primitive parameters.
class TriangularDiagram {
 public:
  TriangularDiagram(double free_speed, double wave_speed, double jam_density);

  double free_speed() const noexcept { return free_speed_; }
  double wave_speed() const noexcept { return wave_speed_; }
  double jam_density() const noexcept { return jam_density_; }
  double max_flow() const noexcept { return max_flow_; }
  double critical_density() const noexcept { return critical_density_; }

 private:
  double free_speed_;
  double wave_speed_;
  double jam_density_;
  double max_flow_;
  double critical_density_;
};

/// How the supply term of the service rate treats the capacity state.
///   exact:   w (c - n) / L      (zero at n = c)
///   shifted: w (c - n + 1) / L  (positive at n = c)
enum class ServiceConvention { Exact, Shifted };

const char* to_string(ServiceConvention conv) noexcept;
std::optional<ServiceConvention> parse_convention(const char* name) noexcept;

/// A road section of length L holding at most c cars.
class RoadSection {
 public:
  /// c defaults to round(rho_j L). An explicit capacity may differ from that
  /// by at most one vehicle.
  RoadSection(double length, TriangularDiagram diagram, std::optional<int> capacity = std::nullopt);

  double length() const noexcept { return length_; }
  int capacity() const noexcept { return capacity_; }
  int critical_count() const noexcept { return critical_count_; }
  const TriangularDiagram& diagram() const noexcept { return diagram_; }
  double free_flow_time() const noexcept { return length_ / diagram_.free_speed(); }

 private:
  double length_;
  TriangularDiagram diagram_;
  int capacity_;
  int critical_count_;
};

double flow(const TriangularDiagram& diagram, double density);
double demand(const TriangularDiagram& diagram, double density);
double supply(const TriangularDiagram& diagram, double density);

/// Total flow out of a section holding n cars, min(v_f n/L, w (c - n [+1]) / L).
double service_rate(const RoadSection& section, int n, ServiceConvention conv);

/// service_rate / q_max. Bounded by 1 under the exact convention with
/// c = rho_j L; the shifted supply term can push it up to (c + 1) / (rho_j L).
double normalized_rate(const RoadSection& section, int n, ServiceConvention conv);

}  // namespace roadq
