#include "roadq/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "roadq/errors.hpp"

namespace roadq {

namespace {

void check_density(const TriangularDiagram& d, double rho) {
  if (!(rho >= 0.0 && rho <= d.jam_density())) {
    throw DomainError("density " + std::to_string(rho) + " outside [0, " +
                      std::to_string(d.jam_density()) + "]");
  }
}

void check_count(const RoadSection& s, int n) {
  if (n < 0 || n > s.capacity()) {
    throw DomainError("car count " + std::to_string(n) + " outside [0, " +
                      std::to_string(s.capacity()) + "]");
  }
}

}  // namespace

TriangularDiagram::TriangularDiagram(double free_speed, double wave_speed, double jam_density)
    : free_speed_(free_speed), wave_speed_(wave_speed), jam_density_(jam_density) {
  if (!(free_speed > 0.0) || !std::isfinite(free_speed)) throw DomainError("free speed must be positive");
  if (!(wave_speed > 0.0) || !std::isfinite(wave_speed)) throw DomainError("wave speed must be positive");
  if (!(jam_density > 0.0) || !std::isfinite(jam_density)) throw DomainError("jam density must be positive");
  max_flow_ = jam_density_ / (1.0 / free_speed_ + 1.0 / wave_speed_);
  critical_density_ = max_flow_ / free_speed_;
}

const char* to_string(ServiceConvention conv) noexcept {
  return conv == ServiceConvention::Exact ? "exact" : "shifted";
}

std::optional<ServiceConvention> parse_convention(const char* name) noexcept {
  if (name == nullptr) return std::nullopt;
  if (std::strcmp(name, "exact") == 0) return ServiceConvention::Exact;
  if (std::strcmp(name, "shifted") == 0) return ServiceConvention::Shifted;
  return std::nullopt;
}

RoadSection::RoadSection(double length, TriangularDiagram diagram, std::optional<int> capacity)
    : length_(length), diagram_(diagram) {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("section length must be positive");
  const double derived = std::round(diagram_.jam_density() * length_);
  if (capacity) {
    if (std::abs(*capacity - derived) > 1.0) {
      throw DomainError("capacity " + std::to_string(*capacity) + " inconsistent with rho_j * L = " +
                        std::to_string(diagram_.jam_density() * length_));
    }
    capacity_ = *capacity;
  } else {
    capacity_ = static_cast<int>(derived);
  }
  if (capacity_ < 2) throw DomainError("section capacity must be at least 2");
  // nearest integer, ties up
  critical_count_ = static_cast<int>(std::floor(diagram_.critical_density() * length_ + 0.5));
  if (critical_count_ < 1 || critical_count_ >= capacity_) {
    throw DomainError("critical count " + std::to_string(critical_count_) + " must lie in [1, c)");
  }
}

double flow(const TriangularDiagram& d, double rho) {
  check_density(d, rho);
  return std::min(d.free_speed() * rho, d.wave_speed() * (d.jam_density() - rho));
}

double demand(const TriangularDiagram& d, double rho) {
  check_density(d, rho);
  return std::min(d.free_speed() * rho, d.max_flow());
}

double supply(const TriangularDiagram& d, double rho) {
  check_density(d, rho);
  return std::min(d.max_flow(), d.wave_speed() * (d.jam_density() - rho));
}

double service_rate(const RoadSection& s, int n, ServiceConvention conv) {
  check_count(s, n);
  if (n == 0) return 0.0;
  const auto& d = s.diagram();
  const int room = s.capacity() - n + (conv == ServiceConvention::Shifted ? 1 : 0);
  return std::min(d.free_speed() * n / s.length(), d.wave_speed() * room / s.length());
}

double normalized_rate(const RoadSection& s, int n, ServiceConvention conv) {
  return service_rate(s, n, conv) / s.diagram().max_flow();
}

}  // namespace roadq
