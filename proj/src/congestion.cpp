#include "roadq/congestion.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "roadq/errors.hpp"

namespace roadq {

namespace {

void check_count(int capacity, int n) {
  if (n < 1 || n > capacity) {
    throw DomainError("car count " + std::to_string(n) + " outside [1, " + std::to_string(capacity) + "]");
  }
}

}  // namespace

LinearCongestionModel::LinearCongestionModel(double v_f, int c) : free_speed(v_f), capacity(c) {
  if (!(v_f > 0.0) || !std::isfinite(v_f)) throw DomainError("free speed must be positive");
  if (c < 1) throw DomainError("capacity must be at least 1");
}

ExponentialCongestionModel::ExponentialCongestionModel(double v_f, double b, double g, int c)
    : free_speed(v_f), beta(b), gamma(g), capacity(c) {
  if (!(v_f > 0.0) || !std::isfinite(v_f)) throw DomainError("free speed must be positive");
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("beta must be positive");
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("gamma must be positive");
  if (c < 1) throw DomainError("capacity must be at least 1");
}

double linear_speed(const LinearCongestionModel& m, int n) {
  check_count(m.capacity, n);
  return m.free_speed * (m.capacity - n + 1) / m.capacity;
}

double exponential_speed(const ExponentialCongestionModel& m, int n) {
  check_count(m.capacity, n);
  return m.free_speed * std::exp(-std::pow((n - 1) / m.beta, m.gamma));
}

double speed(const CongestionModel& model, int n) {
  return std::visit(
      [n](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LinearCongestionModel>) {
          return linear_speed(m, n);
        } else {
          return exponential_speed(m, n);
        }
      },
      model);
}

double normalized_rate(const LinearCongestionModel& m, int n) { return linear_speed(m, n) / m.free_speed; }

double normalized_rate(const ExponentialCongestionModel& m, int n) {
  return exponential_speed(m, n) / m.free_speed;
}

double normalized_rate(const CongestionModel& model, int n) {
  return std::visit([n](const auto& m) { return normalized_rate(m, n); }, model);
}

double free_speed(const CongestionModel& model) noexcept {
  return std::visit([](const auto& m) { return m.free_speed; }, model);
}

int capacity(const CongestionModel& model) noexcept {
  return std::visit([](const auto& m) { return m.capacity; }, model);
}

ExponentialFit fit_exponential(const FitAnchors& k) {
  const bool finite = std::isfinite(k.a) && std::isfinite(k.b) && std::isfinite(k.speed_a) &&
                      std::isfinite(k.speed_b) && std::isfinite(k.free_speed);
  if (!finite) throw DomainError("fit anchors must be finite");
  if (!(k.a > 1.0 && k.b > k.a)) throw DomainError("fit anchors need 1 < a < b");
  if (!(k.speed_b > 0.0 && k.speed_a > k.speed_b && k.free_speed > k.speed_a)) {
    throw DomainError("fit anchors need 0 < v_b < v_a < v_f");
  }
  const double la = std::log(k.speed_a / k.free_speed);
  const double lb = std::log(k.speed_b / k.free_speed);
  if (la == 0.0 || lb == 0.0) throw DomainError("fit anchor speed equals free speed");

  ExponentialFit fit{};
  fit.gamma = std::log(la / lb) / std::log((k.a - 1.0) / (k.b - 1.0));
  fit.beta = (k.a - 1.0) / std::pow(std::log(k.free_speed / k.speed_a), 1.0 / fit.gamma);
  if (!(fit.gamma > 0.0) || !std::isfinite(fit.gamma) || !(fit.beta > 0.0) || !std::isfinite(fit.beta)) {
    throw DomainError("fit anchors produce a degenerate curve");
  }
  return fit;
}

}  // namespace roadq
