#pragma once

#include <variant>

namespace roadq {

/// v_n = v_f (c - n + 1) / c
struct LinearCongestionModel {
  double free_speed;
  int capacity;

  LinearCongestionModel(double free_speed, int capacity);
};

/// v_n = v_f exp(-((n - 1) / beta)^gamma)
struct ExponentialCongestionModel {
  double free_speed;
  double beta;
  double gamma;
  int capacity;

  ExponentialCongestionModel(double free_speed, double beta, double gamma, int capacity);
};

using CongestionModel = std::variant<LinearCongestionModel, ExponentialCongestionModel>;

/// Two interior points of the speed curve, plus the free speed at n = 1.
/// Units are whatever the caller uses consistently; no conversion happens here.
struct FitAnchors {
  double a;
  double speed_a;
  double b;
  double speed_b;
  double free_speed;
};

struct ExponentialFit {
  double beta;
  double gamma;
};

double linear_speed(const LinearCongestionModel& model, int n);
double exponential_speed(const ExponentialCongestionModel& model, int n);
double speed(const CongestionModel& model, int n);

double normalized_rate(const LinearCongestionModel& model, int n);
double normalized_rate(const ExponentialCongestionModel& model, int n);
double normalized_rate(const CongestionModel& model, int n);

double free_speed(const CongestionModel& model) noexcept;
int capacity(const CongestionModel& model) noexcept;

/// Closed-form fit through (1, v_f), (a, v_a), (b, v_b).
ExponentialFit fit_exponential(const FitAnchors& anchors);

}  // namespace roadq
