#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadq/congestion.hpp"
#include "roadq/fundamental.hpp"
#include "roadq/tandem.hpp"

namespace roadq {

enum class ModelKind { Triangular, JainSmithLinear, JainSmithExponential };
enum class OutputFormat { Json, Csv };

const char* to_string(ModelKind model) noexcept;
std::optional<ModelKind> parse_model(std::string_view name) noexcept;

/// Section parameters as written in the document. c stays optional so that a
/// re-emitted config reproduces the original.
struct SectionSpec {
  double length;
  double free_speed;
  double wave_speed;
  double jam_density;
  std::optional<int> capacity;

  RoadSection build() const;
};

struct SweepSpec {
  double from;
  double to;
  int steps;

  std::vector<double> grid() const;
};

struct ScenarioConfig {
  std::vector<SectionSpec> sections;
  ServiceConvention convention = ServiceConvention::Shifted;
  ModelKind model = ModelKind::Triangular;
  std::optional<double> lambda;
  std::optional<SweepSpec> sweep;
  std::optional<ExponentialFit> exponential;
  OutputFormat format = OutputFormat::Json;

  RoadSection section(std::size_t index) const;
  bool is_tandem() const noexcept { return sections.size() == 2; }
  TandemConfig tandem() const;
  LinearCongestionModel linear_model(std::size_t index) const;
  CongestionModel congestion_model(std::size_t index) const;
};

/// Accepts either {"sections": [...], ...} or a single section object at the
/// top level. Unknown keys and invalid values raise ConfigError naming the field.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::string& path);
std::string to_json(const ScenarioConfig& config);

/// Section 1 and 2 of the reference two-section example.
ScenarioConfig reference_scenario();

}  // namespace roadq
