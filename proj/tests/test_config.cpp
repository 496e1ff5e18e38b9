#include <string>

#include "doctest.h"
#include "roadq/config.hpp"
#include "roadq/errors.hpp"

using namespace roadq;

namespace {

std::string field_of(const std::string& text) {
  try {
    (void)parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("two-section document") {
    const auto cfg = parse_scenario(R"({
      "sections": [{"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "c": 18},
                   {"L": 100, "v_f": 14, "w": 7, "rho_j": 0.18}],
      "convention": "shifted", "model": "triangular", "lambda": 0.8,
      "sweep": {"from": 0.1, "to": 2.0, "steps": 40}, "format": "csv"})");
    CHECK(cfg.is_tandem());
    CHECK(cfg.section(1).capacity() == 18);
    CHECK(cfg.convention == ServiceConvention::Shifted);
    CHECK(*cfg.lambda == 0.8);
    CHECK(cfg.sweep->grid().size() == 40);
    CHECK(cfg.sweep->grid().front() == 0.1);
    CHECK(cfg.sweep->grid().back() == 2.0);
    CHECK(cfg.format == OutputFormat::Csv);
  }

  TEST_CASE("single section at the top level with its own convention") {
    const auto cfg = parse_scenario(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "convention": "exact"})");
    CHECK_FALSE(cfg.is_tandem());
    CHECK(cfg.convention == ServiceConvention::Exact);
    CHECK_THROWS_AS(cfg.tandem(), DomainError);
  }

  TEST_CASE("errors name the offending field") {
    CHECK(field_of("not json") == "<document>");
    CHECK(field_of("[1,2]") == "<document>");
    CHECK(field_of(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "colour": 1})") == "colour");
    CHECK(field_of(R"({"v_f": 28, "w": 14, "rho_j": 0.18})") == "L");
    CHECK(field_of(R"({"L": "x", "v_f": 28, "w": 14, "rho_j": 0.18})") == "L");
    CHECK(field_of(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "c": 18.5})") == "c");
    CHECK(field_of(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "c": 25})") == "section");
    CHECK(field_of(R"({"L": 100, "v_f": -1, "w": 14, "rho_j": 0.18})") == "section");
    CHECK(field_of(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "convention": "loose"})") == "convention");
    CHECK(field_of(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "lambda": -1})") == "lambda");
    CHECK(field_of(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "model": "cubic"})") == "model");
    CHECK(field_of(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "model": "exponential"})") == "exponential");
    CHECK(field_of(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "sweep": {"from": 1, "to": 0.5, "steps": 3}})") ==
          "sweep.to");
    CHECK(field_of(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "sweep": {"from": 0, "to": 1, "steps": 1}})") ==
          "sweep.steps");
    CHECK(field_of(R"({"sections": []})") == "sections");
    CHECK(field_of(R"({"sections": [{"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "x": 1}]})") == "sections[0].x");
    CHECK(field_of(R"({"sections": [{"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "convention": "exact"},
                                    {"L": 100, "v_f": 14, "w": 7, "rho_j": 0.18, "convention": "shifted"}]})") ==
          "sections[1].convention");
  }

  TEST_CASE("exponential block") {
    const auto cfg = parse_scenario(
        R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "model": "jain-smith-exponential",
            "exponential": {"beta": 8, "gamma": 1.5}})");
    CHECK(cfg.model == ModelKind::JainSmithExponential);
    const auto m = std::get<ExponentialCongestionModel>(cfg.congestion_model(0));
    CHECK(m.beta == 8.0);
    CHECK(m.capacity == 18);
  }

  TEST_CASE("canonical JSON round-trips") {
    auto cfg = reference_scenario();
    cfg.lambda = 0.5;
    cfg.exponential = ExponentialFit{3.0, 2.0};
    const auto again = parse_scenario(to_json(cfg));
    CHECK(to_json(again) == to_json(cfg));
    CHECK(again.sections.size() == 2);
    CHECK(*again.sections[0].capacity == 18);
  }

  TEST_CASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/roadq.json"), IoError);
  }
}
