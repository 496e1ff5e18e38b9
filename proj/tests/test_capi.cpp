#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "doctest.h"
#include "roadq/roadq.h"

namespace {

const char* kTwoSections = R"({"sections": [{"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18, "c": 18},
                                            {"L": 100, "v_f": 14, "w": 7, "rho_j": 0.18, "c": 18}],
                               "lambda": 0.8})";

struct Scenario {
  roadq_scenario* handle = nullptr;
  explicit Scenario(const char* text) { REQUIRE(roadq_scenario_parse(text, &handle) == ROADQ_OK); }
  ~Scenario() { roadq_scenario_destroy(handle); }
};

double sum(const roadq_dist* d) {
  double s = 0.0;
  for (size_t i = 0; i < roadq_dist_size(d); ++i) s += roadq_dist_probs(d)[i];
  return s;
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("version and status names") {
    CHECK(std::string(roadq_version()) == "1.0.0");
    CHECK(std::string(roadq_status_name(ROADQ_E_SINGULAR)) == "singular_model");
    CHECK(std::string(roadq_status_name(ROADQ_OK)) == "ok");
  }

  TEST_CASE("scenario accessors") {
    Scenario s(kTwoSections);
    CHECK(roadq_scenario_section_count(s.handle) == 2);
    roadq_section_info info{};
    REQUIRE(roadq_scenario_section(s.handle, 0, &info) == ROADQ_OK);
    CHECK(info.capacity == 18);
    CHECK(info.critical_count == 6);
    CHECK(info.max_flow == doctest::Approx(1.68));
    CHECK(roadq_scenario_section(s.handle, 2, &info) == ROADQ_E_INVALID_ARGUMENT);
    double lambda = 0.0;
    CHECK(roadq_scenario_lambda(s.handle, &lambda) == 1);
    CHECK(lambda == 0.8);
    CHECK(roadq_scenario_sweep(s.handle, nullptr, nullptr, nullptr) == 0);
    CHECK(roadq_scenario_convention(s.handle) == ROADQ_CONVENTION_SHIFTED);
    CHECK(roadq_scenario_set_convention(s.handle, ROADQ_CONVENTION_EXACT) == ROADQ_OK);
    CHECK(roadq_scenario_convention(s.handle) == ROADQ_CONVENTION_EXACT);
    CHECK(roadq_scenario_set_model(s.handle, ROADQ_MODEL_EXPONENTIAL) != ROADQ_OK);
    CHECK(roadq_scenario_set_exponential(s.handle, 5.0, 2.0) == ROADQ_OK);
    CHECK(roadq_scenario_set_model(s.handle, ROADQ_MODEL_EXPONENTIAL) == ROADQ_OK);
    CHECK(roadq_scenario_model(s.handle) == ROADQ_MODEL_EXPONENTIAL);

    char* text = nullptr;
    REQUIRE(roadq_scenario_to_json(s.handle, &text) == ROADQ_OK);
    roadq_scenario* again = nullptr;
    CHECK(roadq_scenario_parse(text, &again) == ROADQ_OK);
    roadq_string_free(text);
    roadq_scenario_destroy(again);
  }

  TEST_CASE("errors map to status codes and leave a message") {
    roadq_scenario* s = nullptr;
    CHECK(roadq_scenario_parse("{\"L\": 1}", &s) == ROADQ_E_CONFIG);
    CHECK(s == nullptr);
    CHECK(std::strstr(roadq_last_error(), "v_f") != nullptr);
    CHECK(roadq_scenario_load("/nonexistent.json", &s) == ROADQ_E_IO);
    CHECK(roadq_scenario_parse(nullptr, &s) == ROADQ_E_INVALID_ARGUMENT);

    Scenario sc(kTwoSections);
    REQUIRE(roadq_scenario_set_convention(sc.handle, ROADQ_CONVENTION_EXACT) == ROADQ_OK);
    roadq_measures m{};
    CHECK(roadq_solve_section(sc.handle, 0, ROADQ_MODEL_TRIANGULAR, 0.5, nullptr, &m) == ROADQ_E_SINGULAR);
    CHECK(roadq_solve_section(sc.handle, 0, ROADQ_MODEL_TRIANGULAR, -0.5, nullptr, &m) ==
          ROADQ_E_INVALID_ARGUMENT);
  }

  TEST_CASE("single-section solve") {
    Scenario s(kTwoSections);
    roadq_dist* occ = nullptr;
    roadq_measures m{};
    REQUIRE(roadq_solve_section(s.handle, 0, ROADQ_MODEL_LINEAR, 0.8, &occ, &m) == ROADQ_OK);
    CHECK(roadq_dist_size(occ) == 19);
    CHECK(roadq_dist_probs(occ)[0] == doctest::Approx(0.04051725246376529).epsilon(1e-12));
    CHECK(roadq_dist_values(occ)[18] == 18.0);
    CHECK(sum(occ) == doctest::Approx(1.0));
    CHECK(m.throughput == doctest::Approx(m.throughput_departure).epsilon(1e-9));
    CHECK(m.expected_count == doctest::Approx(3.86235697569245).epsilon(1e-12));
    roadq_dist* exact = nullptr;
    REQUIRE(roadq_section_exact(s.handle, 0, ROADQ_MODEL_LINEAR, 0.8, &exact) == ROADQ_OK);
    double tv = 1.0;
    REQUIRE(roadq_tv_distance(occ, exact, &tv) == ROADQ_OK);
    CHECK(tv < 1e-12);
    roadq_dist_destroy(exact);
    roadq_dist_destroy(occ);

    double q = 0.0;
    REQUIRE(roadq_service_rate(s.handle, 0, 18, &q) == ROADQ_OK);
    CHECK(q == doctest::Approx(0.14));
  }

  TEST_CASE("tandem solve, root scan and joint chain") {
    Scenario s(kTwoSections);
    roadq_tandem_result r{};
    roadq_dist* marginal = nullptr;
    roadq_dist* down = nullptr;
    REQUIRE(roadq_solve_tandem(s.handle, 1.0, 1e-10, 200, &r, &marginal, &down) == ROADQ_OK);
    CHECK(r.theta == doctest::Approx(0.45836934818846903).epsilon(1e-8));
    CHECK(r.measures.throughput == doctest::Approx(r.theta).epsilon(1e-8));
    CHECK(r.measures.throughput_departure == doctest::Approx(r.theta).epsilon(1e-6));
    roadq_dist* exact = nullptr;
    REQUIRE(roadq_tandem_exact_marginal(s.handle, 1.0, &exact) == ROADQ_OK);
    double tv = 0.0;
    REQUIRE(roadq_tv_distance(marginal, exact, &tv) == ROADQ_OK);
    CHECK(tv == doctest::Approx(0.1902798443339318).epsilon(1e-6));
    roadq_dist_destroy(exact);
    roadq_dist_destroy(marginal);
    roadq_dist_destroy(down);

    double roots[8];
    size_t count = 0;
    REQUIRE(roadq_tandem_roots(s.handle, 1.0, 200, 1e-10, roots, 8, &count) == ROADQ_OK);
    REQUIRE(count >= 1);
    CHECK(roots[0] == doctest::Approx(0.45836934818846903).epsilon(1e-7));

    roadq_tandem_result failed{};
    CHECK(roadq_solve_tandem(s.handle, 1.0, 1e-14, 2, &failed, nullptr, nullptr) == ROADQ_E_CONVERGENCE);
    CHECK(failed.bracket_lo < failed.bracket_hi);
    CHECK(failed.theta > failed.bracket_lo);

    Scenario single(R"({"L": 100, "v_f": 28, "w": 14, "rho_j": 0.18})");
    CHECK(roadq_solve_tandem(single.handle, 1.0, 1e-10, 200, &r, nullptr, nullptr) == ROADQ_E_INVALID_ARGUMENT);
  }

  TEST_CASE("distributions through the C surface") {
    Scenario s(kTwoSections);
    roadq_dist* d = nullptr;
    int truncated = -1;
    REQUIRE(roadq_distribution(s.handle, ROADQ_MODEL_LINEAR, ROADQ_SOURCE_SECTION, ROADQ_KIND_SPEED,
                               ROADQ_MODE_PAPER_GRID, 0.8, &d, &truncated) == ROADQ_OK);
    CHECK(truncated == 0);
    CHECK(roadq_dist_size(d) == 28);
    CHECK(roadq_dist_probs(d)[0] == doctest::Approx(0.0040733540117013).epsilon(1e-10));
    CHECK(sum(d) == doctest::Approx(1.0));
    roadq_dist_destroy(d);

    REQUIRE(roadq_distribution(s.handle, ROADQ_MODEL_TRIANGULAR, ROADQ_SOURCE_TANDEM, ROADQ_KIND_TRAVEL_TIME,
                               ROADQ_MODE_PUSHFORWARD, 0.8, &d, nullptr) == ROADQ_OK);
    CHECK(roadq_dist_values(d)[0] == doctest::Approx(100.0 / 28));
    CHECK(roadq_dist_mean(d) >= 100.0 / 28);
    roadq_dist_destroy(d);

    CHECK(roadq_distribution(s.handle, ROADQ_MODEL_TRIANGULAR, ROADQ_SOURCE_SECTION, ROADQ_KIND_SPEED,
                             ROADQ_MODE_PAPER_GRID, 0.8, &d, nullptr) == ROADQ_E_INVALID_ARGUMENT);
  }

  TEST_CASE("simulation and fit") {
    Scenario s(kTwoSections);
    roadq_dist* d = nullptr;
    roadq_sim_info info{};
    REQUIRE(roadq_simulate(s.handle, 0, ROADQ_MODEL_TRIANGULAR, 0.8, 100000, 7, &d, &info) == ROADQ_OK);
    CHECK(info.events == 100000);
    CHECK(info.seed == 7);
    CHECK(std::string(info.rng_algorithm) == "mt19937_64/u53-inverse-cdf");
    CHECK(sum(d) == doctest::Approx(1.0));
    roadq_dist_destroy(d);
    CHECK(roadq_simulate(s.handle, 0, ROADQ_MODEL_TRIANGULAR, 0.8, 100, 7, &d, &info) == ROADQ_E_INVALID_ARGUMENT);

    double beta = 0.0, gamma = 0.0;
    REQUIRE(roadq_fit_exponential(60.0, 20.0, 48.0, 140.0, 20.0, &beta, &gamma) == ROADQ_OK);
    CHECK(beta == doctest::Approx(123.60100691476767).epsilon(1e-10));
    CHECK(gamma == doctest::Approx(0.8009848325532724).epsilon(1e-10));
    CHECK(roadq_fit_exponential(60.0, 0.5, 48.0, 140.0, 20.0, &beta, &gamma) == ROADQ_E_INVALID_ARGUMENT);
  }
}
