#include <cmath>
#include <numeric>

#include "doctest.h"
#include "gen.hpp"
#include "reference.hpp"
#include "roadq/errors.hpp"
#include "roadq/oracle.hpp"

using namespace roadq;
namespace rt = roadq::testing;

TEST_SUITE("oracle") {
  TEST_CASE("generator rows sum to zero") {
    Ctmc q(3);
    q.add_transition(0, 1, 2.0);
    q.add_transition(1, 2, 1.0);
    q.add_transition(1, 0, 0.5);
    q.add_transition(2, 0, 3.0);
    for (std::size_t i = 0; i < 3; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < 3; ++j) row += q.rate(i, j);
      CHECK(row == doctest::Approx(0.0));
    }
    CHECK(q.rate(1, 1) == -1.5);
    CHECK_THROWS(q.add_transition(0, 3, 1.0));
  }

  TEST_CASE("four-state joint chain solved by hand") {
    // states A=(0,0), B=(0,1), C=(1,0), D=(1,1) with lambda = a = b = 1
    Ctmc q(4);
    q.add_transition(0, 2, 1.0);  // A -> C arrival
    q.add_transition(1, 3, 1.0);  // B -> D arrival
    q.add_transition(1, 0, 1.0);  // B -> A downstream departure
    q.add_transition(2, 1, 1.0);  // C -> B transfer
    q.add_transition(3, 2, 1.0);  // D -> C downstream departure
    const auto pi = exact_stationary(q);
    CHECK(pi[0] == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(pi[1] == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(pi[2] == doctest::Approx(0.4).epsilon(1e-13));
    CHECK(pi[3] == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(balance_residual(q, pi) < 1e-14);
  }

  TEST_CASE("chain construction checks") {
    CHECK_THROWS_AS(Ctmc(0), DomainError);
    Ctmc q(2);
    CHECK_THROWS_AS(q.add_transition(0, 0, 1.0), DomainError);
    CHECK_THROWS_AS(q.add_transition(0, 1, -1.0), DomainError);
    CHECK_THROWS_AS(q.add_transition(0, 1, INFINITY), DomainError);
  }

  TEST_CASE("birth-death oracle agrees with the product form") {
    const auto rates = triangular_rates(rt::section1(), ServiceConvention::Shifted);
    for (double lambda : {0.1, 0.8, 1.5, 3.0}) {
      const auto pi = exact_stationary(build_birth_death(lambda, rates));
      const auto d = solve_birth_death(lambda, rates);
      CHECK(tv_distance(pi, d.probs()) < 1e-12);
    }
  }

  TEST_CASE("joint chain on the reference pair at lambda = 1") {
    const auto cfg = rt::reference_pair();
    const auto tc = build_tandem_2d(cfg, 1.0);
    CHECK(tc.chain.size() == 361);
    CHECK(tc.index(18, 18) == 360);
    CHECK(tc.chain.rate(tc.index(0, 0), tc.index(1, 0)) == 1.0);
    CHECK(tc.chain.rate(tc.index(18, 0), tc.index(18, 1)) == 0.0);
    CHECK(tc.chain.rate(tc.index(10, 3), tc.index(9, 4)) == doctest::Approx(coupled_rate(cfg, 10, 3)));
    CHECK(tc.chain.rate(tc.index(4, 12), tc.index(4, 11)) ==
          doctest::Approx(service_rate(cfg.downstream, 12, cfg.convention)));
    const auto pi = exact_stationary(tc.chain);
    CHECK(balance_residual(tc.chain, pi) < 1e-12);
    const auto m = upstream_marginal(tc, pi);
    CHECK(m[0] == doctest::Approx(1.29086739e-05).epsilon(1e-7));
    CHECK(m[6] == doctest::Approx(5.69416410e-04).epsilon(1e-7));
    CHECK(m[18] == doctest::Approx(6.97312963e-01).epsilon(1e-7));

    // decomposition versus the joint chain; a diagnostic, not an accuracy claim
    const auto r = solve_fixed_point(cfg, 1.0);
    CHECK(tv_distance(r.marginal.probs(), m.probs()) == doctest::Approx(0.1902798443339318).epsilon(1e-6));
  }

  TEST_CASE("simulation reproduces its seed and is close to the exact law") {
    const auto rates = triangular_rates(rt::section1(), ServiceConvention::Shifted);
    const auto a = simulate(0.8, rates, 42, 1000000);
    const auto b = simulate(0.8, rates, 42, 1000000);
    CHECK(a.events == 1000000);
    CHECK(a.seed == 42);
    CHECK(std::string(a.rng_algorithm) == kSimulationRng);
    CHECK_FALSE(a.absorbed);
    CHECK(a.elapsed_model_time == b.elapsed_model_time);
    CHECK(a.blocked_arrivals == b.blocked_arrivals);
    for (int n = 0; n <= 18; ++n) CHECK(a.empirical[n] == b.empirical[n]);
    const auto exact = solve_birth_death(0.8, rates);
    CHECK(tv_distance(a.empirical.probs(), exact.probs()) <= 0.02);
    const auto c = simulate(0.8, rates, 43, 100000);
    CHECK(c.elapsed_model_time != a.elapsed_model_time);
  }

  TEST_CASE("simulation argument checks and absorption") {
    const std::vector<double> rates{1.0, 0.0};
    CHECK_THROWS_AS(simulate(0.0, rates, 1, 100000), DomainError);
    CHECK_THROWS_AS(simulate(1.0, rates, 1, 10), DomainError);
    const auto r = simulate(1.0, rates, 1, 100000);
    CHECK(r.absorbed);
  }

  TEST_CASE("total variation distance") {
    const std::vector<double> p{0.5, 0.5, 0.0};
    const std::vector<double> q{0.0, 0.5, 0.5};
    CHECK(tv_distance(p, q) == doctest::Approx(0.5));
    CHECK(tv_distance(p, p) == 0.0);
    const std::vector<double> shorter{1.0};
    CHECK_THROWS_AS(tv_distance(p, shorter), DomainError);
  }

  TEST_CASE("property: product form equals the exact CTMC for c <= 50") {
    rt::Gen g(123);
    for (int trial = 0; trial < 60; ++trial) {
      const auto s = g.section(50);
      const double lambda = g.log_uniform(0.01, 3.0);
      const auto rates = triangular_rates(s, ServiceConvention::Shifted);
      const auto pi = exact_stationary(build_birth_death(lambda, rates));
      const auto d = solve_birth_death(lambda, rates);
      double worst = 0.0;
      for (int n = 0; n <= s.capacity(); ++n) worst = std::max(worst, std::abs(pi[n] - d[n]));
      CHECK(worst < 1e-10);
    }
  }
}
