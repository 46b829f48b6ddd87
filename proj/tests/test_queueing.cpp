#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "satmig/queueing.hpp"

using namespace satmig;

TEST_CASE("service rate") {
  CHECK(service_rate(1e6, 1e6) == 1.0);
  CHECK(service_rate(1e6, 1e6) * 300.0 == 300.0);
  CHECK(service_rate(0.0, 1e6) == 0.0);
  CHECK(service_rate(4e6, 1e6) == 2.0 * service_rate(2e6, 1e6));
  CHECK_THROWS_AS(service_rate(1e6, 0.0), std::domain_error);
}

TEST_CASE("delay success probability closed form") {
  CHECK(delay_success_prob(1.0, 2.0, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(delay_success_prob(2.0, 2.0, 1.0) == 0.0);
  CHECK(delay_success_prob(3.0, 2.0, 1.0) == 0.0);
  CHECK(delay_success_prob(1.0, 0.0, 1.0) == 0.0);
  CHECK(delay_success_prob(6.0, 10.0, 1.0) == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-15));
  CHECK(delay_success_prob(6.0, 10.0, 1.0) == doctest::Approx(0.98168).epsilon(1e-5));
}

TEST_CASE("delay success probability matches a packet-level simulation at rho 0.6") {
  const double sim = oracle::mm1_sojourn_cdf(6.0, 10.0, 1.0, 1'000'000, 21);
  CHECK(std::abs(sim - delay_success_prob(6.0, 10.0, 1.0)) < 0.005);
}

TEST_CASE("delay success probability monotonicity and range") {
  for (double lambda = 0.0; lambda < 9.5; lambda += 0.5) {
    const double p = delay_success_prob(lambda, 10.0, 0.3);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(delay_success_prob(lambda, 10.5, 0.3) > p);
    CHECK(delay_success_prob(lambda, 10.0, 0.31) > p);
    CHECK(delay_success_prob(lambda + 0.25, 10.0, 0.3) < p);
  }
}

TEST_CASE("served bits") {
  CHECK(served_bits(10.0, 300.0, 1e6, 0.5) == 1.5e9);
  CHECK(served_bits(10.0, 300.0, 1e6, 0.0) == 0.0);
  CHECK(served_bits(10.0, 300.0, 1e6, 1.0) == 10.0 * 300.0 * 1e6);
  for (double p = 0.0; p <= 1.0; p += 0.1) CHECK(served_bits(4.0, 300.0, 2e5, p) <= 4.0 * 300.0 * 2e5);
}

TEST_CASE("queue parameters") {
  const auto q = make_queue(3.0, 4.0);
  CHECK(q.utilization == 0.75);
  CHECK(q.stable());
  CHECK_FALSE(make_queue(4.0, 4.0).stable());
  CHECK_FALSE(make_queue(1.0, 0.0).stable());
}
