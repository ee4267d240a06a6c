#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "restartkit/momentum.hpp"

using namespace restartkit;

TEST_CASE("theta_next closed form matches the defining quadratic") {
  // theta_next(1, 0) is the positive root of th^2 + th - 1.
  CHECK(theta_next(1.0, 0.0) == Catch::Approx(0.6180339887498949).epsilon(1e-14));
  // q = 1 forces theta = 1 (gradient-descent fixed point).
  CHECK(theta_next(1.0, 1.0) == Catch::Approx(1.0).margin(1e-15));
  // q = theta_k^2 is a fixed point of the recurrence.
  for (double th : {0.1, 0.35, 0.8, 1.0})
    CHECK(theta_next(th, th * th) == Catch::Approx(th).epsilon(1e-13));
}

TEST_CASE("theta_next residual stays tiny along whole trajectories") {
  for (double q : {0.0, 1e-6, 1e-3, 0.2, 1.0}) {
    double theta = 1.0;
    for (int k = 0; k < 20000; ++k) {
      const double next = theta_next(theta, q);
      const double resid =
          next * next + (theta * theta - q) * next - theta * theta;
      REQUIRE(std::abs(resid) < 1e-12);
      REQUIRE(next > 0.0);
      REQUIRE(next <= 1.0);
      theta = next;
    }
  }
}

TEST_CASE("theta_next input validation") {
  CHECK_THROWS_AS(theta_next(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(theta_next(1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(theta_next(0.5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(theta_next(0.5, 1.1), std::invalid_argument);
}

TEST_CASE("q=0 theta sequence decreases like 2/(k+2)") {
  double theta = 1.0;
  for (int k = 1; k <= 10000; ++k) {
    const double next = theta_next(theta, 0.0);
    REQUIRE(next < theta);
    REQUIRE(next <= 2.0 / (k + 2));
    theta = next;
  }
}

TEST_CASE("beta_from_theta basics") {
  // theta_k = 1 zeroes the numerator: first step after any (re)start is pure
  // gradient descent.
  CHECK(beta_from_theta(1.0, theta_next(1.0, 0.0)) == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(0.01, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double th = unif(rng);
    const double b = beta_from_theta(th, theta_next(th, 0.0));
    REQUIRE(b >= 0.0);
    REQUIRE(b < 1.0);
  }
}

TEST_CASE("beta_k climbs to beta_star under q = mu/L") {
  const double q = 4.1e-5;
  MomentumState mom(q);
  double beta = 0.0;
  for (int k = 0; k < 100000; ++k) beta = mom.advance();
  const double limit = beta_star(q, 1.0);
  CHECK(beta == Catch::Approx(limit).margin(1e-6));
}

TEST_CASE("beta_k climbs toward 1 under q = 0") {
  MomentumState mom(0.0);
  double beta = 0.0;
  for (int k = 0; k < 2000; ++k) beta = mom.advance();
  CHECK(beta > 0.99);
  CHECK(beta < 1.0);
}

TEST_CASE("q = 1 degenerates to gradient descent exactly") {
  MomentumState mom(1.0);
  for (int k = 0; k < 1000; ++k) {
    CHECK(mom.advance() == 0.0);
    CHECK(mom.theta == 1.0);
  }
}

TEST_CASE("beta_star") {
  CHECK(beta_star(2.0, 2.0) == 0.0);
  // Eq.-style value at the paper's q* = 4.1e-5, frozen from the
  // quadratic-formula oracle.
  CHECK(beta_star(4.1e-5, 1.0) == Catch::Approx(0.9872752298095564).epsilon(1e-12));
  CHECK_THROWS_AS(beta_star(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(beta_star(0.0, 1.0), std::invalid_argument);
  // Scale invariance.
  CHECK(beta_star(3e-3, 1.0) == Catch::Approx(beta_star(3.0, 1000.0)).epsilon(1e-14));
}

TEST_CASE("fista momentum") {
  CHECK(fista_theta_next(1.0) == Catch::Approx(1.618033988749895).epsilon(1e-14));
  CHECK_THROWS_AS(fista_theta_next(0.9), std::invalid_argument);

  FistaMomentum mom;
  CHECK(mom.advance() == 0.0);  // beta_1 = (theta_0 - 1)/theta_1 = 0

  FistaMomentum seq;
  double theta_prev = seq.theta;
  for (int k = 1; k <= 1000; ++k) {
    seq.advance();
    REQUIRE(seq.theta > theta_prev);
    REQUIRE(seq.theta >= (k + 2) / 2.0);
    REQUIRE(seq.beta >= 0.0);
    REQUIRE(seq.beta < 1.0);
    theta_prev = seq.theta;
  }
}

TEST_CASE("momentum reset restores the start state") {
  MomentumState mom(0.0);
  for (int i = 0; i < 50; ++i) mom.advance();
  mom.reset();
  CHECK(mom.theta == 1.0);
  CHECK(mom.advance() == 0.0);
}
