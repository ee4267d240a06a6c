#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "restartkit/restart.hpp"
#include "restartkit/rng.hpp"

using namespace restartkit;

namespace {
Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("function restart test is strict") {
  CHECK_FALSE(should_restart_function(1.0, 2.0));  // decreasing
  CHECK(should_restart_function(2.0, 1.0));        // increasing
  CHECK_FALSE(should_restart_function(1.0, 1.0));  // tie does not restart
  CHECK_THROWS_AS(
      should_restart_function(std::numeric_limits<double>::quiet_NaN(), 1.0),
      std::invalid_argument);
}

TEST_CASE("gradient restart test") {
  const auto g = vec2(1.0, 0.0);
  CHECK_FALSE(should_restart_gradient(g, vec2(-1.0, 0.0), vec2(0.0, 0.0)));
  CHECK(should_restart_gradient(g, vec2(1.0, 0.0), vec2(0.0, 0.0)));
  // Orthogonal step: strict inequality, no restart.
  CHECK_FALSE(should_restart_gradient(g, vec2(0.0, 1.0), vec2(0.0, 0.0)));
  CHECK_THROWS_AS(
      should_restart_gradient(Eigen::VectorXd::Zero(3), vec2(0, 0), vec2(0, 0)),
      std::invalid_argument);
}

TEST_CASE("generalized restart test") {
  const auto y = vec2(1.0, 0.0);
  // y_prev = x_curr: zero generalized gradient.
  CHECK_FALSE(should_restart_generalized(y, y, vec2(0.0, 0.0)));
  // x_curr = x_prev: no movement.
  CHECK_FALSE(should_restart_generalized(y, vec2(0.5, 0.0), vec2(0.5, 0.0)));
  CHECK(should_restart_generalized(vec2(2.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 0.0)));
}

TEST_CASE("generalized equals gradient test on synthetic smooth steps") {
  // x_curr = y - t grad makes the two inner products equal up to t > 0.
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::VectorXd y = rng.normal_vector(6);
    const Eigen::VectorXd g = rng.normal_vector(6);
    const Eigen::VectorXd x_prev = rng.normal_vector(6);
    const double t = 0.01 + std::abs(rng.normal());
    const Eigen::VectorXd x_curr = y - t * g;
    REQUIRE(should_restart_gradient(g, x_curr, x_prev) ==
            should_restart_generalized(y, x_curr, x_prev));
  }
}

TEST_CASE("fixed interval bound") {
  CHECK(fixed_interval_bound(1.0, 1.0) ==
        Catch::Approx(7.688462056318234).epsilon(1e-14));
  // Ratio dependence only.
  CHECK(fixed_interval_bound(2e-3, 2.0) ==
        Catch::Approx(fixed_interval_bound(1e-3, 1.0)).epsilon(1e-14));
  // The reference quadratic used for the restart-comparison experiment.
  CHECK(fixed_interval_bound(1.0 / 8289.286098242526, 1.0) ==
        Catch::Approx(700.0).margin(0.01));
  CHECK_THROWS_AS(fixed_interval_bound(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("policy none never fires, fixed fires on the dot") {
  RestartPolicy none = RestartPolicy::none();
  for (int i = 0; i < 100; ++i) REQUIRE_FALSE(none.commit(true));

  RestartPolicy fixed = RestartPolicy::fixed(7);
  std::vector<int> fired_at;
  for (int step = 1; step <= 50; ++step)
    if (fixed.commit(false)) fired_at.push_back(step);
  CHECK(fired_at == std::vector<int>{7, 14, 21, 28, 35, 42, 49});
  CHECK(fixed.total_restarts == 7);
}

TEST_CASE("adaptive policies respect the suppression window") {
  RestartPolicy p = RestartPolicy::function_adaptive(5);
  // Condition true every step: restarts still at least 5 apart.
  std::vector<int> fired_at;
  for (int step = 1; step <= 30; ++step)
    if (p.commit(true)) fired_at.push_back(step);
  CHECK(fired_at == std::vector<int>{5, 10, 15, 20, 25, 30});

  // min_interval = 1 reproduces the raw rule.
  RestartPolicy raw = RestartPolicy::gradient_adaptive(1);
  int count = 0;
  for (int step = 1; step <= 10; ++step)
    if (raw.commit(true)) ++count;
  CHECK(count == 10);
}

TEST_CASE("no policy fires twice within min_interval") {
  Rng rng(77);
  RestartPolicy p = RestartPolicy::gradient_adaptive(4);
  int last_fire = -100;
  for (int step = 1; step <= 2000; ++step) {
    if (p.commit(rng.uniform01() < 0.4)) {
      REQUIRE(step - last_fire >= 4);
      last_fire = step;
    }
  }
  CHECK(p.total_restarts > 0);
}

TEST_CASE("policy parsing round trips") {
  CHECK(RestartPolicy::parse("none").kind == RestartKind::none);
  CHECK(RestartPolicy::parse("func").kind == RestartKind::function_adaptive);
  CHECK(RestartPolicy::parse("grad").kind == RestartKind::gradient_adaptive);
  const RestartPolicy fixed = RestartPolicy::parse("fixed:123");
  CHECK(fixed.kind == RestartKind::fixed);
  CHECK(fixed.interval == 123);
  CHECK(fixed.name() == "fixed:123");
  CHECK(RestartPolicy::parse(RestartPolicy::function_adaptive().name()).kind ==
        RestartKind::function_adaptive);
  CHECK_THROWS_AS(RestartPolicy::parse("fixed:0"), std::invalid_argument);
  CHECK_THROWS_AS(RestartPolicy::parse("fixed:abc"), std::invalid_argument);
  CHECK_THROWS_AS(RestartPolicy::parse("sometimes"), std::invalid_argument);
}
