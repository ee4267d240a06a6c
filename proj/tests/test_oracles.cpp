#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "restartkit/generators.hpp"
#include "restartkit/objectives.hpp"
#include "restartkit/rng.hpp"
#include "restartkit/serialize.hpp"

using namespace restartkit;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Central finite-difference gradient, the independent oracle for eval_grad.
template <typename F>
Vector fd_gradient(const F& f, const Vector& x, double h = 1e-5) {
  Vector g(x.size());
  Vector e = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    e[i] = x[i] + h;
    const double fp = f.value(e);
    e[i] = x[i] - h;
    const double fm = f.value(e);
    e[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Quadratic diag_quadratic(std::initializer_list<double> lambda) {
  Vector l(static_cast<Eigen::Index>(lambda.size()));
  Eigen::Index i = 0;
  for (double v : lambda) l[i++] = v;
  return Quadratic(Matrix::Identity(l.size(), l.size()), l);
}

}  // namespace

TEST_CASE("soft threshold examples") {
  Vector v(3);
  v << 3.0, -0.5, 0.0;
  const Vector out = soft_threshold(v, 1.0);
  CHECK(out[0] == 2.0);   // sign(3) * max(3 - 1, 0)
  CHECK(out[1] == 0.0);   // magnitude below threshold
  CHECK(out[2] == 0.0);
  CHECK(soft_threshold(v, 0.0) == v);  // identity at alpha = 0
  CHECK_THROWS_AS(soft_threshold(v, -1e-9), std::invalid_argument);
}

TEST_CASE("soft threshold is nonexpansive") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector u = rng.normal_vector(12);
    const Vector v = rng.normal_vector(12);
    const double alpha = std::abs(rng.normal());
    REQUIRE((soft_threshold(u, alpha) - soft_threshold(v, alpha)).norm() <=
            (u - v).norm() + 1e-14);
  }
}

TEST_CASE("project_box clamps, is idempotent and nonexpansive") {
  const Vector a = Vector::Constant(4, -1.0);
  const Vector b = Vector::Constant(4, 1.0);
  Vector z(4);
  z << 1.5, -2.0, 0.25, -0.75;
  const Vector pz = project_box(z, a, b);
  CHECK(pz[0] == 1.0);
  CHECK(pz[1] == -1.0);
  CHECK(pz[2] == 0.25);
  CHECK(project_box(pz, a, b) == pz);

  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector u = 3.0 * rng.normal_vector(4);
    const Vector v = 3.0 * rng.normal_vector(4);
    REQUIRE((project_box(u, a, b) - project_box(v, a, b)).norm() <=
            (u - v).norm() + 1e-14);
  }

  Vector bad_a = a;
  bad_a[2] = 2.0;  // a >= b in one coordinate
  CHECK_THROWS_AS(project_box(z, bad_a, b), std::invalid_argument);
}

TEST_CASE("quadratic value and gradient by hand") {
  const Quadratic q = diag_quadratic({1.0, 4.0});
  CHECK(q.value(vec2(0.0, 0.0)) == 0.0);
  CHECK(q.value(vec2(1.0, 1.0)) == Catch::Approx(2.5).epsilon(1e-15));
  const Vector g = q.gradient(vec2(1.0, 1.0));
  CHECK(g[0] == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(g[1] == Catch::Approx(4.0).epsilon(1e-15));
  CHECK(q.mu() == 1.0);
  CHECK(q.L() == 4.0);
  CHECK_THROWS_AS(q.value(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("quadratic with linear term knows its minimizer") {
  Rng rng(17);
  const Quadratic base = gen_quadratic(12, 50.0, 3);
  const Vector lin = rng.normal_vector(12);
  const Quadratic q(base.basis(), base.eigenvalues(), lin);
  const Vector xs = q.minimizer();
  CHECK(q.gradient(xs).norm() < 1e-12);
  // Optimum beats nearby points.
  for (int i = 0; i < 10; ++i)
    REQUIRE(q.value(xs + 0.01 * rng.normal_vector(12)) >= q.optimal_value());
}

TEST_CASE("logsumexp basics") {
  // m = 1, a = 0, b = 0: f = rho * log exp(0) = 0 for any x.
  const LogSumExp lse(Matrix::Zero(1, 3), Vector::Zero(1), 1.0);
  Rng rng(2);
  CHECK(lse.value(rng.normal_vector(3)) == 0.0);

  const LogSumExp f = gen_logsumexp(8, 40, 0.5, 123);
  const Vector x = rng.normal_vector(8);
  CHECK(std::isfinite(f.value(x)));

  // Gradient is the softmax-weighted combination of the a_i.
  const Vector w = f.weights(x);
  CHECK(w.sum() == Catch::Approx(1.0).epsilon(1e-12));
  CHECK((f.gradient(x) - f.a().transpose() * w).norm() < 1e-12);

  // Midpoint convexity on random pairs.
  for (int trial = 0; trial < 100; ++trial) {
    const Vector u = rng.normal_vector(8);
    const Vector v = rng.normal_vector(8);
    REQUIRE(f.value(0.5 * (u + v)) <= 0.5 * f.value(u) + 0.5 * f.value(v) + 1e-12);
  }

  CHECK_THROWS_AS(gen_logsumexp(8, 40, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_logsumexp(8, 40, -1.0, 1), std::invalid_argument);
}

TEST_CASE("finite differences confirm every smooth gradient") {
  Rng rng(99);
  const Quadratic quad = gen_quadratic(10, 100.0, 21);
  const LogSumExp lse = gen_logsumexp(10, 50, 0.7, 22);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = rng.normal_vector(10);
    {
      const Vector g = quad.gradient(x);
      REQUIRE((fd_gradient(quad, x) - g).norm() <= 1e-6 * std::max(1.0, g.norm()));
    }
    {
      const Vector g = lse.gradient(x);
      REQUIRE((fd_gradient(lse, x) - g).norm() <= 1e-6 * std::max(1.0, g.norm()));
    }
  }
}

TEST_CASE("gen_quadratic spectrum and determinism") {
  const double cond = 1.0 / 4.1e-5;
  const Quadratic q = gen_quadratic(50, cond, 7);
  CHECK(q.L() == 1.0);
  CHECK(q.mu() == Catch::Approx(4.1e-5).epsilon(1e-14));
  CHECK(q.mu() / q.L() == Catch::Approx(4.1e-5).epsilon(1e-14));

  // Reported mu/L equal the eigenvalues of the materialized matrix.
  Eigen::SelfAdjointEigenSolver<Matrix> es(q.dense());
  CHECK(es.eigenvalues().minCoeff() == Catch::Approx(q.mu()).epsilon(1e-9));
  CHECK(es.eigenvalues().maxCoeff() == Catch::Approx(q.L()).epsilon(1e-9));

  // Same seed, identical instance, bit for bit.
  const Quadratic q2 = gen_quadratic(50, cond, 7);
  CHECK(q.basis() == q2.basis());
  CHECK(q.eigenvalues() == q2.eigenvalues());

  // cond = 1 collapses the spectrum.
  const Quadratic iso = gen_quadratic(6, 1.0, 1);
  CHECK(iso.mu() == 1.0);
  CHECK(iso.L() == 1.0);

  CHECK_THROWS_AS(gen_quadratic(1, 10.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(gen_quadratic(4, 0.5, 0), std::invalid_argument);
}

TEST_CASE("gen_lasso shapes and edge cases") {
  const LassoProblem p = gen_lasso(60, 20, 5, 1.0, 0.1, 42);
  CHECK(p.dim() == 60);
  CHECK(p.rows() == 20);

  // s = 0 plants no signal: b is pure noise with the right scale.
  const LassoProblem noise_only = gen_lasso(30, 200, 0, 1.0, 0.1, 9);
  CHECK(noise_only.b().norm() < 0.1 * std::sqrt(200.0) * 3.0);

  CHECK_THROWS_AS(gen_lasso(10, 5, 11, 1.0, 0.1, 0), std::invalid_argument);

  // Determinism.
  const LassoProblem p2 = gen_lasso(60, 20, 5, 1.0, 0.1, 42);
  CHECK(p.a() == p2.a());
  CHECK(p.b() == p2.b());
}

TEST_CASE("gen_boxqp spectrum and bounds") {
  const BoxQP qp = gen_boxqp(40, 1e5, 11);
  CHECK(qp.L() / qp.mu() == Catch::Approx(1e5).epsilon(1e-9));
  CHECK(qp.lower() == Vector::Constant(40, -1.0));
  CHECK(qp.upper() == Vector::Constant(40, 1.0));
  CHECK_THROWS_AS(gen_boxqp(1, 10.0, 0), std::invalid_argument);
}

TEST_CASE("lasso multiply counters") {
  const LassoProblem p = gen_lasso(30, 10, 3, 1.0, 0.1, 4);
  p.reset_counters();
  const Vector x = Vector::Ones(30);
  const Vector ax = p.apply(x);
  (void)p.apply_adjoint(ax - p.b());
  CHECK(p.forward_count() == 1);
  CHECK(p.adjoint_count() == 1);
  CHECK(p.composite_value_from_product(ax, x) ==
        Catch::Approx(0.5 * (ax - p.b()).squaredNorm() + p.rho() * 30.0));
}

TEST_CASE("instances serialize and reload bit-for-bit") {
  Rng rng(31);

  const Quadratic q = gen_quadratic(15, 300.0, 5);
  const Quadratic q2 = quadratic_from_json(quadratic_to_json(q, 5));
  const LogSumExp l = gen_logsumexp(6, 25, 0.3, 5);
  const LogSumExp l2 = logsumexp_from_json(logsumexp_to_json(l, 5));
  const LassoProblem s = gen_lasso(20, 8, 4, 0.7, 0.05, 5);
  const LassoProblem s2 = lasso_from_json(lasso_to_json(s, 5));
  const BoxQP b = gen_boxqp(12, 1e3, 5);
  const BoxQP b2 = boxqp_from_json(boxqp_to_json(b, 5));

  for (int trial = 0; trial < 20; ++trial) {
    const Vector xq = rng.normal_vector(15);
    REQUIRE(q.value(xq) == q2.value(xq));
    const Vector xl = rng.normal_vector(6);
    REQUIRE(l.value(xl) == l2.value(xl));
    const Vector xs = rng.normal_vector(20);
    REQUIRE(s.composite_value(xs) == s2.composite_value(xs));
    const Vector xb = rng.normal_vector(12);
    REQUIRE(b.value(xb) == b2.value(xb));
  }

  // Text round trip as well: dump, parse, evaluate.
  const json dumped = json::parse(quadratic_to_json(q, 5).dump());
  const Quadratic q3 = quadratic_from_json(dumped);
  const Vector xq = rng.normal_vector(15);
  REQUIRE(q.value(xq) == q3.value(xq));
  REQUIRE(problem_type(dumped) == "quadratic");
}

TEST_CASE("serialized instance matches regeneration from seed") {
  const Quadratic original = gen_quadratic(10, 42.0, 77);
  const json doc = quadratic_to_json(original, 77, {{"cond", 42.0}});
  const Quadratic loaded = quadratic_from_json(doc);
  const Quadratic regenerated =
      gen_quadratic(doc["params"]["n"].get<int>(),
                    doc["params"]["cond"].get<double>(),
                    doc["seed"].get<std::uint64_t>());
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = rng.normal_vector(10);
    REQUIRE(loaded.value(x) == regenerated.value(x));
  }
}
