#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "restartkit/objectives.hpp"
#include "restartkit/rng.hpp"

namespace restartkit {

// Random orthogonal matrix: QR of a standard-normal matrix, with the sign of
// each column fixed so that diag(R) > 0. Deterministic given the draws.
inline Matrix random_orthogonal(Eigen::Index n, Rng& rng) {
  const Matrix g = rng.normal_matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

// Geometric grid from lo to hi inclusive (log-uniform spacing).
inline Vector log_uniform_spectrum(Eigen::Index n, double lo, double hi) {
  Vector lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (n == 1) ? 1.0
                              : static_cast<double>(i) / static_cast<double>(n - 1);
    lambda[i] = lo * std::pow(hi / lo, t);
  }
  lambda[0] = lo;
  lambda[n - 1] = hi;
  return lambda;
}

// Positive definite quadratic with spectrum log-uniformly spaced on
// [1/cond, 1], so mu = 1/cond and L = 1 exactly, in a random orthogonal
// basis. Draw order: basis matrix only.
inline Quadratic gen_quadratic(int n, double cond, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_quadratic: n < 2");
  if (cond < 1.0) throw std::invalid_argument("gen_quadratic: cond < 1");
  Rng rng(seed);
  Matrix v = random_orthogonal(n, rng);
  Vector lambda = log_uniform_spectrum(n, 1.0 / cond, 1.0);
  return Quadratic(std::move(v), std::move(lambda));
}

// Log-sum-exp instance with standard-normal a_i and b_i.
// Draw order: A row by row, then b.
inline LogSumExp gen_logsumexp(int n, int m, double rho, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("gen_logsumexp: n, m >= 1");
  if (rho <= 0.0) throw std::invalid_argument("gen_logsumexp: rho <= 0");
  Rng rng(seed);
  Matrix a = rng.normal_matrix(m, n);
  Vector b = rng.normal_vector(m);
  return LogSumExp(std::move(a), std::move(b), rho);
}

// Lasso instance: A standard normal, planted s-sparse signal y with
// standard-normal nonzeros, b = A y + w with w ~ N(0, noise_sigma^2).
// Draw order: A row by row, support via partial Fisher-Yates, nonzero
// values, then noise.
inline LassoProblem gen_lasso(int n, int m, int s, double rho,
                              double noise_sigma, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("gen_lasso: n, m >= 1");
  if (s < 0 || s > n) throw std::invalid_argument("gen_lasso: need 0 <= s <= n");
  if (rho <= 0.0) throw std::invalid_argument("gen_lasso: rho <= 0");
  if (noise_sigma < 0.0) throw std::invalid_argument("gen_lasso: noise_sigma < 0");
  Rng rng(seed);
  Matrix a = rng.normal_matrix(m, n);

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < s; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  Vector signal = Vector::Zero(n);
  for (int i = 0; i < s; ++i) signal[idx[i]] = rng.normal();

  Vector b = a * signal + noise_sigma * rng.normal_vector(m);
  return LassoProblem(std::move(a), std::move(b), rho);
}

// Box QP on [-1, 1]^n: Q has a log-uniform spectrum with ratio cond in a
// random orthogonal basis, q standard normal. The spectrum sits on
// [s, s*cond] with s = 1/(3 sqrt(ln cond)), which puts the coordinates of
// -Q^{-1} q at unit order so the box binds on a small fraction of them (the
// reference instance reports ~70 active of 500). Draw order: basis, then q.
inline BoxQP gen_boxqp(int n, double cond, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_boxqp: n < 2");
  if (cond < 1.0) throw std::invalid_argument("gen_boxqp: cond < 1");
  Rng rng(seed);
  Matrix v = random_orthogonal(n, rng);
  const double s = cond > 1.0 ? 1.0 / (3.0 * std::sqrt(std::log(cond))) : 1.0;
  Vector lambda = log_uniform_spectrum(n, s, s * cond);
  Vector q = rng.normal_vector(n);
  return BoxQP(std::move(v), std::move(lambda), std::move(q),
               Vector::Constant(n, -1.0), Vector::Constant(n, 1.0));
}

}  // namespace restartkit
