#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "restartkit/momentum.hpp"
#include "restartkit/objectives.hpp"
#include "restartkit/trace.hpp"

namespace restartkit {

// Per-eigenmode analysis of the constant-momentum accelerated iteration on a
// quadratic with step 1/L. Writing rho = lambda_i/L, each mode obeys
//   w_{k+2} = (1+beta)(1-rho) w_{k+1} - beta (1-rho) w_k,
// with w_1 = w_0 (1 - rho) (a gradient step from w_0), and everything below
// follows from the characteristic polynomial
//   r^2 - (1+beta)(1-rho) r + beta (1-rho).

enum class DampingRegime { over_damped, critically_damped, under_damped };

namespace detail {
inline void check_mode_args(double beta, double lam_ratio) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("dynamics: beta outside [0, 1]");
  if (!(lam_ratio > 0.0 && lam_ratio <= 1.0))
    throw std::invalid_argument("dynamics: lam_ratio outside (0, 1]");
}
}  // namespace detail

// Critical momentum for one mode, (1 - sqrt(rho)) / (1 + sqrt(rho)).
inline double mode_beta_star(double lam_ratio) {
  if (!(lam_ratio > 0.0 && lam_ratio <= 1.0))
    throw std::invalid_argument("mode_beta_star: lam_ratio outside (0, 1]");
  const double r = std::sqrt(lam_ratio);
  return (1.0 - r) / (1.0 + r);
}

// Both roots of the characteristic polynomial; complex when under-damped.
inline std::pair<std::complex<double>, std::complex<double>> char_roots(
    double beta, double lam_ratio) {
  detail::check_mode_args(beta, lam_ratio);
  const double a = (1.0 + beta) * (1.0 - lam_ratio);
  const double b = beta * (1.0 - lam_ratio);
  const double disc = a * a - 4.0 * b;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return {std::complex<double>(0.5 * (a - s), 0.0),
            std::complex<double>(0.5 * (a + s), 0.0)};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {std::complex<double>(0.5 * a, -im), std::complex<double>(0.5 * a, im)};
}

// Regime by comparing beta against the mode's critical value, with a 1e-12
// band treated as critical so that beta = beta*_i lands on the repeated-root
// branch despite rounding in the discriminant.
inline DampingRegime classify_regime(double beta, double lam_ratio) {
  detail::check_mode_args(beta, lam_ratio);
  const double bs = mode_beta_star(lam_ratio);
  if (std::abs(beta - bs) <= 1e-12) return DampingRegime::critically_damped;
  return beta > bs ? DampingRegime::under_damped : DampingRegime::over_damped;
}

inline const char* regime_name(DampingRegime r) {
  switch (r) {
    case DampingRegime::over_damped: return "over_damped";
    case DampingRegime::critically_damped: return "critically_damped";
    case DampingRegime::under_damped: return "under_damped";
  }
  return "over_damped";
}

// Oscillation frequency psi = acos((1-rho)(1+beta) / 2 sqrt(beta(1-rho))) of
// an under-damped mode; approaches sqrt(rho) for beta near 1 and small rho.
inline double mode_frequency(double beta, double lam_ratio) {
  detail::check_mode_args(beta, lam_ratio);
  if (classify_regime(beta, lam_ratio) != DampingRegime::under_damped)
    throw std::domain_error("mode_frequency: mode is not under-damped");
  const double a = (1.0 + beta) * (1.0 - lam_ratio);
  const double m = std::sqrt(beta * (1.0 - lam_ratio));
  return std::acos(a / (2.0 * m));
}

// Direct two-term recurrence for one mode; the oracle the closed forms are
// checked against.
class ModeRecurrence {
 public:
  ModeRecurrence(double w0, double beta, double lam_ratio)
      : a_((1.0 + beta) * (1.0 - lam_ratio)),
        b_(beta * (1.0 - lam_ratio)),
        w_prev_(w0),
        w_curr_(w0 * (1.0 - lam_ratio)) {
    detail::check_mode_args(beta, lam_ratio);
  }

  // w_0 ... w_{k_max} by direct iteration.
  std::vector<double> run(int k_max) const {
    std::vector<double> w;
    w.reserve(k_max + 1);
    double prev = w_prev_;
    double curr = w_curr_;
    w.push_back(prev);
    if (k_max >= 1) w.push_back(curr);
    for (int k = 2; k <= k_max; ++k) {
      const double next = a_ * curr - b_ * prev;
      prev = curr;
      curr = next;
      w.push_back(next);
    }
    return w;
  }

 private:
  double a_, b_, w_prev_, w_curr_;
};

// Closed-form mode value at step k with constants solved exactly from the
// initial conditions w_0 and w_1 = w_0 (1 - rho) (no small-delta
// approximation):
//   distinct real roots   w_k = c1 r1^k + c2 r2^k
//   repeated root         w_k = (c1 + c2 k) r*^k
//   complex roots         w_k = m^k (alpha cos k psi + gamma sin k psi)
inline double closed_form_mode(double w0, double beta, double lam_ratio, int k) {
  detail::check_mode_args(beta, lam_ratio);
  if (k < 0) throw std::invalid_argument("closed_form_mode: k < 0");
  const double w1 = w0 * (1.0 - lam_ratio);
  if (k == 0) return w0;
  if (k == 1) return w1;
  if (lam_ratio == 1.0) return 0.0;  // both coefficients vanish

  switch (classify_regime(beta, lam_ratio)) {
    case DampingRegime::over_damped: {
      const auto [z1, z2] = char_roots(beta, lam_ratio);
      const double r1 = z1.real();
      const double r2 = z2.real();
      const double c2 = (w1 - r1 * w0) / (r2 - r1);
      const double c1 = w0 - c2;
      return c1 * std::pow(r1, k) + c2 * std::pow(r2, k);
    }
    case DampingRegime::critically_damped: {
      const double r = 0.5 * (1.0 + beta) * (1.0 - lam_ratio);
      const double c1 = w0;
      const double c2 = w1 / r - w0;
      return (c1 + c2 * k) * std::pow(r, k);
    }
    case DampingRegime::under_damped: {
      const double m = std::sqrt(beta * (1.0 - lam_ratio));
      const double psi = mode_frequency(beta, lam_ratio);
      const double alpha = w0;
      const double gamma = (w1 - alpha * m * std::cos(psi)) / (m * std::sin(psi));
      return std::pow(m, k) *
             (alpha * std::cos(k * psi) + gamma * std::sin(k * psi));
    }
  }
  return 0.0;
}

// Spectrum of a quadratic with the derived per-mode quantities.
struct SpectralModel {
  Vector lambda;
  double mu = 0.0;
  double L = 0.0;

  explicit SpectralModel(const Quadratic& quad)
      : lambda(quad.eigenvalues()), mu(quad.mu()), L(quad.L()) {}

  explicit SpectralModel(Vector lambda_in)
      : lambda(std::move(lambda_in)) {
    if (lambda.size() < 1)
      throw std::invalid_argument("SpectralModel: empty spectrum");
    mu = lambda[0];
    L = lambda[lambda.size() - 1];
  }

  Eigen::Index modes() const { return lambda.size(); }
  double ratio(Eigen::Index i) const { return lambda[i] / L; }
  double beta_star_mode(Eigen::Index i) const { return mode_beta_star(ratio(i)); }
  DampingRegime regime(Eigen::Index i, double beta) const {
    return classify_regime(beta, ratio(i));
  }
  double psi(Eigen::Index i, double beta) const {
    return mode_frequency(beta, ratio(i));
  }
};

// Coupled x/y iteration with constant beta and step 1/L on a pure quadratic.
// In the eigenbasis this is exactly the per-mode recurrence above.
inline Trace simulate_constant_beta(const Quadratic& quad, double beta,
                                    const Vector& x0, int k_max) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("simulate_constant_beta: beta outside [0, 1]");
  if (quad.has_linear_term())
    throw std::invalid_argument(
        "simulate_constant_beta: analysis assumes a pure quadratic");
  check_dim(x0, quad.dim(), "simulate_constant_beta");
  const double t = 1.0 / quad.L();
  Trace tr;
  Vector x = x0;
  Vector y = x0;
  tr.records.push_back({0, quad.value(x), beta, t, false});
  tr.iterates.push_back(x);
  for (int k = 1; k <= k_max; ++k) {
    Vector x_next = y - t * quad.gradient(y);
    const double fx = quad.value(x_next);
    if (!std::isfinite(fx)) {
      tr.final_x = x;
      throw NumericError("simulate_constant_beta: diverged", std::move(tr));
    }
    y = x_next + beta * (x_next - x);
    x = std::move(x_next);
    tr.records.push_back({k, fx, beta, t, false});
    tr.iterates.push_back(x);
  }
  tr.final_x = x;
  tr.f_star_ref = 0.0;
  return tr;
}

// Predicted steps between adaptive restarts, (3 + pi)/2 sqrt(L/mu): about
// (3/2) sqrt(L/mu) for beta_k to exceed beta*, then (pi/2) sqrt(L/mu) until
// the restart condition shows.
inline double predicted_adaptive_interval(double mu, double L) {
  if (!(mu > 0.0) || !(mu <= L))
    throw std::invalid_argument("predicted_adaptive_interval: need 0 < mu <= L");
  return 0.5 * (3.0 + 3.14159265358979323846) * std::sqrt(L / mu);
}

// Exact iteration count until the q = 0 momentum sequence exceeds
// beta*(mu, L); the (3/2) sqrt(L/mu) estimate is checked against this.
inline int beta_crossing_iterations(double mu, double L) {
  const double target = beta_star(mu, L);
  MomentumState mom(0.0);
  for (int k = 1; k < 100000000; ++k) {
    if (mom.advance() > target) return k;
  }
  throw std::runtime_error("beta_crossing_iterations: no crossing found");
}

// Single-mode approximation of the objective trace,
//   f_k ~ (w_mu0)^2 mu beta^k (1 - mu/L)^k cos^2(k sqrt(mu/L)),
// valid once the smallest eigenvalue dominates. Period structure only; the
// amplitude is not meant to be accurate.
inline double predicted_f_trace(const Quadratic& quad, const Vector& x0,
                                double beta, int k) {
  check_dim(x0, quad.dim(), "predicted_f_trace");
  const double mu = quad.mu();
  const double L = quad.L();
  const double w0 = quad.basis().col(0).dot(x0);
  const double rho = mu / L;
  const double c = std::cos(k * std::sqrt(rho));
  return w0 * w0 * mu * std::pow(beta, k) * std::pow(1.0 - rho, k) * c * c;
}

// Companion approximation for the gradient criterion, proportional to
//   beta^k (1 - mu/L)^k sin(2 k sqrt(mu/L));
// only the sign pattern and period carry meaning.
inline double predicted_gradient_criterion(const Quadratic& quad,
                                           const Vector& x0, double beta,
                                           int k) {
  check_dim(x0, quad.dim(), "predicted_gradient_criterion");
  const double mu = quad.mu();
  const double rho = mu / quad.L();
  const double w0 = quad.basis().col(0).dot(x0);
  return w0 * w0 * mu * std::pow(beta, k) * std::pow(1.0 - rho, k) *
         std::sin(2.0 * k * std::sqrt(rho));
}

}  // namespace restartkit
