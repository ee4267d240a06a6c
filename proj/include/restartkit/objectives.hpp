#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace restartkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Smooth objectives expose a value/gradient oracle over R^n.
template <typename F>
concept SmoothObjective = requires(const F f, const Vector& x) {
  { f.dim() } -> std::convertible_to<Eigen::Index>;
  { f.value(x) } -> std::convertible_to<double>;
  { f.gradient(x) } -> std::convertible_to<Vector>;
};

inline void check_dim(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// T_alpha(v) = sign(v) .* max(|v| - alpha, 0), elementwise.
inline Vector soft_threshold(const Vector& v, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("soft_threshold: alpha < 0");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - alpha;
    out[i] = mag > 0.0 ? (v[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

// Elementwise clamp of z to [a, b]; requires a < b elementwise.
inline Vector project_box(const Vector& z, const Vector& a, const Vector& b) {
  check_dim(a, z.size(), "project_box");
  check_dim(b, z.size(), "project_box");
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (!(a[i] < b[i]))
      throw std::invalid_argument("project_box: lower bound >= upper bound");
  return z.cwiseMax(a).cwiseMin(b);
}

// f(x) = (1/2) x'Ax + c'x with A = V diag(lambda) V'. The eigendecomposition
// is the stored representation: evaluation happens in the eigenbasis, so the
// spectrum reported to callers is exact and f >= 0 holds bitwise when c = 0.
class Quadratic {
 public:
  Quadratic(Matrix basis, Vector lambda, Vector linear = Vector())
      : basis_(std::move(basis)),
        lambda_(std::move(lambda)),
        linear_(std::move(linear)) {
    const Eigen::Index n = lambda_.size();
    if (n < 1 || basis_.rows() != n || basis_.cols() != n)
      throw std::invalid_argument("Quadratic: basis/lambda shape mismatch");
    if (linear_.size() != 0 && linear_.size() != n)
      throw std::invalid_argument("Quadratic: linear term dimension mismatch");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(lambda_[i] > 0.0))
        throw std::invalid_argument("Quadratic: eigenvalues must be positive");
      if (i > 0 && lambda_[i] < lambda_[i - 1])
        throw std::invalid_argument("Quadratic: eigenvalues must be ascending");
    }
    const double ortho_err =
        (basis_.transpose() * basis_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (ortho_err > 1e-10)
      throw std::invalid_argument("Quadratic: basis is not orthogonal");
  }

  Eigen::Index dim() const { return lambda_.size(); }
  double mu() const { return lambda_[0]; }
  double L() const { return lambda_[lambda_.size() - 1]; }
  const Vector& eigenvalues() const { return lambda_; }
  const Matrix& basis() const { return basis_; }
  bool has_linear_term() const { return linear_.size() != 0; }
  const Vector& linear_term() const { return linear_; }

  double value(const Vector& x) const {
    check_dim(x, dim(), "Quadratic::value");
    const Vector w = basis_.transpose() * x;
    double f = 0.5 * w.dot(lambda_.cwiseProduct(w));
    if (has_linear_term()) f += linear_.dot(x);
    return f;
  }

  Vector gradient(const Vector& x) const {
    check_dim(x, dim(), "Quadratic::gradient");
    Vector g = basis_ * lambda_.cwiseProduct(basis_.transpose() * x);
    if (has_linear_term()) g += linear_;
    return g;
  }

  Vector minimizer() const {
    if (!has_linear_term()) return Vector::Zero(dim());
    return -(basis_ * lambda_.cwiseInverse().cwiseProduct(basis_.transpose() * linear_));
  }

  double optimal_value() const {
    if (!has_linear_term()) return 0.0;
    const Vector xs = minimizer();
    return value(xs);
  }

  Matrix dense() const {
    return basis_ * lambda_.asDiagonal() * basis_.transpose();
  }

 private:
  Matrix basis_;
  Vector lambda_;
  Vector linear_;  // empty when absent
};

// f(x) = rho * log sum_i exp((a_i'x - b_i)/rho). Rows of A are the a_i.
// Smooth, convex, grows linearly at infinity (not strongly convex).
class LogSumExp {
 public:
  LogSumExp(Matrix a, Vector b, double rho)
      : a_(std::move(a)), b_(std::move(b)), rho_(rho) {
    if (rho_ <= 0.0) throw std::invalid_argument("LogSumExp: rho <= 0");
    if (a_.rows() != b_.size())
      throw std::invalid_argument("LogSumExp: A/b row mismatch");
    if (a_.rows() < 1) throw std::invalid_argument("LogSumExp: no terms");
  }

  Eigen::Index dim() const { return a_.cols(); }
  Eigen::Index terms() const { return a_.rows(); }
  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  double rho() const { return rho_; }

  double value(const Vector& x) const {
    check_dim(x, dim(), "LogSumExp::value");
    const Vector z = (a_ * x - b_) / rho_;
    const double zmax = z.maxCoeff();
    return rho_ * (zmax + std::log((z.array() - zmax).exp().sum()));
  }

  Vector gradient(const Vector& x) const {
    check_dim(x, dim(), "LogSumExp::gradient");
    const Vector z = (a_ * x - b_) / rho_;
    const double zmax = z.maxCoeff();
    Vector w = (z.array() - zmax).exp();
    w /= w.sum();
    return a_.transpose() * w;
  }

  // Softmax weights at x; they are the convex coefficients of the gradient.
  Vector weights(const Vector& x) const {
    const Vector z = (a_ * x - b_) / rho_;
    const double zmax = z.maxCoeff();
    Vector w = (z.array() - zmax).exp();
    w /= w.sum();
    return w;
  }

  // Upper bound on the gradient Lipschitz constant: lambda_max(A'A)/rho.
  double lipschitz_bound() const {
    const Matrix gram = (a_.rows() <= a_.cols())
                            ? Matrix(a_ * a_.transpose())
                            : Matrix(a_.transpose() * a_);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() / rho_;
  }

 private:
  Matrix a_;
  Vector b_;
  double rho_;
};

// Composite lasso objective (1/2)||Ax - b||^2 + rho ||x||_1. Matrix products
// go through apply()/apply_adjoint() so solvers can cache A*x across
// iterations and tests can audit the per-iteration multiply count. Counters
// are observability only; audit one solver run at a time.
class LassoProblem {
 public:
  LassoProblem(Matrix a, Vector b, double rho)
      : a_(std::move(a)), b_(std::move(b)), rho_(rho) {
    if (rho_ <= 0.0) throw std::invalid_argument("LassoProblem: rho <= 0");
    if (a_.rows() != b_.size())
      throw std::invalid_argument("LassoProblem: A/b row mismatch");
    const Matrix gram = (a_.rows() <= a_.cols())
                            ? Matrix(a_ * a_.transpose())
                            : Matrix(a_.transpose() * a_);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    lipschitz_ = es.eigenvalues().maxCoeff();
  }

  Eigen::Index dim() const { return a_.cols(); }
  Eigen::Index rows() const { return a_.rows(); }
  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  double rho() const { return rho_; }

  // lambda_max(A'A); step sizes t <= 1/lipschitz() are safe.
  double lipschitz() const { return lipschitz_; }

  Vector apply(const Vector& x) const {
    check_dim(x, dim(), "LassoProblem::apply");
    ++forward_count_;
    return a_ * x;
  }

  Vector apply_adjoint(const Vector& r) const {
    check_dim(r, rows(), "LassoProblem::apply_adjoint");
    ++adjoint_count_;
    return a_.transpose() * r;
  }

  double smooth_value_from_product(const Vector& ax) const {
    return 0.5 * (ax - b_).squaredNorm();
  }

  double composite_value_from_product(const Vector& ax, const Vector& x) const {
    return smooth_value_from_product(ax) + rho_ * x.lpNorm<1>();
  }

  double composite_value(const Vector& x) const {
    return composite_value_from_product(apply(x), x);
  }

  std::int64_t forward_count() const { return forward_count_; }
  std::int64_t adjoint_count() const { return adjoint_count_; }
  void reset_counters() const { forward_count_ = adjoint_count_ = 0; }

 private:
  Matrix a_;
  Vector b_;
  double rho_;
  double lipschitz_;
  mutable std::int64_t forward_count_ = 0;
  mutable std::int64_t adjoint_count_ = 0;
};

// Box-constrained QP: minimize (1/2) x'Qx + q'x subject to a <= x <= b.
// Q is held in eigendecomposition form like Quadratic.
class BoxQP {
 public:
  BoxQP(Matrix basis, Vector lambda, Vector linear, Vector lower, Vector upper)
      : quad_(std::move(basis), std::move(lambda), std::move(linear)),
        lower_(std::move(lower)),
        upper_(std::move(upper)) {
    check_dim(lower_, quad_.dim(), "BoxQP");
    check_dim(upper_, quad_.dim(), "BoxQP");
    for (Eigen::Index i = 0; i < quad_.dim(); ++i)
      if (!(lower_[i] < upper_[i]))
        throw std::invalid_argument("BoxQP: requires a < b elementwise");
    if (!quad_.has_linear_term())
      throw std::invalid_argument("BoxQP: linear term required");
  }

  Eigen::Index dim() const { return quad_.dim(); }
  double mu() const { return quad_.mu(); }
  double L() const { return quad_.L(); }
  const Quadratic& quadratic() const { return quad_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  double value(const Vector& x) const { return quad_.value(x); }
  Vector gradient(const Vector& x) const { return quad_.gradient(x); }

  Vector project(const Vector& z) const { return project_box(z, lower_, upper_); }

  bool feasible(const Vector& x, double slack = 0.0) const {
    return (x.array() >= lower_.array() - slack).all() &&
           (x.array() <= upper_.array() + slack).all();
  }

  // Count of coordinates at either bound within tol.
  int active_constraints(const Vector& x, double tol = 1e-8) const {
    int count = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x[i] - lower_[i] <= tol || upper_[i] - x[i] <= tol) ++count;
    return count;
  }

 private:
  Quadratic quad_;
  Vector lower_;
  Vector upper_;
};

}  // namespace restartkit
