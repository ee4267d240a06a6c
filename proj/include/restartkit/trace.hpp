#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace restartkit {

struct TraceRecord {
  int k = 0;
  double f = 0.0;
  double beta = 0.0;
  double step = 0.0;
  bool restarted = false;
};

// Per-iteration record of one solver run. f_star_ref is attached after the
// run (solvers never need the optimum); iterates are stored only when the
// caller asked for them.
struct Trace {
  std::vector<TraceRecord> records;
  Eigen::VectorXd final_x;
  double f_star_ref = std::numeric_limits<double>::quiet_NaN();
  std::vector<Eigen::VectorXd> iterates;

  double initial_f() const { return records.front().f; }
  double final_f() const { return records.back().f; }

  std::vector<int> restart_iterations() const {
    std::vector<int> out;
    for (const auto& r : records)
      if (r.restarted) out.push_back(r.k);
    return out;
  }
};

// Successive differences of restart iteration indices; empty when fewer than
// two restarts fired.
inline std::vector<int> measure_restart_intervals(const Trace& trace) {
  const std::vector<int> at = trace.restart_iterations();
  std::vector<int> out;
  for (std::size_t i = 1; i < at.size(); ++i) out.push_back(at[i] - at[i - 1]);
  return out;
}

// Indices of strict local minima of a series, 3-point window.
inline std::vector<int> local_minima_indices(const std::vector<double>& f) {
  std::vector<int> out;
  for (std::size_t i = 1; i + 1 < f.size(); ++i)
    if (f[i] < f[i - 1] && f[i] < f[i + 1]) out.push_back(static_cast<int>(i));
  return out;
}

// Mean spacing between successive local minima of the objective trace from
// window_start onward. Empty when fewer than two minima exist (e.g. a
// monotone trace).
inline std::optional<double> measure_oscillation_period(const Trace& trace,
                                                        int window_start = 0) {
  std::vector<double> f;
  std::vector<int> ks;
  for (const auto& r : trace.records) {
    if (r.k < window_start) continue;
    f.push_back(r.f);
    ks.push_back(r.k);
  }
  const std::vector<int> minima = local_minima_indices(f);
  if (minima.size() < 2) return std::nullopt;
  double total = 0.0;
  for (std::size_t i = 1; i < minima.size(); ++i)
    total += ks[minima[i]] - ks[minima[i - 1]];
  return total / static_cast<double>(minima.size() - 1);
}

// Denominator used for relative suboptimality. The export column f_rel is
// always relative to |f*|; iteration counting for quadratics (f* = 0) uses
// the initial gap instead, matching the absolute axes of the corresponding
// figures.
enum class RelDenom { initial_gap, optimum_magnitude };

inline double relative_gap(double f, double f0, double f_star, RelDenom denom) {
  const double d = denom == RelDenom::initial_gap
                       ? std::max(f0 - f_star, 1e-300)
                       : std::max(std::abs(f_star), 1e-300);
  return (f - f_star) / d;
}

// First iteration index at which the relative gap reaches tol; empty when the
// trace never gets there.
inline std::optional<int> iterations_to_relative(const Trace& trace, double tol,
                                                 double f_star, RelDenom denom) {
  const double f0 = trace.initial_f();
  for (const auto& r : trace.records)
    if (relative_gap(r.f, f0, f_star, denom) <= tol) return r.k;
  return std::nullopt;
}

// Numeric failure (divergence to infinity/NaN) carrying whatever part of the
// trace was produced before the failure.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, Trace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trace& partial_trace() const { return partial_; }

 private:
  Trace partial_;
};

}  // namespace restartkit
