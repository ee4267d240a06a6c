#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace restartkit {

// Seeded random source for problem generation. The raw stream is
// std::mt19937_64, whose output sequence is fixed by the C++ standard; the
// mappings below (rather than std::uniform_real_distribution /
// std::normal_distribution, whose outputs are implementation-defined) make
// generated instances identical for identical seeds on every platform.
//
//   uniform01    top 53 bits of one draw, scaled to [0, 1)
//   normal       Box-Muller (trigonometric form), pairs cached, u1 in (0, 1]
//   below(k)     one draw reduced mod k
//
// Matrices are filled row by row, vectors front to back, one value per draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t below(std::uint64_t k) { return engine_() % k; }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
    return m;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Decorrelates seeds for auxiliary draws (e.g. the starting point of an
// experiment vs. the problem instance itself). splitmix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace restartkit
