#pragma once

// Shared helpers for the test suites. The matrix builders here are written
// independently of the library (index loops instead of library calls) so
// they can serve as brute-force oracles.

#include "demonsim/qmath.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace testutil {

using demonsim::Complex;
using demonsim::Matrix;
using demonsim::Vector;

// Small deterministic generator for randomized property tests.
class TestRng {
public:
  explicit TestRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double gaussian() {
    // Box-Muller.
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Complex complex_gaussian() { return {gaussian(), gaussian()}; }

private:
  std::uint64_t state_;
};

inline Matrix kron_oracle(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Vector random_pure_vector(TestRng& rng, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  v /= v.norm();
  return v;
}

inline Matrix random_unitary(TestRng& rng, int dim) {
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    const Complex phase = d == Complex{0, 0} ? Complex{1, 0} : d / std::abs(d);
    q.col(i) *= phase;
  }
  return q;
}

// Full-rank mixture of random pure states (or rank-limited when asked).
inline Matrix random_density(TestRng& rng, int dim, int rank = 0) {
  if (rank <= 0) rank = dim;
  Matrix rho = Matrix::Zero(dim, dim);
  double total = 0.0;
  for (int r = 0; r < rank; ++r) {
    const double w = rng.uniform(0.05, 1.0);
    const Vector v = random_pure_vector(rng, dim);
    rho += w * (v * v.adjoint()).eval();
    total += w;
  }
  rho /= total;
  rho = 0.5 * (rho + Matrix(rho.adjoint()));
  return rho;
}

inline demonsim::DensityMatrix random_density_matrix(
    TestRng& rng, const std::vector<std::string>& labels, int rank = 0) {
  return demonsim::DensityMatrix(labels,
                                 random_density(rng, 1 << labels.size(), rank));
}

// Single-qubit state from a Bloch vector.
inline Matrix state_from_bloch(double x, double y, double z) {
  Matrix m(2, 2);
  m << 0.5 * (1 + z), 0.5 * Complex(x, -y), 0.5 * Complex(x, y),
      0.5 * (1 - z);
  return m;
}

}  // namespace testutil
