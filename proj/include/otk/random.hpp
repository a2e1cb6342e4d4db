#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "otk/linalg.hpp"
#include "otk/matrix.hpp"

namespace otk {

/** @brief Seeded source of random matrices; deterministic for a fixed seed. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  std::uint64_t next_seed() { return eng_(); }

  Complex cnormal() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }
  Complex unimodular() { return std::polar(1.0, uniform(0.0, 2.0 * M_PI)); }

  CMatrix gaussian(std::size_t r, std::size_t c) {
    CMatrix m(r, c);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = cnormal();
    return m;
  }

  CMatrix unit_vector(std::size_t n) { return normalized(gaussian(n, 1)); }

  CMatrix hermitian(std::size_t n) {
    CMatrix g = gaussian(n, n);
    return (g + g.adjoint()) * Complex(0.5);
  }

  /** @brief Haar-like unitary via modified Gram-Schmidt on a Gaussian matrix. */
  CMatrix unitary(std::size_t n) {
    CMatrix g = gaussian(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex proj{};
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(g(i, k)) * g(i, j);
        for (std::size_t i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
      }
      double nn = 0;
      for (std::size_t i = 0; i < n; ++i) nn += std::norm(g(i, j));
      nn = std::sqrt(nn);
      for (std::size_t i = 0; i < n; ++i) g(i, j) /= nn;
    }
    return g;
  }

  /** @brief Gaussian matrix rescaled to operator norm `norm`. */
  CMatrix with_norm(std::size_t n, double norm) {
    CMatrix g = gaussian(n, n);
    return g * Complex(norm / op_norm(g));
  }

  /** @brief Contraction with norm drawn uniformly from (lo, hi). */
  CMatrix contraction(std::size_t n, double lo = 0.05, double hi = 1.0) { return with_norm(n, uniform(lo, hi)); }

  /** @brief U diag(s) V* with prescribed singular values. */
  CMatrix with_singular_values(const std::vector<double>& s) {
    const std::size_t n = s.size();
    std::vector<Complex> d(s.begin(), s.end());
    return unitary(n) * CMatrix::diag(d) * unitary(n).adjoint();
  }

 private:
  std::mt19937_64 eng_;
};

/**
 * @brief Modify A so that <T x, A x> = 0 for the unit vector x (rank-one projection).
 */
inline CMatrix project_orthogonal(const CMatrix& t, const CMatrix& a, const CMatrix& x) {
  const CMatrix tx = t * x;
  const double n = vnorm(tx);
  if (n == 0.0) return a;
  const CMatrix y = tx / Complex(n);
  const Complex c = inner(a * x, y);  // y* A x
  return a - (y * c) * x.adjoint();
}

}  // namespace otk
