#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "otk/errors.hpp"
#include "otk/matrix.hpp"
#include "otk/tolerance.hpp"

namespace otk {

/** @brief Eigen-decomposition of a Hermitian matrix; values descending, vectors as columns. */
struct HermEig {
  std::vector<double> values;
  CMatrix vectors;
};

namespace detail {

inline void require_finite(const CMatrix& m, const char* who) {
  if (m.empty()) throw InputError(std::string(who) + ": empty matrix");
  if (!m.all_finite()) throw InputError(std::string(who) + ": non-finite entries");
}

inline void require_hermitian(const CMatrix& h, const char* who, double structural_tol) {
  require_finite(h, who);
  if (!h.is_square()) throw InputError(std::string(who) + ": matrix is not square");
  double asym = (h - h.adjoint()).frobenius_norm();
  if (asym > structural_tol * std::max(1.0, h.frobenius_norm())) {
    throw PreconditionError(std::string(who) + ": matrix is not Hermitian (residual " + std::to_string(asym) + ")");
  }
}

// Cyclic complex Jacobi. `a` is overwritten; eigenvectors accumulated into z when non-null.
inline void jacobi_sweeps(std::vector<Complex>& a, std::size_t n, std::vector<Complex>* z) {
  auto at = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };
  double scale = 0;
  for (const auto& x : a) scale += std::norm(x);
  scale = std::sqrt(scale);
  if (scale == 0.0) return;

  for (int sweep = 0; sweep < 80; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(at(p, q));
    if (off == 0.0 || std::sqrt(off) <= 1e-22 * scale) break;
    const double thresh = sweep < 3 ? 0.2 * std::sqrt(off) / double(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = at(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double app = at(p, p).real(), aqq = at(q, q).real();
        // Below one ulp of both diagonal entries: drop it.
        if (std::abs(app) + 100.0 * g == std::abs(app) && std::abs(aqq) + 100.0 * g == std::abs(aqq)) {
          at(p, q) = at(q, p) = 0.0;
          continue;
        }
        if (g <= thresh) continue;

        const double theta = (aqq - app) / (2.0 * g);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex e = apq / g;
        const Complex ec = std::conj(e);

        // Columns: A <- A V with V = [[c, s], [-s conj(e), c conj(e)]] on (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          const Complex xp = at(k, p), xq = at(k, q);
          at(k, p) = c * xp - s * ec * xq;
          at(k, q) = s * xp + c * ec * xq;
        }
        // Rows: A <- V* A.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex xp = at(p, k), xq = at(q, k);
          at(p, k) = c * xp - s * e * xq;
          at(q, k) = s * xp + c * e * xq;
        }
        at(p, q) = at(q, p) = 0.0;
        at(p, p) = app - t * g;
        at(q, q) = aqq + t * g;
        if (z) {
          auto zt = [&](std::size_t i, std::size_t j) -> Complex& { return (*z)[i * n + j]; };
          for (std::size_t k = 0; k < n; ++k) {
            const Complex xp = zt(k, p), xq = zt(k, q);
            zt(k, p) = c * xp - s * ec * xq;
            zt(k, q) = s * xp + c * ec * xq;
          }
        }
      }
    }
  }
}

// Householder reduction to real tridiagonal form (d diagonal, e sub-diagonal moduli).
inline void tridiagonalize(std::vector<Complex>& a, std::size_t n, std::vector<double>& d, std::vector<double>& e) {
  auto at = [&](std::size_t i, std::size_t j) -> Complex& { return a[i * n + j]; };
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<Complex> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xn = 0;
    for (std::size_t i = k + 1; i < n; ++i) xn += std::norm(at(i, k));
    xn = std::sqrt(xn);
    if (xn == 0.0) continue;
    const Complex x0 = at(k + 1, k);
    const Complex ph = std::abs(x0) > 0 ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -ph * xn;
    double vn = 0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = at(i, k) - (i == k + 1 ? alpha : Complex{});
      vn += std::norm(v[i]);
    }
    vn = std::sqrt(vn);
    if (vn == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vn;
    // p = A22 v, K = v* p, w = p - K v; A22 -= 2 (v w* + w v*)
    Complex kk{};
    for (std::size_t i = k + 1; i < n; ++i) {
      Complex s{};
      for (std::size_t j = k + 1; j < n; ++j) s += at(i, j) * v[j];
      p[i] = s;
      kk += std::conj(v[i]) * s;
    }
    for (std::size_t i = k + 1; i < n; ++i) p[i] -= kk.real() * v[i];
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) at(i, j) -= 2.0 * (v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]));
    at(k + 1, k) = alpha;
    at(k, k + 1) = std::conj(alpha);
    for (std::size_t i = k + 2; i < n; ++i) at(i, k) = at(k, i) = 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i).real();
  for (std::size_t i = 1; i < n; ++i) e[i] = std::abs(at(i, i - 1));
}

// Implicit QL on a real symmetric tridiagonal matrix; e[i] couples i-1 and i.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n < 2) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) break;
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool early = false;
        while (i-- > l) {
          double f = s * e[i], b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            early = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (early) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

inline std::vector<Complex> hermitized(const CMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<Complex> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = 0.5 * (h(i, j) + std::conj(h(j, i)));
  return a;
}

}  // namespace detail

/**
 * @brief Eigen-decomposition of Hermitian H by cyclic Jacobi rotations.
 *
 * Ties keep the original index order, so results are deterministic.
 */
inline HermEig herm_eig(const CMatrix& h, const ToleranceConfig& tol = {}) {
  detail::require_hermitian(h, "herm_eig", tol.structural_tol);
  const std::size_t n = h.rows();
  std::vector<Complex> a = detail::hermitized(h);
  std::vector<Complex> z(n * n, Complex{});
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
  detail::jacobi_sweeps(a, n, &z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i].real() > a[j * n + j].real(); });
  HermEig out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a[src * n + src].real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = z[i * n + src];
  }
  return out;
}

/** @brief Eigenvalues only (descending), by Householder tridiagonalization and implicit QL. */
inline std::vector<double> herm_eigvals(const CMatrix& h, const ToleranceConfig& tol = {}) {
  detail::require_hermitian(h, "herm_eigvals", tol.structural_tol);
  const std::size_t n = h.rows();
  std::vector<Complex> a = detail::hermitized(h);
  std::vector<double> d, e;
  detail::tridiagonalize(a, n, d, e);
  detail::tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end(), std::greater<double>());
  return d;
}

/** @brief Largest singular value with a top right-singular unit vector. */
struct OpNorm {
  double value = 0;
  CMatrix right_vector;
};

inline OpNorm op_norm_full(const CMatrix& m) {
  detail::require_finite(m, "op_norm");
  OpNorm r;
  if (m.cols() <= m.rows()) {
    HermEig e = herm_eig(m.adjoint() * m);
    r.value = std::sqrt(std::max(0.0, e.values[0]));
    r.right_vector = e.vectors.col(0);
  } else {
    HermEig e = herm_eig(m * m.adjoint());
    r.value = std::sqrt(std::max(0.0, e.values[0]));
    if (r.value > 0) {
      r.right_vector = normalized(m.adjoint() * e.vectors.col(0));
    } else {
      r.right_vector = CMatrix::basis(m.cols(), 0);
    }
  }
  return r;
}

/** @brief Operator (spectral) norm. */
inline double op_norm(const CMatrix& m) {
  detail::require_finite(m, "op_norm");
  const CMatrix g = m.cols() <= m.rows() ? m.adjoint() * m : m * m.adjoint();
  return std::sqrt(std::max(0.0, herm_eigvals(g)[0]));
}

/**
 * @brief Principal square root of a Hermitian PSD matrix.
 * @param clamp eigenvalues in [-clamp, 0) are treated as 0; below that is an error.
 *        A negative value selects the default eig_tol * max(1, |P|).
 */
inline CMatrix psd_sqrt(const CMatrix& p, const ToleranceConfig& tol = {}, double clamp = -1.0) {
  HermEig e = herm_eig(p, tol);
  const std::size_t n = p.rows();
  double scale = 0;
  for (double v : e.values) scale = std::max(scale, std::abs(v));
  if (clamp < 0) clamp = tol.eig_tol * std::max(1.0, scale);
  const double lowest = e.values.back();
  if (lowest < -clamp) {
    throw PreconditionError("psd_sqrt: matrix is not PSD (min eigenvalue " + std::to_string(lowest) + ")");
  }
  // Rounding-level eigenvalues are zeroed so exact-norm directions give exact zero defects.
  const double snap = 16.0 * double(n) * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
  CMatrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double lam = e.values[k];
    if (lam <= snap) continue;
    const double s = std::sqrt(lam);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = e.vectors(i, k) * s;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * std::conj(e.vectors(j, k));
    }
  }
  return r;
}

/** @brief Structural predicates with the residual each one is judged by. */
struct StructureReport {
  bool is_self_adjoint = false;
  bool is_unitary = false;
  bool is_isometry = false;
  bool is_psd = false;
  bool is_contraction = false;
  bool is_normal = false;
  double norm = 0;
  std::map<std::string, double> residuals;
};

inline StructureReport classify(const CMatrix& m, const ToleranceConfig& tol = {}) {
  detail::require_finite(m, "classify");
  StructureReport r;
  const double t = tol.structural_tol;
  const CMatrix mh = m.adjoint();
  const CMatrix mhm = mh * m;

  r.norm = std::sqrt(std::max(0.0, herm_eigvals(mhm)[0]));
  r.residuals["contraction"] = std::max(0.0, r.norm - 1.0);
  r.is_contraction = r.residuals["contraction"] <= t;

  r.residuals["isometry"] = op_norm(mhm - CMatrix::identity(m.cols()));
  r.is_isometry = r.residuals["isometry"] <= t;

  if (m.is_square()) {
    const CMatrix mmh = m * mh;
    r.residuals["self_adjoint"] = op_norm(m - mh);
    r.is_self_adjoint = r.residuals["self_adjoint"] <= t;
    r.residuals["unitary"] = std::max(r.residuals["isometry"], op_norm(mmh - CMatrix::identity(m.rows())));
    r.is_unitary = r.residuals["unitary"] <= t;
    r.residuals["normal"] = op_norm(mmh - mhm);
    r.is_normal = r.residuals["normal"] <= t;
    const CMatrix herm = (m + mh) * Complex(0.5);
    const double lmin = herm_eigvals(herm).back();
    r.residuals["psd"] = std::max(0.0, -lmin);
    r.is_psd = r.is_self_adjoint && r.residuals["psd"] <= t;
  }
  return r;
}

/** @brief Cheap unitarity residual max(|U*U - I|, |UU* - I|) for square U. */
inline double unitarity_residual(const CMatrix& u) {
  if (!u.is_square()) throw InputError("unitarity residual of non-square matrix");
  const CMatrix id = CMatrix::identity(u.rows());
  return std::max(op_norm(u.adjoint() * u - id), op_norm(u * u.adjoint() - id));
}

}  // namespace otk
