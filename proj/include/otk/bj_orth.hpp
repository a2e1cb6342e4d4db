#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "otk/attainment.hpp"
#include "otk/linalg.hpp"
#include "otk/numrange.hpp"

namespace otk {

/** @brief Outcome of an orthogonality decision. */
struct OrthVerdict {
  Tri orthogonal = Tri::Inconclusive;
  std::optional<CMatrix> witness;
  double epsilon_min = 0;
  Complex inner_product_at_witness{};
  std::string method;
  std::map<std::string, double> residuals;
};

namespace detail {

inline void require_same_shape(const CMatrix& t, const CMatrix& a, const char* who) {
  require_finite(t, who);
  require_finite(a, who);
  if (t.rows() != a.rows() || t.cols() != a.cols()) throw InputError(std::string(who) + ": shape mismatch");
}

// C = M* A* T M on the norm attainment basis of T.
inline CMatrix attainment_compression(const CMatrix& t, const CMatrix& a, const NormAttainmentBasis& nb) {
  return nb.basis.adjoint() * a.adjoint() * t * nb.basis;
}

}  // namespace detail

/**
 * @brief Decide T perpendicular_BJ A: is 0 in the numerical range of M* A* T M, M a basis of H0?
 */
inline OrthVerdict is_bj_orthogonal(const CMatrix& t, const CMatrix& a, const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, a, "is_bj_orthogonal");
  OrthVerdict v;
  const double nt = op_norm(t), na = op_norm(a);
  v.residuals["norm_T"] = nt;
  v.residuals["norm_A"] = na;
  if (nt == 0.0 || na == 0.0) {
    v.orthogonal = Tri::True;
    v.method = "trivial";
    v.witness = nt == 0.0 ? CMatrix::basis(t.cols(), 0) : op_norm_full(t).right_vector;
    return v;
  }
  const NormAttainmentBasis nb = norm_attainment_basis(t, tol);
  const CMatrix c = detail::attainment_compression(t, a, nb);
  const double scale = nt * na;
  const double margin = tol.verdict_tol * scale;
  v.method = "compression";
  v.residuals["h0_dim"] = double(nb.basis.cols());
  if (std::isfinite(nb.gap)) v.residuals["gap"] = nb.gap;

  auto [m, poly] = contains_point_adaptive(nr_boundary(c, 64), 0.0, margin);
  const ZeroDistance zd = zero_distance_bounds(c);
  v.epsilon_min = std::clamp(zd.lower / scale, 0.0, 1.0);
  v.residuals["inner_distance"] = m.inner_distance / scale;
  v.residuals["separation"] = std::max(m.separation, zd.lower) / scale;
  v.residuals["n_angles"] = double(poly.angles.size());

  if (m.verdict == Tri::True) {
    RegionWitness w = nr_witness_in(poly, 0.0, margin);
    CMatrix x = nb.basis * w.vector;
    v.witness = x;
    v.inner_product_at_witness = inner(t * x, a * x);
    v.orthogonal = std::abs(v.inner_product_at_witness) <= margin ? Tri::True : Tri::Inconclusive;
  } else if (m.verdict == Tri::False || zd.lower > margin) {
    v.orthogonal = Tri::False;
    CMatrix x = nb.basis * zd.nearest;
    v.witness = x;
    v.inner_product_at_witness = inner(t * x, a * x);
  } else {
    v.orthogonal = Tri::Inconclusive;
  }
  return v;
}

/** @brief Least epsilon with T approximately orthogonal to A: dist(0, W(C)) / (|T||A|). */
inline double epsilon_min(const CMatrix& t, const CMatrix& a, const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, a, "epsilon_min");
  const double nt = op_norm(t), na = op_norm(a);
  if (nt == 0.0 || na == 0.0) return 0.0;
  const NormAttainmentBasis nb = norm_attainment_basis(t, tol);
  return std::clamp(zero_distance(detail::attainment_compression(t, a, nb)) / (nt * na), 0.0, 1.0);
}

/** @brief Lower and upper estimates of epsilon_min. */
inline std::pair<double, double> epsilon_bounds(const CMatrix& t, const CMatrix& a, const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, a, "epsilon_bounds");
  const double nt = op_norm(t), na = op_norm(a);
  if (nt == 0.0 || na == 0.0) return {0.0, 0.0};
  const NormAttainmentBasis nb = norm_attainment_basis(t, tol);
  const ZeroDistance zd = zero_distance_bounds(detail::attainment_compression(t, a, nb));
  return {std::clamp(zd.lower / (nt * na), 0.0, 1.0), std::clamp(zd.upper / (nt * na), 0.0, 1.0)};
}

/** @brief Is T epsilon-approximately orthogonal to A? Inconclusive between the two epsilon_min estimates. */
inline Tri is_approx_orthogonal(const CMatrix& t, const CMatrix& a, double eps, const ToleranceConfig& tol = {}) {
  if (!(eps >= 0.0 && eps < 1.0)) throw InputError("is_approx_orthogonal: eps must lie in [0, 1)");
  auto [lo, hi] = epsilon_bounds(t, a, tol);
  if (eps >= hi - tol.verdict_tol) return Tri::True;
  if (eps < lo - tol.verdict_tol) return Tri::False;
  return Tri::Inconclusive;
}

/** @brief Search parameters for the lambda-grid oracles. */
struct GridOracleConfig {
  double radius = 0;  ///< 0 selects 4 |T| / max(|A|, machine epsilon)
  int angular = 64;
  int radial = 64;
  int refine_iters = 40;

  void validate() const {
    if (radius < 0 || !std::isfinite(radius)) throw InputError("grid oracle: radius must be positive");
    if (angular * radial < 256) throw InputError("grid oracle: at least 256 coarse points");
    if (refine_iters < 0) throw InputError("grid oracle: refine_iters must be non-negative");
  }
};

struct GridMinimum {
  double min_norm = 0;
  Complex argmin_lambda{};
};

namespace detail {

template <class F>
double golden_max(F f, double a, double b, int iters, double& arg) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      a = x1, x1 = x2, f1 = f2, x2 = a + gr * (b - a), f2 = f(x2);
    } else {
      b = x2, x2 = x1, f2 = f1, x1 = b - gr * (b - a), f1 = f(x1);
    }
  }
  arg = f1 > f2 ? x1 : x2;
  return std::max(f1, f2);
}

}  // namespace detail

/**
 * @brief Minimise |T + lambda A| over complex lambda by a polar grid and line-search refinement.
 *
 * Independent of the compression route: only operator norms are evaluated.
 */
inline GridMinimum bj_grid_oracle(const CMatrix& t, const CMatrix& a, GridOracleConfig cfg = {}) {
  cfg.validate();
  detail::require_same_shape(t, a, "bj_grid_oracle");
  const double nt = op_norm(t), na = op_norm(a);
  GridMinimum g{nt, 0.0};
  if (na == 0.0) return g;
  const double r_max = cfg.radius > 0 ? cfg.radius : 4.0 * nt / std::max(na, std::numeric_limits<double>::epsilon());
  if (r_max == 0.0) return g;
  auto f = [&](Complex lam) { return op_norm(t + a * lam); };
  for (int k = 0; k < cfg.radial; ++k) {
    const double r = r_max * std::pow(10.0, -6.0 * (1.0 - double(k) / double(cfg.radial - 1)));
    for (int j = 0; j < cfg.angular; ++j) {
      const Complex lam = std::polar(r, 2.0 * M_PI * j / cfg.angular);
      const double v = f(lam);
      if (v < g.min_norm) g = {v, lam};
    }
  }
  double h = std::max(std::abs(g.argmin_lambda), r_max * 1e-6);
  const Complex dirs[4] = {1.0, Complex(0, 1), std::polar(1.0, M_PI / 4), std::polar(1.0, -M_PI / 4)};
  for (int it = 0; it < cfg.refine_iters; ++it) {
    for (const Complex d : dirs) {
      double s = 0;
      const Complex base = g.argmin_lambda;
      const double v = -detail::golden_max([&](double x) { return -f(base + d * x); }, -h, h, 30, s);
      if (v < g.min_norm) g = {v, base + d * s};
    }
    h *= 0.6;
  }
  return g;
}

/**
 * @brief Definitional least epsilon: sup over lambda != 0 of (|T|^2 - |T + lambda A|^2) / (2 |T| |lambda A|).
 */
inline double approx_grid_oracle(const CMatrix& t, const CMatrix& a, GridOracleConfig cfg = {}) {
  cfg.validate();
  detail::require_same_shape(t, a, "approx_grid_oracle");
  const double nt = op_norm(t), na = op_norm(a);
  if (nt == 0.0 || na == 0.0) return 0.0;
  const double r_max = cfg.radius > 0 ? cfg.radius : 4.0 * nt / std::max(na, std::numeric_limits<double>::epsilon());
  auto ratio = [&](double logr, double psi) {
    const double r = r_max * std::pow(10.0, logr);
    const double n = op_norm(t + a * std::polar(r, psi));
    return (nt * nt - n * n) / (2.0 * nt * r * na);
  };
  const double lo_exp = -9.0;
  double best = -std::numeric_limits<double>::infinity(), bl = 0, bp = 0;
  for (int k = 0; k < cfg.radial; ++k) {
    const double lr = lo_exp * (1.0 - double(k) / double(cfg.radial - 1));
    for (int j = 0; j < cfg.angular; ++j) {
      const double psi = 2.0 * M_PI * j / cfg.angular;
      const double v = ratio(lr, psi);
      if (v > best) best = v, bl = lr, bp = psi;
    }
  }
  double dpsi = 2.0 * M_PI / cfg.angular, dl = -lo_exp / (cfg.radial - 1);
  for (int it = 0; it < cfg.refine_iters / 4 + 1; ++it) {
    double arg = bp;
    double v = detail::golden_max([&](double p) { return ratio(bl, p); }, bp - dpsi, bp + dpsi, 40, arg);
    if (v > best) best = v, bp = arg;
    arg = bl;
    v = detail::golden_max([&](double l) { return ratio(l, bp); }, std::max(lo_exp - 3.0, bl - dl), std::min(0.0, bl + dl),
                           40, arg);
    if (v > best) best = v, bl = arg;
    dpsi *= 0.5;
    dl *= 0.5;
  }
  return std::clamp(best, 0.0, 1.0);
}

/** @brief T (+) 0_pad, a norm preserving extension of T. */
inline CMatrix norm_preserving_extension(const CMatrix& t, int pad) {
  if (pad < 0) throw InputError("norm_preserving_extension: pad must be non-negative");
  return direct_sum(t, CMatrix::zeros(std::size_t(pad), std::size_t(pad)));
}

}  // namespace otk
