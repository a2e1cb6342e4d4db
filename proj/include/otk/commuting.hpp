#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otk/bj_orth.hpp"
#include "otk/schaffer.hpp"

namespace otk {

/** @brief A map from the first in_slots copies of H into the first out_slots copies. */
struct GrowingMap {
  std::size_t slot_dim = 0;
  std::size_t in_slots = 0;
  std::size_t out_slots = 0;
  CMatrix op;
  std::string label;
};

inline GrowingMap compose(const GrowingMap& outer, const GrowingMap& inner_map, std::string label) {
  if (outer.in_slots != inner_map.out_slots || outer.slot_dim != inner_map.slot_dim)
    throw InputError("compose: slot counts do not chain (" + outer.label + " after " + inner_map.label + ")");
  return {outer.slot_dim, inner_map.in_slots, outer.out_slots, outer.op * inner_map.op, std::move(label)};
}

/** @brief (x0, x1, ...) -> (T x0, D x0, 0, x1, x2, ...). */
inline GrowingMap shift_map(const CMatrix& t, const CMatrix& d_t, std::size_t k, std::string label) {
  const std::size_t d = t.rows();
  if (k == 0) throw InputError("shift_map: at least one input slot");
  GrowingMap g{d, k, k + 2, CMatrix::zeros((k + 2) * d, k * d), std::move(label)};
  g.op.set_block(0, 0, t);
  g.op.set_block(d, 0, d_t);
  for (std::size_t j = 1; j < k; ++j) g.op.set_block((j + 2) * d, j * d, CMatrix::identity(d));
  return g;
}

/** @brief Block diagonal map acting by `u` on slots 1, 5, 9, ... and by the identity elsewhere. */
inline GrowingMap group_map(const CMatrix& u, std::size_t k, std::string label) {
  const std::size_t d = u.rows();
  GrowingMap g{d, k, k, CMatrix::zeros(k * d, k * d), std::move(label)};
  for (std::size_t j = 0; j < k; ++j) g.op.set_block(j * d, j * d, j % 4 == 1 ? u : CMatrix::identity(d));
  return g;
}

struct AndoWitness {
  CMatrix x;
  double beta = 0;
  double eta = 0;
  double zeta = 0;
  CMatrix y;
  Complex inner_product{};  ///< <V_T y, V_A y>
  Complex closed_form{};    ///< eta^2 <x, S x> + zeta^2
  double closed_form_residual = 0;
  double scalar_identity_residual = 0;  ///< |eta^2 beta + zeta^2|
};

struct AndoBundle {
  CMatrix t, s, a;
  std::size_t m = 0;
  CMatrix d_t;
  std::map<std::size_t, GrowingMap> v_t;  ///< keyed by input slot count
  std::map<std::size_t, GrowingMap> v_a;
  double isometry_residual_t = 0;
  double isometry_residual_a = 0;
  double commutation_residual = 0;
  double intertwining_residual = 0;  ///< |S D_T - D_T S|
  double defect_residual = 0;        ///< |D_T - D_{ST}|
  std::map<std::pair<int, int>, double> dilation_residuals;
  std::optional<AndoWitness> witness;

  double max_dilation_residual() const {
    double r = 0;
    for (const auto& [k, v] : dilation_residuals) r = std::max(r, v);
    return r;
  }
};

namespace detail {

inline void require_unitary(const CMatrix& s, const ToleranceConfig& tol, const char* who) {
  require_square(s, who);
  if (unitarity_residual(s) > tol.structural_tol) throw PreconditionError(std::string(who) + ": S is not unitary");
}

}  // namespace detail

inline GrowingMap ando_v_t(const CMatrix& t, const CMatrix& s, const CMatrix& d_t, std::size_t k) {
  return compose(group_map(s.adjoint(), k + 2, "G"), shift_map(t, d_t, k, "W_T"), "V_T");
}

inline GrowingMap ando_v_a(const CMatrix& a, const CMatrix& s, const CMatrix& d_t, std::size_t k) {
  return compose(shift_map(a, d_t, k, "W_A"), group_map(s, k, "Gstar"), "V_A");
}

/**
 * @brief Commuting isometric dilations of (T, ST) on finite windows, with the orthogonality witness
 * when the numerical range of S meets (-inf, 0].
 */
inline AndoBundle ando_pair(const CMatrix& t, const CMatrix& s, std::size_t m, const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, s, "ando_pair");
  detail::require_square(t, "ando_pair");
  if (m < 9 || m % 4 != 1) throw InputError("ando_pair: slot count must be 1 mod 4 and at least 9");
  detail::require_unitary(s, tol, "ando_pair");
  if ((s * t - t * s).max_abs() > 1e-10) throw PreconditionError("ando_pair: S and T do not commute");
  detail::require_contraction(t, tol, "ando_pair");

  AndoBundle b;
  b.t = t;
  b.s = s;
  b.a = s * t;
  b.m = m;
  b.d_t = defect_pair(t, tol).d_t;
  const std::size_t d = t.rows();
  b.intertwining_residual = (s * b.d_t - b.d_t * s).max_abs();
  b.defect_residual = op_norm(b.d_t - defect_pair(b.a, tol).d_t);

  for (std::size_t k : {m, m + 2}) {
    b.v_t.emplace(k, ando_v_t(t, s, b.d_t, k));
    b.v_a.emplace(k, ando_v_a(b.a, s, b.d_t, k));
  }
  const CMatrix id = CMatrix::identity(m * d);
  b.isometry_residual_t = (b.v_t.at(m).op.adjoint() * b.v_t.at(m).op - id).max_abs();
  b.isometry_residual_a = (b.v_a.at(m).op.adjoint() * b.v_a.at(m).op - id).max_abs();
  b.commutation_residual = (b.v_t.at(m + 2).op * b.v_a.at(m).op - b.v_a.at(m + 2).op * b.v_t.at(m).op).max_abs();

  // Powers start from H itself, so the windows never truncate.
  const int reach = int((m - 1) / 2);
  for (int n1 = 0; n1 <= reach; ++n1) {
    for (int n2 = 0; n1 + n2 <= reach; ++n2) {
      CMatrix v = CMatrix::identity(d);
      std::size_t k = 1;
      for (int j = 0; j < n2; ++j, k += 2) v = ando_v_a(b.a, s, b.d_t, k).op * v;
      for (int j = 0; j < n1; ++j, k += 2) v = ando_v_t(t, s, b.d_t, k).op * v;
      b.dilation_residuals[{n1, n2}] = (v.block(0, 0, d, d) - mpow(t, n1) * mpow(b.a, n2)).max_abs();
    }
  }

  RayMembership rm = meets_nonpositive_adaptive(nr_boundary(s, 64), tol.verdict_tol);
  if (rm.verdict == Tri::True && rm.witness) {
    AndoWitness w;
    w.x = normalized(rm.witness->vector);
    w.beta = std::min(0.0, quad_form(s, w.x).real());
    w.eta = 1.0 / std::sqrt(1.0 - w.beta);
    w.zeta = std::sqrt(-w.beta / (1.0 - w.beta));
    w.scalar_identity_residual = std::abs(w.eta * w.eta * w.beta + w.zeta * w.zeta);
    w.y = CMatrix::zeros(m * d, 1);
    w.y.set_block(0, 0, w.x * Complex(w.eta));
    w.y.set_block(2 * d, 0, w.x * Complex(w.zeta));
    w.inner_product = inner(b.v_t.at(m).op * w.y, b.v_a.at(m).op * w.y);
    w.closed_form = w.eta * w.eta * inner(w.x, s * w.x) + w.zeta * w.zeta;
    w.closed_form_residual = std::abs(w.inner_product - w.closed_form);
    b.witness = std::move(w);
  }
  return b;
}

/**
 * @brief Is there a unit y with 1 - |Ty|^2 + <Ty, STy> real and non-positive? Decided on W(I - T*T + (ST)*T).
 */
inline OrthVerdict schaffer_ST_criterion(const CMatrix& t, const CMatrix& s, const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, s, "schaffer_ST_criterion");
  detail::require_unitary(s, tol, "schaffer_ST_criterion");
  detail::require_contraction(t, tol, "schaffer_ST_criterion");
  const CMatrix b = CMatrix::identity(t.rows()) - t.adjoint() * t + (s * t).adjoint() * t;
  RayMembership rm = meets_nonpositive_adaptive(nr_boundary(b, 64), tol.verdict_tol);
  OrthVerdict v;
  v.method = "st-criterion";
  v.orthogonal = rm.verdict;
  v.residuals["inner_distance"] = rm.inner_distance;
  v.residuals["distance_floor"] = rm.outer_distance;
  v.residuals["n_angles"] = double(rm.polygon.angles.size());
  if (rm.witness) {
    const CMatrix y = normalized(rm.witness->vector);
    v.witness = y;
    v.inner_product_at_witness = 1.0 - std::pow(vnorm(t * y), 2) + inner(t * y, s * t * y);
    v.residuals["witness_residual"] = rm.witness->residual;
  }
  return v;
}

/** @brief Brehmer positivity for a pair. Index 0: G = {1}, 1: G = {2}, 2: G = {1,2}. */
struct BrehmerReport {
  double commute_residual = 0;
  std::vector<CMatrix> residual_matrices;
  std::vector<double> min_eigenvalues;
  double empty_set_min_eigenvalue = 1;  ///< G empty: the identity
  bool passes = false;
};

inline BrehmerReport brehmer_check(const CMatrix& t1, const CMatrix& t2, const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t1, t2, "brehmer_check");
  detail::require_square(t1, "brehmer_check");
  BrehmerReport r;
  const CMatrix id = CMatrix::identity(t1.rows());
  const CMatrix p = t1 * t2;
  r.commute_residual = (p - t2 * t1).max_abs();
  r.residual_matrices = {id - t1.adjoint() * t1, id - t2.adjoint() * t2,
                         id - t1.adjoint() * t1 - t2.adjoint() * t2 + p.adjoint() * p};
  r.passes = r.commute_residual <= tol.structural_tol;
  for (const CMatrix& m : r.residual_matrices) {
    const double e = herm_eigvals(m, tol).back();
    r.min_eigenvalues.push_back(e);
    if (e < -tol.structural_tol) r.passes = false;
  }
  return r;
}

/** @brief Hypotheses for an orthogonal regular unitary dilation of a commuting pair. */
struct RegularReport {
  BrehmerReport brehmer;
  Membership classical_zero;  ///< 0 in W(T2* T1)
  std::optional<CMatrix> classical_witness;
  Complex witness_value{};
  Membership maximal_zero;  ///< 0 in the maximal numerical range of T2* T1
  OrthVerdict bj;           ///< T1 perpendicular T2
  Tri predicate = Tri::Inconclusive;
};

inline RegularReport regular_orth_predicate(const CMatrix& t1, const CMatrix& t2, const ToleranceConfig& tol = {}) {
  RegularReport r;
  r.brehmer = brehmer_check(t1, t2, tol);
  const CMatrix b = t2.adjoint() * t1;
  auto [cm, poly] = contains_point_adaptive(nr_boundary(b, 64), 0.0, tol.verdict_tol);
  r.classical_zero = cm;
  if (cm.verdict == Tri::True) {
    RegionWitness w = nr_witness_in(poly, 0.0, tol.verdict_tol);
    r.classical_witness = w.vector;
    r.witness_value = quad_form(b, w.vector);
  }
  r.maximal_zero = contains_point_adaptive(maximal_numerical_range(b, tol, 64), 0.0, tol.verdict_tol).first;
  r.bj = is_bj_orthogonal(t1, t2, tol);
  r.predicate = !r.brehmer.passes ? Tri::False : cm.verdict;
  return r;
}

}  // namespace otk
