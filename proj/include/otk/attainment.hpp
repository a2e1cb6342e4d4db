#pragma once

#include <cmath>
#include <limits>

#include "otk/linalg.hpp"

namespace otk {

/** @brief Orthonormal basis of the top singular subspace H0 (unit vectors x with |Tx| = |T|). */
struct NormAttainmentBasis {
  CMatrix basis;  ///< d x k, orthonormal columns
  double norm = 0;
  double gap = std::numeric_limits<double>::infinity();  ///< |T|^2 minus the next eigenvalue of T*T
};

/**
 * @brief Clustered top eigenspace of T*T.
 *
 * Eigenvalues within eig_tol * |T|^2 of the largest one belong to H0.
 */
inline NormAttainmentBasis norm_attainment_basis(const CMatrix& t, const ToleranceConfig& tol = {}) {
  detail::require_finite(t, "norm_attainment_basis");
  HermEig e = herm_eig(t.adjoint() * t, tol);
  const double top = std::max(0.0, e.values[0]);
  if (top == 0.0) throw PreconditionError("norm_attainment_basis: zero operator has no norm attainment basis");
  const double cut = top - tol.eig_tol * top;
  std::size_t k = 0;
  while (k < e.values.size() && e.values[k] >= cut) ++k;
  NormAttainmentBasis r;
  r.norm = std::sqrt(top);
  r.basis = e.vectors.block(0, 0, t.cols(), k);
  if (k < e.values.size()) r.gap = top - e.values[k];
  return r;
}

}  // namespace otk
