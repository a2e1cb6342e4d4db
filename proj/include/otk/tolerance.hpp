#pragma once

#include <cmath>
#include <string>

#include "otk/errors.hpp"

namespace otk {

/** @brief Numerical thresholds shared by every operation. */
struct ToleranceConfig {
  double eig_tol = 1e-10;         ///< eigen-residual bound, H0 clustering
  double structural_tol = 1e-8;   ///< unitarity / PSD / self-adjointness residuals
  double verdict_tol = 1e-7;      ///< orthogonality decision margin

  void validate() const {
    for (double t : {eig_tol, structural_tol, verdict_tol}) {
      if (!(std::isfinite(t) && t > 0.0 && t < 1e-2)) {
        throw InputError("tolerances must be finite, positive and below 1e-2");
      }
    }
  }
};

/** @brief Three-valued outcome of a certified test. */
enum class Tri { False, True, Inconclusive };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    default: return "inconclusive";
  }
}

inline Tri tri_from_string(const std::string& s) {
  if (s == "true") return Tri::True;
  if (s == "false") return Tri::False;
  if (s == "inconclusive") return Tri::Inconclusive;
  throw InputError("not a three-valued verdict: " + s);
}

}  // namespace otk
