#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "otk/bj_orth.hpp"
#include "otk/errors.hpp"
#include "otk/linalg.hpp"
#include "otk/numrange.hpp"

namespace otk {

/** @brief Defect operators D_T = (I - T*T)^(1/2), D_T* = (I - TT*)^(1/2). */
struct DefectPair {
  CMatrix d_t;
  CMatrix d_tstar;
  double intertwining_residual = 0;  ///< |T D_T - D_T* T|
};

namespace detail {

inline void require_square(const CMatrix& m, const char* who) {
  require_finite(m, who);
  if (m.rows() != m.cols()) throw InputError(std::string(who) + ": matrix must be square");
}

inline void require_contraction(const CMatrix& t, const ToleranceConfig& tol, const char* who) {
  require_square(t, who);
  const double n = op_norm(t);
  if (n > 1.0 + tol.structural_tol)
    throw PreconditionError(std::string(who) + ": not a contraction (norm " + std::to_string(n) + ")");
}

}  // namespace detail

inline DefectPair defect_pair(const CMatrix& t, const ToleranceConfig& tol = {}) {
  detail::require_contraction(t, tol, "defect_pair");
  const std::size_t d = t.rows();
  const CMatrix id = CMatrix::identity(d);
  // a norm up to 1 + structural_tol leaves eigenvalues down to about -2 structural_tol
  const double clamp = 3.0 * tol.structural_tol;
  DefectPair p;
  p.d_t = psd_sqrt(id - t.adjoint() * t, tol, clamp);
  p.d_tstar = psd_sqrt(id - t * t.adjoint(), tol, clamp);
  p.intertwining_residual = op_norm(t * p.d_t - p.d_tstar * t);
  return p;
}

/** @brief The 2d x 2d unitary [[D_T, -T*], [T, D_T*]], or [[-D_T, T*], [T, D_T*]] when flipped. */
struct HalmosBlock {
  CMatrix t;
  CMatrix d_t;
  CMatrix d_tstar;
  CMatrix block;
  bool sign_flipped = false;
  double unitarity_residual = 0;
  double intertwining_residual = 0;
};

inline HalmosBlock halmos_block(const CMatrix& t, bool sign_flipped = false, const ToleranceConfig& tol = {}) {
  DefectPair p = defect_pair(t, tol);
  const std::size_t d = t.rows();
  HalmosBlock h;
  h.t = t;
  h.d_t = p.d_t;
  h.d_tstar = p.d_tstar;
  h.sign_flipped = sign_flipped;
  h.intertwining_residual = p.intertwining_residual;
  const Complex s = sign_flipped ? -1.0 : 1.0;
  h.block = CMatrix::zeros(2 * d, 2 * d);
  h.block.set_block(0, 0, p.d_t * s);
  h.block.set_block(0, d, t.adjoint() * (-s));
  h.block.set_block(d, 0, t);
  h.block.set_block(d, d, p.d_tstar);
  h.unitarity_residual = unitarity_residual(h.block);
  if (h.unitarity_residual > tol.structural_tol)
    throw PreconditionError("halmos_block: block is not unitary (residual " + std::to_string(h.unitarity_residual) + ")");
  return h;
}

/**
 * @brief A cyclically closed block operator on m copies of a d-dimensional space.
 *
 * Slot s corresponds to the two-sided index s - home; index 0 carries the embedded copy of H.
 */
struct DilationWindow {
  std::size_t slot_dim = 0;
  std::size_t slots = 0;
  std::size_t home = 0;
  CMatrix op;
  double rho = 1.0;
  int valid_powers = 0;
  std::string kind;

  /** @brief Two-sided index range [lowest_index(), highest_index()]. */
  int lowest_index() const { return -int(home); }
  int highest_index() const { return int(slots) - 1 - int(home); }

  std::size_t slot_of(int index) const {
    const int m = int(slots);
    return std::size_t(((int(home) + index) % m + m) % m);
  }

  /** @brief Vector of the window space with x placed at two-sided index `index`. */
  CMatrix embed(const CMatrix& x, int index) const {
    CMatrix v = CMatrix::zeros(slots * slot_dim, 1);
    v.set_block(slot_of(index) * slot_dim, 0, x);
    return v;
  }

  CMatrix part(const CMatrix& v, int index) const { return v.block(slot_of(index) * slot_dim, 0, slot_dim, 1); }

  /** @brief Smallest slot count for which powers up to n are guaranteed. */
  std::size_t required_slots(int n) const { return std::size_t(n) + slots - std::size_t(valid_powers); }
};

inline std::size_t default_home(std::size_t m) { return m / 2; }

namespace detail {

template <class Band>
CMatrix assemble_window(std::size_t d, std::size_t m, std::size_t home, const CMatrix& home_block, Band band) {
  DilationWindow w;
  w.slot_dim = d;
  w.slots = m;
  w.home = home;
  CMatrix op = CMatrix::zeros(m * d, m * d);
  for (int i = w.lowest_index(); i <= w.highest_index(); ++i) {
    if (i == -1 || i == 0) continue;
    const int c = i == w.highest_index() ? w.lowest_index() : i + 1;  // the top row wraps
    op.set_block(w.slot_of(i) * d, w.slot_of(c) * d, band(c));
  }
  // home rows -1, 0 meet columns 0, 1
  op.set_block(w.slot_of(-1) * d, w.slot_of(0) * d, home_block.block(0, 0, d, d));
  op.set_block(w.slot_of(-1) * d, w.slot_of(1) * d, home_block.block(0, d, d, d));
  op.set_block(w.slot_of(0) * d, w.slot_of(0) * d, home_block.block(d, 0, d, d));
  op.set_block(w.slot_of(0) * d, w.slot_of(1) * d, home_block.block(d, d, d, d));
  return op;
}

inline DilationWindow make_window(std::size_t d, std::size_t m, CMatrix op, std::string kind) {
  DilationWindow w;
  w.slot_dim = d;
  w.slots = m;
  w.home = default_home(m);
  w.op = std::move(op);
  w.rho = 1.0;
  w.valid_powers = int(m) - 2;
  w.kind = std::move(kind);
  return w;
}

inline void require_slots(std::size_t m, std::size_t minimum, const char* who) {
  if (m < minimum)
    throw InputError(std::string(who) + ": need at least " + std::to_string(minimum) + " slots, got " + std::to_string(m));
}

}  // namespace detail

/** @brief Window whose home 2x2 cell is the given 2d x 2d block and whose shift band is the identity. */
inline DilationWindow window_from_block(const CMatrix& block, std::size_t m, std::string kind = "schaffer") {
  if (block.rows() != block.cols() || block.rows() % 2 != 0) throw InputError("window_from_block: block must be 2d x 2d");
  detail::require_slots(m, 4, "window_from_block");
  const std::size_t d = block.rows() / 2;
  const CMatrix id = CMatrix::identity(d);
  return detail::make_window(d, m, detail::assemble_window(d, m, default_home(m), block, [&](int) { return id; }),
                             std::move(kind));
}

/** @brief Cyclically closed Schaffer unitary dilation of a contraction on m slots. */
inline DilationWindow schaffer_window(const CMatrix& t, std::size_t m, double rho = 1.0, const ToleranceConfig& tol = {}) {
  if (rho != 1.0) throw InputError("schaffer_window: the Schaffer construction is a unitary 1-dilation; rho must be 1");
  detail::require_slots(m, 4, "schaffer_window");
  return window_from_block(halmos_block(t, false, tol).block, m);
}

/** @brief Residuals of T^n against rho P_H U^n|_H for n = 0..n_max. */
struct PowerDilationReport {
  std::vector<double> residuals;
  int n_max = 0;
  double tol = 0;
  bool pass = false;
  double max_residual() const { return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end()); }
};

/**
 * @brief Compare T^n with rho P U^n P* where P* embeds H as columns [offset, offset + d) of U.
 *
 * n = 0 compares I with P P*, without the rho factor.
 */
inline std::vector<double> compressed_power_residuals(const CMatrix& u, std::size_t offset, const CMatrix& t, int n_max,
                                                      double rho) {
  const std::size_t d = t.rows();
  CMatrix v = CMatrix::zeros(u.rows(), d);
  for (std::size_t i = 0; i < d; ++i) v(offset + i, i) = 1.0;
  std::vector<double> res;
  CMatrix tn = CMatrix::identity(d);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) {
      v = u * v;
      tn = tn * t;
    }
    const CMatrix pv = v.block(offset, 0, d, d) * Complex(n == 0 ? 1.0 : rho);
    res.push_back(op_norm(tn - pv));
  }
  return res;
}

inline PowerDilationReport verify_power_dilation(const DilationWindow& w, const CMatrix& t, int n_max, double tol = 1e-7) {
  detail::require_square(t, "verify_power_dilation");
  if (t.rows() != w.slot_dim) throw InputError("verify_power_dilation: T does not match the window slot dimension");
  if (n_max < 0) throw InputError("verify_power_dilation: n_max must be non-negative");
  if (n_max > w.valid_powers) {
    const std::size_t need = w.required_slots(n_max);
    throw WindowSizeError("verify_power_dilation: window too small for power " + std::to_string(n_max), int(need));
  }
  PowerDilationReport r;
  r.n_max = n_max;
  r.tol = tol;
  r.residuals = compressed_power_residuals(w.op, w.slot_of(0) * w.slot_dim, t, n_max, w.rho);
  r.pass = r.max_residual() <= tol;
  return r;
}

/** @brief Convenience: the two Halmos blocks of a pair and their product A_U* T_U. */
struct HalmosPair {
  HalmosBlock t_block;
  HalmosBlock a_block;
  CMatrix product;  ///< A_U* T_U
};

inline HalmosPair halmos_pair(const CMatrix& t, const CMatrix& a, const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, a, "halmos_pair");
  HalmosPair p{halmos_block(t, false, tol), halmos_block(a, false, tol), {}};
  p.product = p.a_block.block.adjoint() * p.t_block.block;
  return p;
}

/**
 * @brief Orthogonality of the Schaffer dilations of T and A through their Halmos blocks:
 * does the numerical range of A_U* T_U contain a non-positive real number?
 *
 * epsilon_min refers to the infinite dilation pair: dist(0, conv({1} u W(A_U* T_U))).
 */
inline OrthVerdict halmos_orth_criterion(const CMatrix& t, const CMatrix& a, const ToleranceConfig& tol = {}) {
  const HalmosPair hp = halmos_pair(t, a, tol);
  const RayMembership rm = meets_nonpositive_adaptive(nr_boundary(hp.product, 64), tol.verdict_tol);
  OrthVerdict v;
  v.method = "halmos";
  v.orthogonal = rm.verdict;
  v.residuals["ray_inner_distance"] = rm.inner_distance;
  v.residuals["distance_floor"] = rm.outer_distance;
  double min_re = rm.polygon.vertices.front().real();
  for (Complex z : rm.polygon.vertices) min_re = std::min(min_re, z.real());
  v.residuals["min_real_part"] = min_re;
  v.residuals["n_angles"] = double(rm.polygon.angles.size());
  if (rm.witness) {
    v.witness = rm.witness->vector;
    v.inner_product_at_witness = inner(hp.t_block.block * rm.witness->vector, hp.a_block.block * rm.witness->vector);
    v.residuals["witness_residual"] = rm.witness->residual;
  }
  v.epsilon_min = std::clamp(zero_distance(direct_sum(hp.product, CMatrix::identity(1))), 0.0, 1.0);
  return v;
}

/** @brief Unitary parameters of the generalized Schaffer construction. */
struct GeneralizedParams {
  CMatrix u1;
  CMatrix u2;
  std::vector<CMatrix> x_seq;  ///< X_1, X_2, ...: band for two-sided columns 2, 3, ..., and the wrap column
  std::vector<CMatrix> y_seq;  ///< Y_-1, Y_-2, ...: band for columns -1, -2, ...

  static std::size_t x_length(std::size_t m) { return m - 1 - default_home(m); }
  static std::size_t y_length(std::size_t m) { return default_home(m) - 1; }

  static GeneralizedParams identity(std::size_t d, std::size_t m) {
    GeneralizedParams p;
    p.u1 = p.u2 = CMatrix::identity(d);
    p.x_seq.assign(x_length(m), CMatrix::identity(d));
    p.y_seq.assign(y_length(m), CMatrix::identity(d));
    return p;
  }

  /** @brief Band unitary feeding two-sided column c (c not in {0, 1}). */
  CMatrix& band(int c, std::size_t m) {
    const int home = int(default_home(m));
    if (c == 0 || c == 1) throw InputError("GeneralizedParams::band: columns 0 and 1 belong to the home block");
    if (c == -home) return x_seq.back();
    if (c < 0 && c > -home) return y_seq.at(std::size_t(-c - 1));
    if (c >= 2 && c <= int(m) - 1 - home) return x_seq.at(std::size_t(c - 2));
    throw InputError("GeneralizedParams::band: column " + std::to_string(c) + " outside the window");
  }
  const CMatrix& band(int c, std::size_t m) const { return const_cast<GeneralizedParams*>(this)->band(c, m); }
};

inline DilationWindow generalized_schaffer(const CMatrix& t, const GeneralizedParams& p, std::size_t m,
                                           const ToleranceConfig& tol = {}) {
  detail::require_slots(m, 4, "generalized_schaffer");
  const DefectPair dp = defect_pair(t, tol);
  const std::size_t d = t.rows();
  if (p.x_seq.size() != GeneralizedParams::x_length(m) || p.y_seq.size() != GeneralizedParams::y_length(m))
    throw InputError("generalized_schaffer: need " + std::to_string(GeneralizedParams::x_length(m)) + " X and " +
                     std::to_string(GeneralizedParams::y_length(m)) + " Y unitaries for " + std::to_string(m) + " slots");
  auto check = [&](const CMatrix& u, const std::string& name) {
    if (u.rows() != d || u.cols() != d) throw InputError("generalized_schaffer: " + name + " has the wrong shape");
    if (unitarity_residual(u) > tol.structural_tol) throw InputError("generalized_schaffer: " + name + " is not unitary");
  };
  check(p.u1, "U1");
  check(p.u2, "U2");
  for (std::size_t k = 0; k < p.x_seq.size(); ++k) check(p.x_seq[k], "X_" + std::to_string(k + 1));
  for (std::size_t k = 0; k < p.y_seq.size(); ++k) check(p.y_seq[k], "Y_-" + std::to_string(k + 1));

  CMatrix block = CMatrix::zeros(2 * d, 2 * d);
  block.set_block(0, 0, p.u2 * dp.d_t);
  block.set_block(0, d, (p.u2 * t.adjoint() * p.u1) * Complex(-1.0));
  block.set_block(d, 0, t);
  block.set_block(d, d, dp.d_tstar * p.u1);
  return detail::make_window(d, m, detail::assemble_window(d, m, default_home(m), block, [&](int c) { return p.band(c, m); }),
                             "generalized");
}

/** @brief e1 <-> e2 swap on C^d. */
inline CMatrix swap_unitary(std::size_t d) {
  if (d < 2) throw InputError("swap_unitary: dimension must be at least 2");
  CMatrix s = CMatrix::identity(d);
  s(0, 0) = s(1, 1) = 0.0;
  s(0, 1) = s(1, 0) = 1.0;
  return s;
}

/** @brief Two generalized Schaffer windows made orthogonal by the band slot k0. */
struct ForcedPair {
  DilationWindow u_t;
  DilationWindow u_a;
  CMatrix witness;
  Complex inner_product{};
};

inline ForcedPair forced_orthogonal_pair(const CMatrix& t, const CMatrix& a, std::size_t m, int k0,
                                         const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, a, "forced_orthogonal_pair");
  detail::require_slots(m, 4, "forced_orthogonal_pair");
  const std::size_t d = t.rows();
  if (d < 2) throw InputError("forced_orthogonal_pair: dimension must be at least 2");
  if (k0 == 0 || k0 == 1) throw InputError("forced_orthogonal_pair: k0 must not be a home slot (0 or 1)");
  GeneralizedParams pt = GeneralizedParams::identity(d, m), pa = GeneralizedParams::identity(d, m);
  pa.band(k0, m) = swap_unitary(d);  // throws for k0 outside the window
  ForcedPair f{generalized_schaffer(t, pt, m, tol), generalized_schaffer(a, pa, m, tol), {}, {}};
  f.u_t.kind = f.u_a.kind = "forced";
  f.witness = f.u_t.embed(CMatrix::basis(d, 0), k0);
  f.inner_product = inner(f.u_t.op * f.witness, f.u_a.op * f.witness);
  return f;
}

/** @brief Nested construction for an orthogonal pair T, A; windows act on outer_m copies of inner_m copies of H. */
struct HatPair {
  DilationWindow u_t;  ///< Schaffer window of N_T
  DilationWindow u_a;  ///< sign-flipped Halmos block of N_A
  CMatrix n_t;
  CMatrix n_a;
  double beta = 0;
  CMatrix inner_witness;  ///< x in the inner window space
  CMatrix witness;        ///< h~ in the outer window space
  Complex expected{};     ///< <N_T x, N_A x> / (1 + beta)
  Complex inner_product{};
  double residual = 0;
  double defect_residual_t = 0;  ///< |D_{N_T} - sqrt(1 - |T|^2) I|
  double defect_residual_a = 0;
  std::size_t h_offset = 0;  ///< column offset of H inside the flattened outer window
  int valid_powers = 0;
};

inline HatPair hat_pair(const CMatrix& t, const CMatrix& a, std::size_t inner_m = 6, std::size_t outer_m = 6,
                        const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, a, "hat_pair");
  detail::require_slots(inner_m, 4, "hat_pair (inner)");
  detail::require_slots(outer_m, 5, "hat_pair (outer)");
  detail::require_contraction(t, tol, "hat_pair");
  detail::require_contraction(a, tol, "hat_pair");
  const double nt = op_norm(t), na = op_norm(a);
  if (nt == 0.0 || na == 0.0) throw PreconditionError("hat_pair: T and A must be non-zero");
  const OrthVerdict ov = is_bj_orthogonal(t, a, tol);
  if (ov.orthogonal != Tri::True)
    throw PreconditionError(std::string("hat_pair: precondition T ⊥ A fails (is_bj_orthogonal = ") +
                            to_string(ov.orthogonal) + ")");

  HatPair h;
  const DilationWindow wt = schaffer_window(t / Complex(nt), inner_m, 1.0, tol);
  const DilationWindow wa = schaffer_window(a / Complex(na), inner_m, 1.0, tol);
  h.n_t = wt.op * Complex(nt);
  h.n_a = wa.op * Complex(na);
  const std::size_t k = h.n_t.rows();
  const CMatrix id = CMatrix::identity(k);
  const DefectPair dt = defect_pair(h.n_t, tol), da = defect_pair(h.n_a, tol);
  h.defect_residual_t = op_norm(dt.d_t - id * Complex(std::sqrt(std::max(0.0, 1.0 - nt * nt))));
  h.defect_residual_a = op_norm(da.d_t - id * Complex(std::sqrt(std::max(0.0, 1.0 - na * na))));

  h.u_t = window_from_block(halmos_block(h.n_t, false, tol).block, outer_m, "hat");
  h.u_a = window_from_block(halmos_block(h.n_a, true, tol).block, outer_m, "hat");
  h.valid_powers = int(std::min(inner_m, outer_m)) - 2;
  h.h_offset = h.u_t.slot_of(0) * k + wt.slot_of(0) * t.rows();

  h.beta = std::sqrt(std::max(0.0, 1.0 - nt * nt)) * std::sqrt(std::max(0.0, 1.0 - na * na));
  h.inner_witness = wt.embed(*ov.witness, 0);
  const CMatrix far = h.u_t.embed(h.inner_witness, 2);
  const CMatrix near = h.u_t.embed(h.inner_witness, 0);
  h.witness = far * Complex(std::sqrt(h.beta / (1.0 + h.beta))) + near * Complex(1.0 / std::sqrt(1.0 + h.beta));
  h.expected = inner(h.n_t * h.inner_witness, h.n_a * h.inner_witness) / (1.0 + h.beta);
  h.inner_product = inner(h.u_t.op * h.witness, h.u_a.op * h.witness);
  h.residual = std::abs(h.inner_product - h.expected);
  return h;
}

/** @brief Schaffer window of T against the adjoint of the Schaffer window of A*, with the explicit witness. */
struct AdjointTrickPair {
  DilationWindow u_t;
  DilationWindow u_a;
  CMatrix witness;
  Complex inner_product{};
  Complex identity_inner_product{};  ///< <U_T h, h>
};

inline AdjointTrickPair adjoint_trick_pair(const CMatrix& t, const CMatrix& a, std::size_t m, const CMatrix& x,
                                           const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, a, "adjoint_trick_pair");
  if (m < 6) throw WindowSizeError("adjoint_trick_pair: the witness needs slots -1..2 clear of the wrap", 6);
  if (x.rows() != t.rows() || x.cols() != 1) throw InputError("adjoint_trick_pair: x must be a column of the base space");
  const double nx = vnorm(x);
  if (std::abs(nx - 1.0) > 1e-10) throw InputError("adjoint_trick_pair: x must be a unit vector");
  AdjointTrickPair p;
  p.u_t = schaffer_window(t, m, 1.0, tol);
  p.u_a = schaffer_window(a.adjoint(), m, 1.0, tol);
  p.u_a.op = p.u_a.op.adjoint();
  p.u_a.kind = "adjoint-trick";
  const DefectPair dp = defect_pair(t, tol);
  p.witness = p.u_t.embed(dp.d_t * x, 0) + p.u_t.embed((t * x) * Complex(-1.0), 1);
  const CMatrix uh = p.u_t.op * p.witness;
  p.inner_product = inner(uh, p.u_a.op * p.witness);
  p.identity_inner_product = inner(uh, p.witness);
  return p;
}

inline AdjointTrickPair adjoint_trick_pair(const CMatrix& t, const CMatrix& a, std::size_t m,
                                           const ToleranceConfig& tol = {}) {
  return adjoint_trick_pair(t, a, m, CMatrix::basis(t.rows(), 0), tol);
}

}  // namespace otk
