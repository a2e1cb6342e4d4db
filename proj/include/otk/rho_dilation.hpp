#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "otk/attainment.hpp"
#include "otk/bj_orth.hpp"
#include "otk/schaffer.hpp"

namespace otk {

/**
 * @brief A bijection of the integer interval [lo, hi], images leaving the interval re-enter cyclically.
 */
struct PermutationSpec {
  int lo = 0;
  int hi = -1;
  std::vector<int> images;  ///< images[k] is the image of lo + k
  std::string label;

  int size() const { return hi - lo + 1; }
  int operator()(int m) const { return images.at(std::size_t(m - lo)); }

  bool is_bijection() const {
    std::vector<char> hit(std::size_t(size()), 0);
    for (int v : images) {
      if (v < lo || v > hi || hit[std::size_t(v - lo)]) return false;
      hit[std::size_t(v - lo)] = 1;
    }
    return true;
  }
};

namespace detail {

// Index maps on all of Z used by the nilpotent example.
inline int shift_f(int m) {
  switch (m) {
    case -1: return 4;
    case 0: return 1;
    case 1: return 2;
    case 2: return 5;
    case 3: return 6;
    case 4: return 3;
    default: return m + 2;
  }
}

inline int shift_g(int m) {
  switch (m) {
    case -2: return 4;
    case -1: return 3;
    case 0: return 1;
    case 1: return 2;
    default: return m + 3;
  }
}

struct IndexWindow {
  int kmin = 0, kmax = 0;  ///< slot k holds indices 4k+1 .. 4k+4
  int lo() const { return 4 * kmin + 1; }
  int hi() const { return 4 * kmax + 4; }
};

inline int floor_div(int a, int b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }
inline int ceil_div(int a, int b) { return -floor_div(-a, b); }

inline IndexWindow index_window(int window) { return {floor_div(-window - 1, 4), ceil_div(window - 4, 4)}; }

template <class F>
PermutationSpec wrapped_spec(F f, const IndexWindow& iw, std::string label) {
  PermutationSpec s;
  s.lo = iw.lo();
  s.hi = iw.hi();
  s.label = std::move(label);
  const int len = s.size();
  for (int m = s.lo; m <= s.hi; ++m) s.images.push_back(s.lo + ((f(m) - s.lo) % len + len) % len);
  return s;
}

// Largest n for which the orbits of 1..4 never needed the wrap in steps 1..n.
template <class F>
int unwrapped_steps(F f, const IndexWindow& iw, int cap) {
  int best = cap;
  for (int e = 1; e <= 4; ++e) {
    int m = e;
    for (int n = 1; n <= cap; ++n) {
      m = f(m);
      if (m < iw.lo() || m > iw.hi()) {
        best = std::min(best, n - 1);
        break;
      }
    }
  }
  return best;
}

}  // namespace detail

inline PermutationSpec permutation_f(int window) {
  return detail::wrapped_spec(detail::shift_f, detail::index_window(window), "f");
}
inline PermutationSpec permutation_g(int window) {
  return detail::wrapped_spec(detail::shift_g, detail::index_window(window), "g");
}

/** @brief Permutation unitary U phi_m = phi_{p(m)} as a window with C^4 at slot 0. */
inline DilationWindow permutation_window(const PermutationSpec& p, double rho, int valid_powers) {
  if (!p.is_bijection()) throw PreconditionError("permutation_window: map " + p.label + " is not a bijection");
  if (((p.lo - 1) % 4 + 4) % 4 != 0 || p.size() % 4 != 0) throw InputError("permutation_window: range must consist of whole slots");
  DilationWindow w;
  w.slot_dim = 4;
  w.slots = std::size_t(p.size() / 4);
  w.home = std::size_t((1 - p.lo) / 4);
  w.rho = rho;
  w.valid_powers = valid_powers;
  w.kind = "permutation-" + p.label;
  w.op = CMatrix::zeros(std::size_t(p.size()), std::size_t(p.size()));
  for (int m = p.lo; m <= p.hi; ++m) w.op(std::size_t(p(m) - p.lo), std::size_t(m - p.lo)) = 1.0;
  return w;
}

/** @brief Quantities of the approximate-orthogonality bound for rho-dilations. */
struct KappaReport {
  double rho = 1;
  double eta1 = 0, eta2 = 0, eta0 = 0;
  double kappa = 0;
  CMatrix attaining_t;  ///< unit x in H0(T) minimising |Ax|
  CMatrix attaining_tstar;
};

namespace detail {

struct EtaValue {
  double eta = 0;
  CMatrix vector;
};

inline EtaValue eta_of(const CMatrix& t, const CMatrix& a, double rho, const ToleranceConfig& tol) {
  const CMatrix m = op_norm(t) == 0.0 ? CMatrix::identity(t.cols()) : norm_attainment_basis(t, tol).basis;
  HermEig e = herm_eig(m.adjoint() * a.adjoint() * a * m, tol);
  const double lmin = std::max(0.0, e.values.back());
  return {std::sqrt(std::clamp(1.0 - lmin / (rho * rho), 0.0, 1.0)), m * e.vectors.col(e.vectors.cols() - 1)};
}

}  // namespace detail

inline KappaReport kappa_bound(const CMatrix& t, const CMatrix& a, double rho, const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, a, "kappa_bound");
  detail::require_square(t, "kappa_bound");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("kappa_bound: rho must be positive");
  const double nt = op_norm(t), na = op_norm(a);
  const double lim = rho * (1.0 + tol.structural_tol);
  if (nt > lim || na > lim) throw PreconditionError("kappa_bound: outside the necessary condition |T|, |A| <= rho");
  KappaReport k;
  k.rho = rho;
  const auto e1 = detail::eta_of(t, a, rho, tol);
  const auto e2 = detail::eta_of(t.adjoint(), a.adjoint(), rho, tol);
  k.eta1 = e1.eta;
  k.eta2 = e2.eta;
  k.attaining_t = e1.vector;
  k.attaining_tstar = e2.vector;
  k.eta0 = std::min(k.eta1, k.eta2);
  k.kappa = std::clamp(k.eta0 * std::sqrt(std::clamp(1.0 - nt * nt / (rho * rho), 0.0, 1.0)), 0.0, 1.0);
  return k;
}

/** @brief |Tx - rho U x|^2 - (rho^2 - |Tx|^2) for a unit x of H placed at the home slot. */
inline double norm_identity_residual(const DilationWindow& w, const CMatrix& t, const CMatrix& x) {
  const CMatrix tx = t * x;
  const CMatrix diff = w.embed(tx, 0) - (w.op * w.embed(x, 0)) * Complex(w.rho);
  const double lhs = std::pow(vnorm(diff), 2);
  const double rhs = w.rho * w.rho - std::pow(vnorm(tx), 2);
  return lhs - rhs;
}

/** @brief Checks of the nilpotent 4x4 example. */
struct NilpotentReport {
  std::vector<double> residuals_t;  ///< n = 1..n_checked
  std::vector<double> residuals_a;
  int n_checked = 0;
  bool maps_bijective = false;
  OrthVerdict a_orth_t;
  OrthVerdict t_orth_a;
  Complex te1_ae1{};  ///< <T e1, A e1>
  Complex ae4_te4{};  ///< <A e4, T e4>
  Membership dilations_zero;  ///< 0 in W(U_A* U_T)
};

struct NilpotentBundle {
  double rho = 1;
  int window = 0;
  CMatrix t;
  CMatrix a;
  PermutationSpec spec_f;
  PermutationSpec spec_g;
  DilationWindow u_t;  ///< from g
  DilationWindow u_a;  ///< from f
  NilpotentReport report;
};

inline CMatrix nilpotent_t(double rho) {
  CMatrix t = CMatrix::zeros(4, 4);
  t(1, 0) = rho;
  return t;
}

inline CMatrix nilpotent_a(double rho) {
  CMatrix a = CMatrix::zeros(4, 4);
  a(1, 0) = rho;
  a(2, 3) = rho;
  return a;
}

inline NilpotentBundle nilpotent_rho_example(double rho, int window, const ToleranceConfig& tol = {}) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("nilpotent_rho_example: rho must be positive");
  if (window < 12) throw WindowSizeError("nilpotent_rho_example: the index window must reach -12..12", 12);
  NilpotentBundle b;
  b.rho = rho;
  b.window = window;
  b.t = nilpotent_t(rho);
  b.a = nilpotent_a(rho);
  const auto iw = detail::index_window(window);
  b.spec_f = permutation_f(window);
  b.spec_g = permutation_g(window);
  const int cap = 4 * (iw.kmax - iw.kmin + 1);
  b.u_a = permutation_window(b.spec_f, rho, detail::unwrapped_steps(detail::shift_f, iw, cap));
  b.u_t = permutation_window(b.spec_g, rho, detail::unwrapped_steps(detail::shift_g, iw, cap));

  NilpotentReport& r = b.report;
  r.maps_bijective = b.spec_f.is_bijection() && b.spec_g.is_bijection();
  r.n_checked = std::min({4, b.u_a.valid_powers, b.u_t.valid_powers});
  auto rt = verify_power_dilation(b.u_t, b.t, r.n_checked).residuals;
  auto ra = verify_power_dilation(b.u_a, b.a, r.n_checked).residuals;
  r.residuals_t.assign(rt.begin() + 1, rt.end());
  r.residuals_a.assign(ra.begin() + 1, ra.end());
  r.a_orth_t = is_bj_orthogonal(b.a, b.t, tol);
  r.t_orth_a = is_bj_orthogonal(b.t, b.a, tol);
  const CMatrix e1 = CMatrix::basis(4, 0), e4 = CMatrix::basis(4, 3);
  r.te1_ae1 = inner(b.t * e1, b.a * e1);
  r.ae4_te4 = inner(b.a * e4, b.t * e4);
  r.dilations_zero =
      contains_point_adaptive(nr_boundary(b.u_a.op.adjoint() * b.u_t.op, 64), 0.0, 1e-6).first;
  return b;
}

/** @brief Does orthogonality of T, A transfer to the given rho-dilations? */
struct RhoTransferReport {
  OrthVerdict t_orth_a;
  bool norm_equals_rho = false;
  std::vector<double> identity_residuals;  ///< one per basis vector of M_T
  Membership dilations_zero;                ///< 0 in W(U_A* U_T)
  Membership dilations_zero_reversed;       ///< 0 in W(U_T* U_A)
  double window_epsilon = 0;
  KappaReport kappa;
  bool epsilon_within_kappa = false;
  double dilation_residual_t = 0;
  double dilation_residual_a = 0;
};

inline RhoTransferReport rho_orth_transfer_check(const CMatrix& t, const CMatrix& a, double rho, const DilationWindow& u_t,
                                                 const DilationWindow& u_a, const ToleranceConfig& tol = {}) {
  detail::require_same_shape(t, a, "rho_orth_transfer_check");
  if (u_t.slots != u_a.slots || u_t.slot_dim != u_a.slot_dim || u_t.home != u_a.home)
    throw InputError("rho_orth_transfer_check: window geometry mismatch");
  if (u_t.slot_dim != t.rows()) throw InputError("rho_orth_transfer_check: windows do not match the base space");
  RhoTransferReport r;
  const int n = std::min({4, u_t.valid_powers, u_a.valid_powers});
  DilationWindow wt = u_t, wa = u_a;
  wt.rho = wa.rho = rho;
  r.dilation_residual_t = verify_power_dilation(wt, t, n).max_residual();
  r.dilation_residual_a = verify_power_dilation(wa, a, n).max_residual();
  if (r.dilation_residual_t > 1e-7 || r.dilation_residual_a > 1e-7)
    throw PreconditionError("rho_orth_transfer_check: windows are not rho-dilations of T and A");
  r.t_orth_a = is_bj_orthogonal(t, a, tol);
  const double nt = op_norm(t);
  r.norm_equals_rho = std::abs(nt - rho) <= tol.verdict_tol * std::max(1.0, rho);
  if (nt > 0.0) {
    const NormAttainmentBasis nb = norm_attainment_basis(t, tol);
    for (std::size_t k = 0; k < nb.basis.cols(); ++k) r.identity_residuals.push_back(norm_identity_residual(wt, t, nb.basis.col(k)));
  }
  const CMatrix prod = u_a.op.adjoint() * u_t.op;
  r.dilations_zero = contains_point_adaptive(nr_boundary(prod, 64), 0.0, 1e-6).first;
  r.dilations_zero_reversed = contains_point_adaptive(nr_boundary(prod.adjoint(), 64), 0.0, 1e-6).first;
  r.window_epsilon = epsilon_min(u_t.op, u_a.op, tol);
  r.kappa = kappa_bound(t, a, rho, tol);
  r.epsilon_within_kappa = r.window_epsilon <= r.kappa.kappa + 1e-3;
  return r;
}

}  // namespace otk
