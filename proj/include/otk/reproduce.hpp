#pragma once

#include <string>
#include <vector>

#include "otk/io.hpp"

namespace otk {

/** @brief Built-in example matrices. */
namespace examples {

inline CMatrix example_i_t() { return CMatrix::identity(2) * Complex(1.0 / std::sqrt(2.0)); }

inline CMatrix example_i_a() {
  const double s = 1.0 / std::sqrt(2.0);
  return CMatrix::from_rows({{0.0, -s}, {s, 0.0}});
}

inline CMatrix diag10() { return CMatrix::diag({1.0, 0.0}); }
inline CMatrix diag1half() { return CMatrix::diag({1.0, 0.5}); }

inline CMatrix sample_contraction() { return CMatrix::from_rows({{0.5, Complex(0.2, 0.1)}, {-0.1, Complex(0.3, -0.4)}}); }

/** @brief A_U* T_U for the pair I / sqrt2 and the scaled rotation. */
inline CMatrix halmos_product() { return halmos_pair(example_i_t(), example_i_a()).product; }

}  // namespace examples

struct ReproduceCheck {
  std::string name;
  bool pass = false;
  json value;
  std::string expected;
};

struct ReproduceResult {
  std::string id;
  std::vector<ReproduceCheck> checks;
  json info = json::object();  ///< values reported without a pass/fail judgement

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }

  void add(std::string name, bool ok, json value, std::string expected) {
    checks.push_back({std::move(name), ok, std::move(value), std::move(expected)});
  }

  json to_json() const {
    json cs = json::array();
    for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"expected", c.expected}});
    return {{"id", id}, {"pass", pass()}, {"checks", cs}, {"info", info}};
  }
};

inline const std::vector<std::string>& reproduce_ids() {
  static const std::vector<std::string> ids = {"example-I",    "opposite-signs", "converse-4x4", "epsilon-sharp",
                                               "regular-diag", "ando-negS",      "adjoint-trick", "identity-orth"};
  return ids;
}

namespace detail {

inline double min_real_vertex(const NRPolygon& p) {
  double m = p.vertices.front().real();
  for (Complex z : p.vertices) m = std::min(m, z.real());
  return m;
}

inline double overlap(const CMatrix& w, const CMatrix& e) { return std::abs(inner(w, e)) / vnorm(w); }

inline ReproduceResult reproduce_example_i() {
  ReproduceResult r{"example-I", {}, json::object()};
  const CMatrix t = examples::example_i_t(), a = examples::example_i_a();
  const OrthVerdict bj = is_bj_orthogonal(t, a);
  r.add("T_perp_A", bj.orthogonal == Tri::True, to_string(bj.orthogonal), "true");
  const CMatrix e1 = CMatrix::basis(2, 0);
  r.add("inner_Te1_Ae1", std::abs(inner(t * e1, a * e1)) <= 1e-12, complex_to_json(inner(t * e1, a * e1)), "0");
  const OrthVerdict h = halmos_orth_criterion(t, a);
  r.add("dilations_not_orthogonal", h.orthogonal == Tri::False, to_string(h.orthogonal), "false");
  const double mre = min_real_vertex(nr_boundary(examples::halmos_product(), 256));
  r.add("min_real_part", mre >= 0.5 - 1e-8, mre, ">= 0.5 - 1e-8");
  const HalmosPair hp = halmos_pair(t, a);
  const double eps = epsilon_min(hp.t_block.block, hp.a_block.block);
  r.add("halmos_block_epsilon_min", std::abs(eps - 0.5) <= 1e-4, eps, "0.5 +- 1e-4");
  const KappaReport k = kappa_bound(t, a, 1.0);
  r.add("kappa", std::abs(k.kappa - 0.5) <= 1e-9, k.kappa, "0.5 +- 1e-9");
  r.add("eta0", std::abs(k.eta0 - 1.0 / std::sqrt(2.0)) <= 1e-9, k.eta0, "1/sqrt2 +- 1e-9");
  return r;
}

inline ReproduceResult reproduce_opposite_signs() {
  ReproduceResult r{"opposite-signs", {}, json::object()};
  const double s = 1.0 / std::sqrt(2.0);
  const CMatrix id = CMatrix::identity(2);
  const OrthVerdict opp = halmos_orth_criterion(id * Complex(s), id * Complex(-s));
  r.add("opposite_signs_verdict", opp.orthogonal == Tri::True, to_string(opp.orthogonal), "true");
  const double re = opp.inner_product_at_witness.real();
  r.add("opposite_signs_witness_real_part", opp.witness && std::abs(re + 1.0) <= 1e-6, re, "2 lambda mu = -1 +- 1e-6");
  const OrthVerdict same = halmos_orth_criterion(id * Complex(s), id * Complex(s));
  r.add("same_signs_verdict", same.orthogonal == Tri::False, to_string(same.orthogonal), "false");

  // The same quadratic form with the defects taken as the signed scalars mu I and lambda I.
  const double lam = s, mu = -s;
  auto block = [&](double t, double dt) {
    CMatrix b = CMatrix::zeros(4, 4);
    b.set_block(0, 0, id * Complex(dt));
    b.set_block(0, 2, id * Complex(-t));
    b.set_block(2, 0, id * Complex(t));
    b.set_block(2, 2, id * Complex(dt));
    return b;
  };
  const CMatrix bt = block(lam, mu), ba = block(mu, lam);
  const CMatrix v = CMatrix::basis(4, 0);
  r.info["signed_defect_form_at_x0"] = complex_to_json(inner(bt * v, ba * v));
  r.info["principal_defect_form_min_real_part"] = min_real_vertex(nr_boundary(halmos_pair(id * Complex(lam), id * Complex(mu)).product, 64));
  return r;
}

inline ReproduceResult reproduce_converse() {
  ReproduceResult r{"converse-4x4", {}, json::object()};
  for (double rho : {1.0, 2.0}) {
    const std::string tag = "rho=" + std::to_string(int(rho)) + ":";
    const NilpotentBundle b = nilpotent_rho_example(rho, 16);
    const NilpotentReport& rep = b.report;
    double worst = 0;
    for (double x : rep.residuals_t) worst = std::max(worst, x);
    for (double x : rep.residuals_a) worst = std::max(worst, x);
    r.add(tag + "power_residuals", rep.n_checked >= 4 && worst <= 1e-10, worst, "<= 1e-10 for n <= 4");
    r.add(tag + "maps_bijective", rep.maps_bijective, rep.maps_bijective, "true");
    r.add(tag + "A_perp_T", rep.a_orth_t.orthogonal == Tri::True, to_string(rep.a_orth_t.orthogonal), "true");
    const double ov = rep.a_orth_t.witness ? overlap(*rep.a_orth_t.witness, CMatrix::basis(4, 3)) : 0.0;
    r.add(tag + "witness_e4", ov >= 1.0 - 1e-8, ov, "|<w, e4>| = 1");
    r.add(tag + "T_not_perp_A", rep.t_orth_a.orthogonal == Tri::False, to_string(rep.t_orth_a.orthogonal), "false");
    r.add(tag + "Te1_Ae1", std::abs(rep.te1_ae1 - rho * rho) <= 1e-10, complex_to_json(rep.te1_ae1), "rho^2 +- 1e-10");
    r.add(tag + "zero_in_W_UAstar_UT", rep.dilations_zero.verdict == Tri::True, to_string(rep.dilations_zero.verdict), "true (1e-6)");
  }
  return r;
}

inline ReproduceResult reproduce_epsilon_sharp() {
  ReproduceResult r{"epsilon-sharp", {}, json::object()};
  const CMatrix t = examples::example_i_t(), a = examples::example_i_a();
  const KappaReport k = kappa_bound(t, a, 1.0);
  r.add("kappa", std::abs(k.kappa - 0.5) <= 1e-9, k.kappa, "0.5");
  const DilationWindow wt = schaffer_window(t, 16), wa = schaffer_window(a, 16);
  const double eps = epsilon_min(wt.op, wa.op);
  r.add("window_epsilon_min", std::abs(eps - 0.5) <= 1e-3, eps, "0.5 +- 1e-3");
  bool all_true = true;
  for (double e : {0.5 + 2e-3, 0.6, 0.75, 0.9, 0.99}) all_true = all_true && is_approx_orthogonal(wt.op, wa.op, e) == Tri::True;
  r.add("approx_orthogonal_above_half", all_true, all_true, "true for eps in [1/2, 1)");
  const Tri below = is_approx_orthogonal(wt.op, wa.op, 0.45);
  r.add("not_approx_orthogonal_at_0.45", below == Tri::False, to_string(below), "false");
  return r;
}

inline ReproduceResult reproduce_regular_diag() {
  ReproduceResult r{"regular-diag", {}, json::object()};
  const RegularReport rep = regular_orth_predicate(examples::diag10(), examples::diag1half());
  const std::vector<double> ev = herm_eigvals(rep.brehmer.residual_matrices[2]);
  const bool ev_ok = ev.size() == 2 && std::abs(ev[0] - 0.75) <= 1e-10 && std::abs(ev[1]) <= 1e-10;
  r.add("brehmer_pair_residual_eigenvalues", ev_ok, ev, "{0.75, 0} +- 1e-10");
  const CMatrix expect = CMatrix::diag({0.0, 0.75});
  r.add("brehmer_pair_residual_matrix", (rep.brehmer.residual_matrices[2] - expect).max_abs() <= 1e-12,
        matrix_to_json(rep.brehmer.residual_matrices[2]), "diag(0, 3/4)");
  r.add("brehmer_passes", rep.brehmer.passes, rep.brehmer.passes, "true");
  r.add("zero_in_classical_range", rep.classical_zero.verdict == Tri::True, to_string(rep.classical_zero.verdict), "true");
  const double ov = rep.classical_witness ? overlap(*rep.classical_witness, CMatrix::basis(2, 1)) : 0.0;
  r.add("classical_witness_e2", ov >= 1.0 - 1e-8, ov, "|<w, e2>| = 1");
  r.add("T1_not_perp_T2", rep.bj.orthogonal == Tri::False, to_string(rep.bj.orthogonal), "false");
  r.info["zero_in_maximal_range"] = to_string(rep.maximal_zero.verdict);
  r.info["predicate"] = to_string(rep.predicate);
  return r;
}

inline ReproduceResult reproduce_ando_negs() {
  ReproduceResult r{"ando-negS", {}, json::object()};
  const CMatrix t = CMatrix::from_rows({{0.9, 0.1}, {0.0, 0.3}});
  const CMatrix s = CMatrix::identity(2) * Complex(-1.0);
  const AndoBundle b = ando_pair(t, s, 13);
  r.add("witness_exists", b.witness.has_value(), b.witness.has_value(), "true");
  if (b.witness) {
    const AndoWitness& w = *b.witness;
    r.add("beta", std::abs(w.beta + 1.0) <= 1e-9, w.beta, "-1");
    r.add("eta_zeta", std::abs(w.eta - 1.0 / std::sqrt(2.0)) <= 1e-9 && std::abs(w.zeta - 1.0 / std::sqrt(2.0)) <= 1e-9,
          json::array({w.eta, w.zeta}), "1/sqrt2, 1/sqrt2");
    r.add("witness_inner_product", std::abs(w.inner_product) <= 1e-7, std::abs(w.inner_product), "<= 1e-7");
  }
  const double res = std::max({b.isometry_residual_t, b.isometry_residual_a, b.commutation_residual, b.max_dilation_residual()});
  r.add("dilation_residuals", res <= 1e-8, res, "<= 1e-8");
  const Tri ta = is_bj_orthogonal(t, -t).orthogonal, at = is_bj_orthogonal(-t, t).orthogonal;
  r.add("T_not_perp_minus_T", ta == Tri::False, to_string(ta), "false");
  r.add("minus_T_not_perp_T", at == Tri::False, to_string(at), "false");
  const Tri st = schaffer_ST_criterion(t, s).orthogonal;
  r.add("st_criterion", st == Tri::True, to_string(st), "true");
  return r;
}

inline ReproduceResult reproduce_adjoint_trick() {
  ReproduceResult r{"adjoint-trick", {}, json::object()};
  const CMatrix t = examples::sample_contraction();
  const CMatrix a = CMatrix::from_rows({{0.7, 0.0}, {Complex(0.1, 0.2), -0.4}});
  const AdjointTrickPair p = adjoint_trick_pair(t, a, 8);
  r.add("witness_inner_product", std::abs(p.inner_product) <= 1e-9, std::abs(p.inner_product), "<= 1e-9");
  r.add("witness_unit", std::abs(vnorm(p.witness) - 1.0) <= 1e-12, vnorm(p.witness), "1");
  const PowerDilationReport pa = verify_power_dilation(p.u_a, a, p.u_a.valid_powers);
  r.add("U_A_dilates_A", pa.max_residual() <= 1e-9, pa.max_residual(), "<= 1e-9");
  r.add("U_A_unitary", unitarity_residual(p.u_a.op) <= 1e-9, unitarity_residual(p.u_a.op), "<= 1e-9");
  const Tri plain = halmos_orth_criterion(t, a).orthogonal;
  r.info["plain_schaffer_pair"] = to_string(plain);
  r.info["T_perp_A"] = to_string(is_bj_orthogonal(t, a).orthogonal);
  return r;
}

inline ReproduceResult reproduce_identity_orth() {
  ReproduceResult r{"identity-orth", {}, json::object()};
  const CMatrix t = examples::sample_contraction();
  const AdjointTrickPair p = adjoint_trick_pair(t, CMatrix::identity(2), 8);
  r.add("inner_UTh_h", std::abs(p.identity_inner_product) <= 1e-9, std::abs(p.identity_inner_product), "<= 1e-9");
  const Tri v = is_bj_orthogonal(p.u_t.op, CMatrix::identity(p.u_t.op.rows())).orthogonal;
  r.add("U_T_perp_identity", v == Tri::True, to_string(v), "true");
  return r;
}

}  // namespace detail

inline ReproduceResult reproduce(const std::string& id) {
  if (id == "example-I") return detail::reproduce_example_i();
  if (id == "opposite-signs") return detail::reproduce_opposite_signs();
  if (id == "converse-4x4") return detail::reproduce_converse();
  if (id == "epsilon-sharp") return detail::reproduce_epsilon_sharp();
  if (id == "regular-diag") return detail::reproduce_regular_diag();
  if (id == "ando-negS") return detail::reproduce_ando_negs();
  if (id == "adjoint-trick") return detail::reproduce_adjoint_trick();
  if (id == "identity-orth") return detail::reproduce_identity_orth();
  std::string list;
  for (const auto& s : reproduce_ids()) list += (list.empty() ? "" : ", ") + s;
  throw InputError("unknown example id '" + id + "' (known: " + list + ")");
}

}  // namespace otk
