#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "otk/io.hpp"
#include "otk/random.hpp"

namespace otk {

/** @brief Random inputs shared by the property suites, the acceptance run and the CLI. */
namespace sample {

inline std::size_t pick_dim(Rng& rng, const std::vector<int>& dims) {
  if (dims.empty()) throw InputError("sample: empty dimension list");
  return std::size_t(dims[std::size_t(rng.integer(0, int(dims.size()) - 1))]);
}

inline CMatrix clamp_to_contraction(CMatrix a) {
  const double n = op_norm(a);
  return n > 1.0 ? a / Complex(n * (1.0 + 1e-12)) : a;
}

/** @brief A with <T x, A x> = 0 for a unit x attaining the norm of T. */
inline CMatrix orthogonal_partner(Rng& rng, const CMatrix& t, double norm_hi = 1.0) {
  const NormAttainmentBasis nb = norm_attainment_basis(t);
  const CMatrix x = nb.basis.cols() > 1 ? normalized(nb.basis * rng.unit_vector(nb.basis.cols())) : nb.basis.col(0);
  return clamp_to_contraction(project_orthogonal(t, rng.with_norm(t.rows(), rng.uniform(0.2, norm_hi)), x));
}

struct Pair {
  CMatrix t, a;
  int family = 0;
};

inline const char* family_name(int f) {
  switch (f) {
    case 0: return "gaussian";
    case 1: return "near-opposite";
    case 2: return "projected";
    default: return "rotated-negative";
  }
}

/** @brief Contraction pairs cycling through four families so that both verdicts occur. */
inline Pair contraction_pair(Rng& rng, std::size_t d, int family) {
  Pair p;
  p.family = family % 4;
  switch (p.family) {
    case 0:
      p.t = rng.contraction(d);
      p.a = rng.contraction(d);
      break;
    case 1:
      p.t = rng.contraction(d, 0.6, 1.0);
      p.a = clamp_to_contraction(-p.t + rng.gaussian(d, d) * Complex(0.3 * rng.uniform()));
      break;
    case 2:
      p.t = rng.with_norm(d, 1.0);
      p.a = orthogonal_partner(rng, p.t);
      break;
    default:
      p.t = rng.contraction(d);
      p.a = rng.unitary(d) * p.t * Complex(-1.0);
      break;
  }
  return p;
}

/** @brief Unit-norm T with a contraction A orthogonal to it. */
inline Pair unit_orthogonal_pair(Rng& rng, std::size_t d) {
  Pair p;
  p.t = rng.with_norm(d, 1.0);
  p.a = orthogonal_partner(rng, p.t);
  p.family = 2;
  return p;
}

/** @brief Orthogonal pair of contractions with norms in (lo, hi). */
inline Pair orthogonal_pair(Rng& rng, std::size_t d, double lo = 0.3, double hi = 0.95) {
  Pair p;
  p.t = rng.with_norm(d, rng.uniform(lo, hi));
  p.a = orthogonal_partner(rng, p.t, hi);
  return p;
}

/** @brief Unitary S and a contraction T commuting with it (T block diagonal on the eigenspaces of S). */
inline std::pair<CMatrix, CMatrix> commuting_pair(Rng& rng, std::size_t d) {
  const CMatrix v = rng.unitary(d);
  const std::size_t p = std::size_t(rng.integer(1, int(d)));
  const Complex s1 = rng.unimodular(), s2 = rng.unimodular();
  std::vector<Complex> sd(d);
  for (std::size_t i = 0; i < d; ++i) sd[i] = i < p ? s1 : s2;
  CMatrix core = CMatrix::zeros(d, d);
  core.set_block(0, 0, rng.gaussian(p, p));
  if (p < d) core.set_block(p, p, rng.gaussian(d - p, d - p));
  CMatrix t = v * core * v.adjoint();
  t = t * Complex(rng.uniform(0.3, 1.0) / op_norm(t));
  return {v * CMatrix::diag(sd) * v.adjoint(), t};
}

inline GeneralizedParams random_params(Rng& rng, std::size_t d, std::size_t m) {
  GeneralizedParams p;
  p.u1 = rng.unitary(d);
  p.u2 = rng.unitary(d);
  for (std::size_t k = 0; k < GeneralizedParams::x_length(m); ++k) p.x_seq.push_back(rng.unitary(d));
  for (std::size_t k = 0; k < GeneralizedParams::y_length(m); ++k) p.y_seq.push_back(rng.unitary(d));
  return p;
}

}  // namespace sample

/** @brief Pass counts of one property over the trials of a suite. */
struct PropertyResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  double worst = 0;              ///< largest residual seen
  std::vector<json> failures;    ///< offending inputs, at most max_dumps

  static constexpr std::size_t max_dumps = 5;

  bool ok() const { return failed == 0; }

  json to_json() const {
    return {{"name", name}, {"passed", passed}, {"failed", failed}, {"skipped", skipped}, {"worst", worst}, {"failures", failures}};
  }
};

struct SuiteConfig {
  int trials = 100;
  std::uint64_t seed = 7;
  std::vector<int> dims = {2, 3, 4};

  void validate() const {
    if (trials < 1) throw InputError("property suite: trials must be at least 1");
    if (dims.empty()) throw InputError("property suite: empty dimension list");
    for (int d : dims)
      if (d < 1 || d > 16) throw InputError("property suite: dimensions must lie in 1..16");
  }
};

struct SuiteResult {
  std::string suite;
  SuiteConfig config;
  std::vector<PropertyResult> properties;

  bool ok() const {
    for (const auto& p : properties)
      if (!p.ok()) return false;
    return true;
  }

  json to_json() const {
    json props = json::array();
    for (const auto& p : properties) props.push_back(p.to_json());
    return {{"suite", suite}, {"trials", config.trials}, {"seed", config.seed}, {"dims", config.dims}, {"properties", props}, {"pass", ok()}};
  }
};

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, const std::string& property, int trial) {
  std::uint64_t h = splitmix(master);
  for (unsigned char c : property) h = splitmix(h ^ c);
  return splitmix(h ^ std::uint64_t(trial));
}

enum class Outcome { Pass, Fail, Skip };

struct TrialResult {
  Outcome outcome = Outcome::Pass;
  double residual = 0;
  json inputs;  ///< recorded on failure
};

inline TrialResult pass(double r = 0) { return {Outcome::Pass, r, {}}; }
inline TrialResult skip() { return {Outcome::Skip, 0, {}}; }
inline TrialResult check(bool ok, double r, json inputs) { return {ok ? Outcome::Pass : Outcome::Fail, r, std::move(inputs)}; }

inline json dump_pair(const CMatrix& t, const CMatrix& a) { return {{"T", matrix_to_json(t)}, {"A", matrix_to_json(a)}}; }

using Trial = std::function<TrialResult(Rng&, std::size_t)>;

inline PropertyResult run_property(const std::string& name, const SuiteConfig& cfg, int trials, const Trial& trial) {
  PropertyResult r;
  r.name = name;
  for (int k = 0; k < trials; ++k) {
    Rng rng(trial_seed(cfg.seed, name, k));
    const std::size_t d = sample::pick_dim(rng, cfg.dims);
    TrialResult t;
    try {
      t = trial(rng, d);
    } catch (const Error& e) {
      t = {Outcome::Fail, 0, json{{"error", e.what()}, {"trial", k}}};
    }
    r.worst = std::max(r.worst, t.residual);
    if (t.outcome == Outcome::Pass) ++r.passed;
    if (t.outcome == Outcome::Skip) ++r.skipped;
    if (t.outcome == Outcome::Fail) {
      ++r.failed;
      if (r.failures.size() < PropertyResult::max_dumps) {
        t.inputs["trial"] = k;
        r.failures.push_back(std::move(t.inputs));
      }
    }
  }
  return r;
}

inline bool decided(Tri t) { return t != Tri::Inconclusive; }

}  // namespace detail

inline SuiteResult run_bj_suite(const SuiteConfig& cfg) {
  using namespace detail;
  SuiteResult s{"bj", cfg, {}};
  const int n = cfg.trials;

  s.properties.push_back(run_property("homogeneity", cfg, n, [](Rng& rng, std::size_t d) {
    const sample::Pair p = rng.uniform() < 0.5 ? sample::orthogonal_pair(rng, d) : sample::Pair{rng.contraction(d), rng.contraction(d)};
    const Complex alpha = rng.cnormal() * 3.0 + 0.1, beta = rng.cnormal() * 3.0 + 0.1;
    const Tri v1 = is_bj_orthogonal(p.t, p.a).orthogonal, v2 = is_bj_orthogonal(p.t * alpha, p.a * beta).orthogonal;
    if (!decided(v1) || !decided(v2)) return skip();
    return check(v1 == v2, 0, dump_pair(p.t, p.a));
  }));

  s.properties.push_back(run_property("grid_oracle_agreement", cfg, n, [](Rng& rng, std::size_t d) {
    const sample::Pair p = rng.uniform() < 0.5 ? sample::orthogonal_pair(rng, d) : sample::Pair{rng.contraction(d), rng.contraction(d)};
    const OrthVerdict v = is_bj_orthogonal(p.t, p.a);
    if (!decided(v.orthogonal)) return skip();
    const GridMinimum g = bj_grid_oracle(p.t, p.a);
    const bool oracle = g.min_norm >= op_norm(p.t) - 1e-6;
    return check(oracle == (v.orthogonal == Tri::True), 0, dump_pair(p.t, p.a));
  }));

  s.properties.push_back(run_property("extension_transfer", cfg, n, [](Rng& rng, std::size_t d) {
    const sample::Pair p = sample::orthogonal_pair(rng, d);
    const std::size_t pad = std::size_t(rng.integer(1, 3));
    const CMatrix x = rng.with_norm(pad, rng.uniform(0.1, 2.0));
    const Tri v = is_bj_orthogonal(norm_preserving_extension(p.t, int(pad)), direct_sum(p.a, x)).orthogonal;
    json dump = dump_pair(p.t, p.a);
    dump["X"] = matrix_to_json(x);
    return check(v == Tri::True, 0, dump);
  }));

  s.properties.push_back(run_property("selfadjoint_power_norms", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.hermitian(d);
    const double nt = op_norm(t);
    double worst = 0;
    for (int k = 1; k <= 5; ++k) worst = std::max(worst, std::abs(op_norm(mpow(t, k)) - std::pow(nt, k)) / std::pow(nt, k));
    return check(worst <= 1e-8, worst, json{{"T", matrix_to_json(t)}});
  }));

  s.properties.push_back(run_property("odd_power_transfer", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.hermitian(d);
    const CMatrix x = norm_attainment_basis(t).basis.col(0);
    const CMatrix a = project_orthogonal(t, rng.gaussian(d, d), x);
    if (is_bj_orthogonal(t, a).orthogonal != Tri::True) return skip();
    bool ok = true;
    for (int k = 0; k <= 2; ++k) ok = ok && is_bj_orthogonal(mpow(t, 2 * k + 1), a).orthogonal == Tri::True;
    return check(ok, 0, dump_pair(t, a));
  }));

  s.properties.push_back(run_property("even_power_transfer", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.hermitian(d);
    const CMatrix x = norm_attainment_basis(t).basis.col(0);
    // Remove the component of Ax along span{Tx, T^2 x}.
    CMatrix a = rng.gaussian(d, d);
    CMatrix q1 = normalized(t * x);
    CMatrix q2 = t * t * x;
    q2 = q2 - q1 * inner(q2, q1);
    const CMatrix ax = a * x;
    CMatrix proj = q1 * inner(ax, q1);
    if (vnorm(q2) > 1e-8) {
      q2 = normalized(q2);
      proj = proj + q2 * inner(ax, q2);
    }
    a = a - proj * x.adjoint();
    if (is_bj_orthogonal(t, a).orthogonal != Tri::True || is_bj_orthogonal(t * t, a).orthogonal != Tri::True) return skip();
    bool ok = true;
    for (int k = 1; k <= 2; ++k) ok = ok && is_bj_orthogonal(mpow(t, 2 * k), a).orthogonal == Tri::True;
    return check(ok, 0, dump_pair(t, a));
  }));

  s.properties.push_back(run_property("defect_power_orthogonality", cfg, n, [](Rng& rng, std::size_t d) {
    if (d < 2) return skip();
    std::vector<double> sv(d);
    for (std::size_t i = 0; i + 1 < d; ++i) sv[i] = rng.uniform(0.2, 1.0);
    sv[d - 1] = 0.0;
    const CMatrix t = rng.with_singular_values(sv);
    const CMatrix dt = defect_pair(t).d_t;
    bool ok = true;
    for (int k = 1; k <= 3; ++k)
      for (int j = 1; j <= 3; ++j) ok = ok && is_bj_orthogonal(mpow(dt, k), mpow(t, j)).orthogonal == Tri::True;
    return check(ok, 0, json{{"T", matrix_to_json(t)}});
  }));

  s.properties.push_back(run_property("epsilon_grid_agreement", cfg, std::min(n, 30), [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.contraction(d), a = rng.contraction(d);
    const double diff = std::abs(epsilon_min(t, a) - approx_grid_oracle(t, a));
    return check(diff <= 1e-4, diff, dump_pair(t, a));
  }));
  return s;
}

/** @brief Windowed epsilon_min of two Schaffer windows. */
inline double window_epsilon(const CMatrix& t, const CMatrix& a, std::size_t m) {
  return epsilon_min(schaffer_window(t, m).op, schaffer_window(a, m).op);
}

/** @brief One trial of the Halmos-block equivalence check. */
struct EquivalenceTrial {
  sample::Pair pair;
  Tri blocks = Tri::Inconclusive;     ///< is_bj_orthogonal on the two Halmos blocks
  Tri criterion = Tri::Inconclusive;  ///< halmos_orth_criterion
  double distance_floor = 0;
  double window_eps = -1;  ///< computed when the criterion is decided and window_m > 0
  bool window_ok = true;   ///< window epsilon consistent with the criterion
};

inline EquivalenceTrial equivalence_trial(const sample::Pair& p, std::size_t window_m, const ToleranceConfig& tol = {}) {
  EquivalenceTrial e;
  e.pair = p;
  const HalmosPair hp = halmos_pair(p.t, p.a, tol);
  e.blocks = is_bj_orthogonal(hp.t_block.block, hp.a_block.block, tol).orthogonal;
  const OrthVerdict c = halmos_orth_criterion(p.t, p.a, tol);
  e.criterion = c.orthogonal;
  e.distance_floor = c.residuals.at("distance_floor");
  if (window_m > 0 && e.criterion != Tri::Inconclusive) {
    e.window_eps = window_epsilon(p.t, p.a, window_m);
    e.window_ok = e.criterion == Tri::True ? e.window_eps <= 1e-3 : e.window_eps >= 0.5 * e.distance_floor;
  }
  return e;
}

inline SuiteResult run_schaffer_suite(const SuiteConfig& cfg) {
  using namespace detail;
  SuiteResult s{"schaffer", cfg, {}};
  const int n = cfg.trials;
  int counter = 0;

  s.properties.push_back(run_property("halmos_equivalence", cfg, n, [&counter](Rng& rng, std::size_t d) {
    const sample::Pair p = sample::contraction_pair(rng, d, counter++);
    const EquivalenceTrial e = equivalence_trial(p, 0);
    if (!decided(e.blocks) || !decided(e.criterion)) return skip();
    json dump = dump_pair(p.t, p.a);
    dump["family"] = sample::family_name(p.family);
    // Only blocks => criterion holds in general: W(A_U* T_U) can meet the negative reals without containing 0.
    return check(e.blocks != Tri::True || e.criterion == Tri::True, 0, dump);
  }));

  s.properties.push_back(run_property("window_consistency", cfg, std::min(n, 20), [&counter](Rng& rng, std::size_t d) {
    const sample::Pair p = sample::contraction_pair(rng, std::min<std::size_t>(d, 3), counter++);
    const EquivalenceTrial e = equivalence_trial(p, 12);
    if (!decided(e.criterion)) return skip();
    json dump = dump_pair(p.t, p.a);
    dump["family"] = sample::family_name(p.family);
    return check(e.window_ok, e.window_eps, dump);
  }));

  s.properties.push_back(run_property("halmos_block_unitary", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.contraction(d);
    const HalmosBlock b = halmos_block(t), f = halmos_block(t, true);
    const double r = std::max({b.unitarity_residual, f.unitarity_residual, b.intertwining_residual});
    return check(r <= 1e-9, r, json{{"T", matrix_to_json(t)}});
  }));

  s.properties.push_back(run_property("schaffer_power_dilation", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.contraction(d);
    const PowerDilationReport r = verify_power_dilation(schaffer_window(t, 8), t, 6);
    return check(r.max_residual() <= 1e-9, r.max_residual(), json{{"T", matrix_to_json(t)}});
  }));

  s.properties.push_back(run_property("generalized_power_dilation", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.contraction(d);
    const GeneralizedParams prm = sample::random_params(rng, d, 8);
    const PowerDilationReport r = verify_power_dilation(generalized_schaffer(t, prm, 8), t, 6);
    return check(r.max_residual() <= 1e-9, r.max_residual(), json{{"T", matrix_to_json(t)}});
  }));

  s.properties.push_back(run_property("forced_pair_witness", cfg, n, [](Rng& rng, std::size_t d) {
    if (d < 2) return skip();
    const CMatrix t = rng.contraction(d);
    const CMatrix a = rng.uniform() < 0.25 ? t : rng.contraction(d);
    const int k0 = rng.uniform() < 0.5 ? 2 : -1;
    const ForcedPair f = forced_orthogonal_pair(t, a, 8, k0);
    const double r = std::abs(f.inner_product);
    return check(r <= 1e-12, r, dump_pair(t, a));
  }));

  s.properties.push_back(run_property("hat_pair_witness", cfg, std::min(n, 20), [](Rng& rng, std::size_t d) {
    const sample::Pair p = sample::orthogonal_pair(rng, std::min<std::size_t>(d, 3));
    const HatPair h = hat_pair(p.t, p.a, 6, 6);
    const double r = std::abs(h.inner_product);
    return check(r <= 1e-7, r, dump_pair(p.t, p.a));
  }));
  return s;
}

inline SuiteResult run_rho_suite(const SuiteConfig& cfg) {
  using namespace detail;
  SuiteResult s{"rho", cfg, {}};
  const int n = cfg.trials;

  s.properties.push_back(run_property("unit_norm_transfer", cfg, n, [](Rng& rng, std::size_t d) {
    const sample::Pair p = sample::unit_orthogonal_pair(rng, d);
    const Tri v = halmos_orth_criterion(p.t, p.a).orthogonal;
    if (!decided(v)) return skip();
    return check(v == Tri::True, 0, dump_pair(p.t, p.a));
  }));

  s.properties.push_back(run_property("norm_identity", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.uniform() < 0.5 ? rng.with_norm(d, 1.0) : rng.contraction(d);
    const DilationWindow w = schaffer_window(t, 8);
    const NormAttainmentBasis nb = norm_attainment_basis(t);
    double worst = 0;
    for (std::size_t k = 0; k < nb.basis.cols(); ++k) worst = std::max(worst, std::abs(norm_identity_residual(w, t, nb.basis.col(k))));
    worst = std::max(worst, std::abs(norm_identity_residual(w, t, rng.unit_vector(d))));
    return check(worst <= 1e-8, worst, json{{"T", matrix_to_json(t)}});
  }));

  s.properties.push_back(run_property("kappa_zero_at_full_norm", cfg, n, [](Rng& rng, std::size_t d) {
    const double rho = rng.uniform(0.5, 3.0);
    const CMatrix t = rng.with_norm(d, rho);
    const CMatrix a = rng.with_norm(d, rng.uniform(0.1, rho));
    const KappaReport k = kappa_bound(t, a, rho);
    const bool in_range = k.eta0 >= 0 && k.eta0 <= 1 && k.eta0 == std::min(k.eta1, k.eta2);
    return check(in_range && k.kappa <= 1e-6, k.kappa, dump_pair(t, a));
  }));

  s.properties.push_back(run_property("right_symmetry", cfg, std::min(n, 30), [](Rng& rng, std::size_t d) {
    const sample::Pair p = sample::unit_orthogonal_pair(rng, std::min<std::size_t>(d, 3));
    const CMatrix prod = schaffer_window(p.a, 6).op.adjoint() * schaffer_window(p.t, 6).op;
    const Tri fwd = contains_point_adaptive(nr_boundary(prod), 0.0, 1e-6).first.verdict;
    if (fwd != Tri::True) return check(false, 0, dump_pair(p.t, p.a));
    const Tri rev = contains_point_adaptive(nr_boundary(prod.adjoint()), 0.0, 1e-6).first.verdict;
    return check(rev == Tri::True, 0, dump_pair(p.t, p.a));
  }));
  return s;
}

inline SuiteResult run_ando_suite(const SuiteConfig& cfg) {
  using namespace detail;
  SuiteResult s{"ando", cfg, {}};
  const int n = cfg.trials;

  s.properties.push_back(run_property("simple_lemma", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.contraction(d), u = rng.unitary(d);
    const double r = op_norm(defect_pair(t).d_t - defect_pair(u * t).d_t);
    return check(r <= 1e-9, r, json{{"T", matrix_to_json(t)}, {"S", matrix_to_json(u)}});
  }));

  s.properties.push_back(run_property("ando_residuals", cfg, std::min(n, 40), [](Rng& rng, std::size_t d) {
    auto [su, t] = sample::commuting_pair(rng, d);
    const AndoBundle b = ando_pair(t, su, 13);
    const double r =
        std::max({b.isometry_residual_t, b.isometry_residual_a, b.commutation_residual, b.intertwining_residual, b.max_dilation_residual()});
    return check(r <= 1e-8, r, json{{"T", matrix_to_json(t)}, {"S", matrix_to_json(su)}});
  }));

  s.properties.push_back(run_property("ando_witness_identity", cfg, std::min(n, 40), [](Rng& rng, std::size_t d) {
    auto [su, t] = sample::commuting_pair(rng, d);
    const AndoBundle b = ando_pair(t, su, 9);
    if (!b.witness) return skip();
    const double r = std::max(b.witness->closed_form_residual, std::abs(b.witness->inner_product) * 1e-2);
    const bool ok = b.witness->closed_form_residual <= 1e-9 && std::abs(b.witness->inner_product) <= 1e-7 &&
                    b.witness->scalar_identity_residual <= 1e-12;
    return check(ok, r, json{{"T", matrix_to_json(t)}, {"S", matrix_to_json(su)}});
  }));

  s.properties.push_back(run_property("st_criterion_implies_halmos", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.contraction(d, 0.5, 1.0), su = rng.unitary(d);
    const Tri st = schaffer_ST_criterion(t, su).orthogonal;
    if (st != Tri::True) return st == Tri::False ? pass() : skip();
    const Tri h = halmos_orth_criterion(t, su * t).orthogonal;
    if (!decided(h)) return skip();
    return check(h == Tri::True, 0, json{{"T", matrix_to_json(t)}, {"S", matrix_to_json(su)}});
  }));

  s.properties.push_back(run_property("brehmer_degenerate", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix t = rng.contraction(d);
    const BrehmerReport r = brehmer_check(t, CMatrix::zeros(d, d));
    return check(r.passes, 0, json{{"T", matrix_to_json(t)}});
  }));

  s.properties.push_back(run_property("brehmer_norm_sum", cfg, n, [](Rng& rng, std::size_t d) {
    const CMatrix g = rng.gaussian(d, d);
    CMatrix t2 = g * Complex(rng.uniform(-1.0, 1.0)) + g * g * Complex(rng.uniform(-1.0, 1.0));
    const double share = rng.uniform(0.1, 0.9);
    const CMatrix t1 = g * Complex(std::sqrt(share) / op_norm(g));
    t2 = t2 * Complex(std::sqrt(1.0 - share) * rng.uniform(0.5, 1.0) / std::max(op_norm(t2), 1e-300));
    const BrehmerReport r = brehmer_check(t1, t2);
    return check(r.passes, r.commute_residual, dump_pair(t1, t2));
  }));

  s.properties.push_back(run_property("brehmer_doubly_commuting", cfg, n, [](Rng& rng, std::size_t d) {
    std::vector<Complex> a(d), b(d);
    for (std::size_t i = 0; i < d; ++i) a[i] = std::polar(rng.uniform(), rng.uniform(0, 2 * M_PI)), b[i] = std::polar(rng.uniform(), rng.uniform(0, 2 * M_PI));
    const CMatrix v = rng.unitary(d);
    const CMatrix t1 = v * CMatrix::diag(a) * v.adjoint(), t2 = v * CMatrix::diag(b) * v.adjoint();
    const BrehmerReport r = brehmer_check(t1, t2);
    return check(r.passes, r.commute_residual, dump_pair(t1, t2));
  }));

  s.properties.push_back(run_property("regular_witness_from_orthogonality", cfg, n, [](Rng& rng, std::size_t d) {
    if (d < 2) return skip();
    std::vector<Complex> a(d), b(d);
    a[0] = rng.unimodular();
    b[0] = 0.0;
    for (std::size_t i = 1; i < d; ++i) a[i] = std::polar(rng.uniform(0.0, 0.9), rng.uniform(0, 2 * M_PI)), b[i] = std::polar(rng.uniform(), rng.uniform(0, 2 * M_PI));
    const CMatrix v = rng.unitary(d);
    const CMatrix t1 = v * CMatrix::diag(a) * v.adjoint(), t2 = v * CMatrix::diag(b) * v.adjoint();
    const RegularReport r = regular_orth_predicate(t1, t2);
    const bool ok = r.bj.orthogonal == Tri::True && r.brehmer.passes && r.classical_zero.verdict == Tri::True && r.predicate == Tri::True;
    return check(ok, 0, dump_pair(t1, t2));
  }));
  return s;
}

inline std::vector<SuiteResult> run_suites(const std::string& name, const SuiteConfig& cfg) {
  cfg.validate();
  std::vector<SuiteResult> out;
  const bool all = name == "all";
  if (!all && name != "bj" && name != "schaffer" && name != "rho" && name != "ando")
    throw InputError("unknown suite '" + name + "' (expected all, bj, schaffer, rho, ando)");
  if (all || name == "bj") out.push_back(run_bj_suite(cfg));
  if (all || name == "schaffer") out.push_back(run_schaffer_suite(cfg));
  if (all || name == "rho") out.push_back(run_rho_suite(cfg));
  if (all || name == "ando") out.push_back(run_ando_suite(cfg));
  return out;
}

}  // namespace otk
