#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "otk/otk.hpp"

namespace {

using otk::json;
using otk::Tri;

struct Common {
  double tol = -1;
  bool assert_verdict = false;
  bool timing = false;
  std::string json_out;
  std::uint64_t seed = 7;
  std::vector<std::string> files;
};

struct Outcome {
  json verdicts = json::object();
  Tri verdict = Tri::True;
};

otk::ToleranceConfig tolerances(const Common& c) {
  otk::ToleranceConfig t;
  if (c.tol > 0) t.verdict_tol = c.tol;
  t.validate();
  return t;
}

std::vector<otk::CMatrix> load_all(const Common& c, std::size_t expected, const std::string& who) {
  if (c.files.size() != expected)
    throw otk::InputError(who + ": expected " + std::to_string(expected) + " matrix file(s), got " + std::to_string(c.files.size()));
  std::vector<otk::CMatrix> m;
  for (const auto& f : c.files) m.push_back(otk::load_matrix(f));
  return m;
}

Tri from_bool(bool b) { return b ? Tri::True : Tri::False; }

Outcome cmd_check(const std::string& kind, const Common& c, double eps) {
  const auto tol = tolerances(c);
  Outcome o;
  if (kind == "orth" || kind == "halmos" || kind == "st-criterion") {
    auto m = load_all(c, 2, "check " + kind);
    const otk::OrthVerdict v = kind == "orth"     ? otk::is_bj_orthogonal(m[0], m[1], tol)
                               : kind == "halmos" ? otk::halmos_orth_criterion(m[0], m[1], tol)
                                                  : otk::schaffer_ST_criterion(m[0], m[1], tol);
    o.verdicts[kind] = otk::verdict_to_json(v);
    o.verdict = v.orthogonal;
  } else if (kind == "approx") {
    auto m = load_all(c, 2, "check approx");
    const Tri v = otk::is_approx_orthogonal(m[0], m[1], eps, tol);
    auto [lo, hi] = otk::epsilon_bounds(m[0], m[1], tol);
    o.verdicts["approx"] = {{"orthogonal", otk::to_string(v)}, {"eps", eps}, {"epsilon_min_lower", lo}, {"epsilon_min_upper", hi}};
    o.verdict = v;
  } else if (kind == "brehmer") {
    auto m = load_all(c, 2, "check brehmer");
    const otk::BrehmerReport r = otk::brehmer_check(m[0], m[1], tol);
    o.verdicts["brehmer"] = otk::brehmer_to_json(r);
    o.verdict = from_bool(r.passes);
  } else if (kind == "regular") {
    auto m = load_all(c, 2, "check regular");
    const otk::RegularReport r = otk::regular_orth_predicate(m[0], m[1], tol);
    o.verdicts["regular"] = otk::regular_to_json(r);
    o.verdict = r.predicate;
  } else {
    throw otk::InputError("check: unknown kind '" + kind + "' (orth, approx, halmos, brehmer, regular, st-criterion)");
  }
  return o;
}

struct DilateOptions {
  std::size_t slots = 0;
  std::size_t inner_slots = 6;
  double rho = 1.0;
  int k0 = 2;
  std::string out;
};

Outcome cmd_dilate(const std::string& kind, const Common& c, const DilateOptions& d) {
  const auto tol = tolerances(c);
  Outcome o;
  json bundle;
  auto slots_or = [&](std::size_t def) { return d.slots ? d.slots : def; };
  if (kind == "schaffer" || kind == "generalized") {
    auto m = load_all(c, 1, "dilate " + kind);
    const std::size_t s = slots_or(8);
    otk::DilationWindow w;
    if (kind == "schaffer") {
      w = otk::schaffer_window(m[0], s, d.rho, tol);
    } else {
      otk::Rng rng(c.seed);
      w = otk::generalized_schaffer(m[0], otk::sample::random_params(rng, m[0].rows(), s), s, tol);
    }
    const otk::PowerDilationReport p = otk::verify_power_dilation(w, m[0], w.valid_powers);
    o.verdicts["power"] = otk::power_report_to_json(p);
    o.verdicts["unitarity_residual"] = otk::unitarity_residual(w.op);
    o.verdict = from_bool(p.pass);
    bundle = otk::window_to_json(w);
  } else if (kind == "hat") {
    auto m = load_all(c, 2, "dilate hat");
    const otk::HatPair h = otk::hat_pair(m[0], m[1], d.inner_slots, slots_or(6), tol);
    o.verdicts["hat"] = {{"inner_product", otk::complex_to_json(h.inner_product)},
                         {"expected", otk::complex_to_json(h.expected)},
                         {"residual", h.residual},
                         {"beta", h.beta},
                         {"defect_residual_T", h.defect_residual_t},
                         {"defect_residual_A", h.defect_residual_a}};
    o.verdict = from_bool(std::abs(h.inner_product) <= 1e-7);
    bundle = {{"U_T", otk::window_to_json(h.u_t)}, {"U_A", otk::window_to_json(h.u_a)}, {"witness", otk::vector_to_json(h.witness)}};
  } else if (kind == "adjoint-trick") {
    auto m = load_all(c, 2, "dilate adjoint-trick");
    const otk::AdjointTrickPair p = otk::adjoint_trick_pair(m[0], m[1], slots_or(8), tol);
    const otk::PowerDilationReport pt = otk::verify_power_dilation(p.u_t, m[0], p.u_t.valid_powers);
    const otk::PowerDilationReport pa = otk::verify_power_dilation(p.u_a, m[1], p.u_a.valid_powers);
    o.verdicts["power_T"] = otk::power_report_to_json(pt);
    o.verdicts["power_A"] = otk::power_report_to_json(pa);
    o.verdicts["inner_product"] = otk::complex_to_json(p.inner_product);
    o.verdict = from_bool(pt.pass && pa.pass && std::abs(p.inner_product) <= 1e-9);
    bundle = {{"U_T", otk::window_to_json(p.u_t)}, {"U_A", otk::window_to_json(p.u_a)}, {"witness", otk::vector_to_json(p.witness)}};
  } else if (kind == "forced") {
    auto m = load_all(c, 2, "dilate forced");
    const otk::ForcedPair f = otk::forced_orthogonal_pair(m[0], m[1], slots_or(8), d.k0, tol);
    const otk::PowerDilationReport pt = otk::verify_power_dilation(f.u_t, m[0], f.u_t.valid_powers);
    const otk::PowerDilationReport pa = otk::verify_power_dilation(f.u_a, m[1], f.u_a.valid_powers);
    o.verdicts["power_T"] = otk::power_report_to_json(pt);
    o.verdicts["power_A"] = otk::power_report_to_json(pa);
    o.verdicts["inner_product"] = otk::complex_to_json(f.inner_product);
    o.verdict = from_bool(pt.pass && pa.pass && std::abs(f.inner_product) <= 1e-12);
    bundle = {{"U_T", otk::window_to_json(f.u_t)}, {"U_A", otk::window_to_json(f.u_a)}, {"witness", otk::vector_to_json(f.witness)}};
  } else if (kind == "ando") {
    auto m = load_all(c, 2, "dilate ando");
    const otk::AndoBundle b = otk::ando_pair(m[0], m[1], slots_or(13), tol);
    bundle = otk::ando_to_json(b);
    o.verdicts["residuals"] = bundle["residuals"];
    o.verdicts["witness"] = b.witness ? json{{"beta", b.witness->beta}, {"inner_product", otk::complex_to_json(b.witness->inner_product)}}
                                      : json(nullptr);
    const double r = std::max({b.isometry_residual_t, b.isometry_residual_a, b.commutation_residual, b.max_dilation_residual()});
    o.verdict = from_bool(r <= 1e-8);
  } else if (kind == "rho-example") {
    if (!c.files.empty()) throw otk::InputError("dilate rho-example: takes no matrix files");
    const otk::NilpotentBundle b = otk::nilpotent_rho_example(d.rho, int(slots_or(16)), tol);
    bundle = otk::nilpotent_to_json(b);
    o.verdicts["report"] = bundle["report"];
    double worst = 0;
    for (double x : b.report.residuals_t) worst = std::max(worst, x);
    for (double x : b.report.residuals_a) worst = std::max(worst, x);
    o.verdict = from_bool(worst <= 1e-10 && b.report.maps_bijective && b.report.a_orth_t.orthogonal == Tri::True &&
                          b.report.t_orth_a.orthogonal == Tri::False && b.report.dilations_zero.verdict == Tri::True);
  } else {
    throw otk::InputError("dilate: unknown kind '" + kind + "' (schaffer, generalized, hat, adjoint-trick, forced, ando, rho-example)");
  }
  if (!d.out.empty()) otk::write_text_file(d.out, otk::dump_stable(bundle));
  return o;
}

Outcome cmd_verify(const Common& c, int n_max) {
  if (c.files.size() != 2) throw otk::InputError("verify: expected a window file and a matrix file");
  const otk::DilationWindow w = otk::window_from_json(otk::parse_json_text(otk::read_text_file(c.files[0]), c.files[0]));
  const otk::CMatrix t = otk::load_matrix(c.files[1]);
  const otk::PowerDilationReport p = otk::verify_power_dilation(w, t, n_max < 0 ? w.valid_powers : n_max);
  Outcome o;
  o.verdicts["power"] = otk::power_report_to_json(p);
  o.verdicts["unitarity_residual"] = otk::unitarity_residual(w.op);
  o.verdict = from_bool(p.pass);
  return o;
}

Outcome cmd_reproduce(const std::string& id) {
  const otk::ReproduceResult r = otk::reproduce(id);
  Outcome o;
  o.verdicts[id] = r.to_json();
  o.verdict = from_bool(r.pass());
  return o;
}

struct NumrangeOptions {
  int angles = 64;
  bool maximal = false;
  std::string csv, svg;
};

Outcome cmd_numrange(const Common& c, const NumrangeOptions& n) {
  const auto tol = tolerances(c);
  auto m = load_all(c, 1, "numrange");
  if (n.angles < 3) throw otk::InputError("numrange: at least 3 angles");
  const otk::NRPolygon classical = otk::nr_boundary(m[0], n.angles);
  const otk::NRPolygon poly = n.maximal ? otk::maximal_numerical_range(m[0], tol, n.angles) : classical;
  const otk::Membership zero = otk::contains_point_adaptive(poly, 0.0, tol.verdict_tol).first;
  Outcome o;
  o.verdicts["polygon"] = otk::polygon_to_json(poly);
  o.verdicts["degenerate"] = poly.is_degenerate;
  o.verdicts["zero"] = otk::membership_to_json(zero);
  double min_re = poly.vertices.front().real();
  for (auto z : poly.vertices) min_re = std::min(min_re, z.real());
  o.verdicts["min_real_part"] = min_re;
  if (n.maximal) {
    double excess = 0;
    for (auto z : poly.vertices) excess = std::max(excess, otk::outer_excess(classical, z));
    o.verdicts["contained_in_classical"] = excess <= 1e-9;
    o.verdicts["containment_excess"] = excess;
  }
  o.verdict = zero.verdict;
  if (!n.csv.empty()) otk::write_text_file(n.csv, otk::polygon_csv(poly));
  if (!n.svg.empty()) otk::write_text_file(n.svg, otk::polygon_svg(poly));
  return o;
}

Outcome cmd_property_run(const std::string& suite, const Common& c, int trials, const std::vector<int>& dims,
                         const std::string& dump_dir) {
  otk::SuiteConfig cfg;
  cfg.trials = trials;
  cfg.seed = c.seed;
  cfg.dims = dims;
  Outcome o;
  bool ok = true;
  for (const otk::SuiteResult& s : otk::run_suites(suite, cfg)) {
    o.verdicts[s.suite] = s.to_json();
    ok = ok && s.ok();
    if (dump_dir.empty()) continue;
    for (const auto& p : s.properties) {
      for (const json& f : p.failures) {
        std::filesystem::create_directories(dump_dir);
        const std::string stem = dump_dir + "/" + s.suite + "_" + p.name + "_trial" + std::to_string(f.value("trial", -1));
        for (const auto& [key, val] : f.items())
          if (val.is_object() && val.contains("rows")) otk::write_text_file(stem + "_" + key + ".json", otk::dump_stable(val));
      }
    }
  }
  o.verdict = from_bool(ok);
  return o;
}

int exit_code(Tri t) {
  switch (t) {
    case Tri::True: return 0;
    case Tri::False: return 2;
    default: return 3;
  }
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("OTK_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw otk::InputError(std::string("OTK_SEED is not an unsigned integer: ") + s);
    }
  }
  return 7;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonality checks and dilation constructions for matrix contractions", "otk"};
  app.require_subcommand(1);
  Common common;
  std::string seed_text;
  app.add_option("--tol", common.tol, "orthogonality decision margin (verdict tolerance)");
  app.add_flag("--assert", common.assert_verdict, "exit 0/2/3 on verdict true/false/inconclusive");
  app.add_option("--json", common.json_out, "also write the report to this file");
  app.add_flag("--timing", common.timing, "include elapsed_ms in the report");
  app.add_option("--seed", seed_text, "seed for randomised commands (default: OTK_SEED or 7)");

  std::string kind, id, suite = "all", dump_dir;
  double eps = 0.5;
  DilateOptions dopt;
  NumrangeOptions nopt;
  int n_max = -1, trials = 100;
  std::vector<int> dims = {2, 3, 4};
  std::function<Outcome()> action;
  std::string command;

  auto* check = app.add_subcommand("check", "decide an orthogonality or dilation-hypothesis predicate");
  check->fallthrough();
  check->add_option("kind", kind, "orth | approx | halmos | brehmer | regular | st-criterion")->required();
  check->add_option("files", common.files, "matrix JSON files");
  check->add_option("--eps", eps, "epsilon for check approx");
  check->callback([&] { command = "check " + kind; action = [&] { return cmd_check(kind, common, eps); }; });

  auto* dilate = app.add_subcommand("dilate", "build and verify a dilation");
  dilate->fallthrough();
  dilate->add_option("kind", kind, "schaffer | generalized | hat | adjoint-trick | forced | ando | rho-example")->required();
  dilate->add_option("files", common.files, "matrix JSON files");
  dilate->add_option("--slots", dopt.slots, "window slot count");
  dilate->add_option("--inner-slots", dopt.inner_slots, "inner window slot count (hat)");
  dilate->add_option("--rho", dopt.rho, "dilation constant");
  dilate->add_option("--k0", dopt.k0, "band slot of the forced pair");
  dilate->add_option("--out", dopt.out, "write the window or bundle JSON here");
  dilate->callback([&] { command = "dilate " + kind; action = [&] { return cmd_dilate(kind, common, dopt); }; });

  auto* verify = app.add_subcommand("verify", "re-load a window file and verify it against T");
  verify->fallthrough();
  verify->add_option("files", common.files, "window JSON and matrix JSON")->expected(2);
  verify->add_option("--n", n_max, "largest power (default: valid_powers)");
  verify->callback([&] { command = "verify"; action = [&] { return cmd_verify(common, n_max); }; });

  auto* repro = app.add_subcommand("reproduce", "run a built-in example as a regression");
  repro->fallthrough();
  repro->add_option("id", id, "example id")->required();
  repro->callback([&] { command = "reproduce " + id; action = [&] { return cmd_reproduce(id); }; });

  auto* numrange = app.add_subcommand("numrange", "numerical range polygon export");
  numrange->fallthrough();
  numrange->add_option("files", common.files, "matrix JSON file");
  numrange->add_option("--angles", nopt.angles, "support angles");
  numrange->add_flag("--maximal", nopt.maximal, "maximal numerical range");
  numrange->add_option("--csv", nopt.csv, "CSV output path");
  numrange->add_option("--svg", nopt.svg, "SVG output path");
  numrange->callback([&] { command = "numrange"; action = [&] { return cmd_numrange(common, nopt); }; });

  auto* prop = app.add_subcommand("property-run", "seeded property suites");
  prop->fallthrough();
  prop->add_option("suite", suite, "all | bj | schaffer | rho | ando");
  prop->add_option("--trials", trials, "trials per property");
  prop->add_option("--dims", dims, "dimension list, e.g. 2,3,4")->delimiter(',');
  prop->add_option("--dump-dir", dump_dir, "write failing inputs here");
  prop->callback([&] { command = "property-run " + suite; action = [&] { return cmd_property_run(suite, common, trials, dims, dump_dir); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "otk: " << e.what() << "\n";
    return 1;
  }

  try {
    common.seed = seed_text.empty() ? default_seed() : std::stoull(seed_text);
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome o = action();
    json report;
    report["command"] = command;
    report["inputs"] = json::object();
    for (const auto& f : common.files) report["inputs"][f] = otk::fnv1a_hex(otk::read_text_file(f));
    report["verdicts"] = o.verdicts;
    report["verdict"] = otk::to_string(o.verdict);
    report["seed"] = common.seed;
    if (common.timing)
      report["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    const std::string text = otk::dump_stable(report);
    std::cout << text;
    if (!common.json_out.empty()) otk::write_text_file(common.json_out, text);
    return common.assert_verdict ? exit_code(o.verdict) : 0;
  } catch (const std::exception& e) {
    std::cerr << "otk: " << e.what() << "\n";
    return 1;
  }
}
