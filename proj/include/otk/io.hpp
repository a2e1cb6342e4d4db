#pragma once

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "json.hpp"
#include "otk/commuting.hpp"
#include "otk/rho_dilation.hpp"

namespace otk {

using json = nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j, const char* who) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError(std::string(who) + ": expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

/** @brief {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order. */
inline json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (std::size_t k = 0; k < m.size(); ++k) data.push_back(complex_to_json(m[k]));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw InputError("matrix: expected a JSON object");
  for (const char* key : {"rows", "cols", "data"})
    if (!j.contains(key)) throw InputError(std::string("matrix: missing field '") + key + "'");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
    throw InputError("matrix: rows and cols must be non-negative integers");
  const auto r = j["rows"].get<std::size_t>(), c = j["cols"].get<std::size_t>();
  const json& data = j["data"];
  if (!data.is_array()) throw InputError("matrix: data must be an array");
  if (data.size() != r * c)
    throw InputError("matrix: data has " + std::to_string(data.size()) + " entries, expected " + std::to_string(r * c));
  CMatrix m(r, c);
  for (std::size_t k = 0; k < data.size(); ++k) m[k] = complex_from_json(data[k], "matrix entry");
  detail::require_finite(m, "matrix");
  return m;
}

inline json vector_to_json(const CMatrix& v) {
  json out = json::array();
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v[k]));
  return out;
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(origin + ": malformed JSON (" + e.what() + ")");
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

/** @brief Indented, key-sorted dump with a trailing newline. */
inline std::string dump_stable(const json& j) { return j.dump(2) + "\n"; }

inline CMatrix load_matrix(const std::string& path) { return matrix_from_json(parse_json_text(read_text_file(path), path)); }

inline void save_matrix(const std::string& path, const CMatrix& m) { write_text_file(path, dump_stable(matrix_to_json(m))); }

inline json verdict_to_json(const OrthVerdict& v) {
  json j;
  j["orthogonal"] = to_string(v.orthogonal);
  j["epsilon_min"] = v.epsilon_min;
  j["witness"] = v.witness ? vector_to_json(*v.witness) : json(nullptr);
  j["inner_product_at_witness"] = complex_to_json(v.inner_product_at_witness);
  j["method"] = v.method;
  j["residuals"] = json::object();
  for (const auto& [k, r] : v.residuals) j["residuals"][k] = r;
  return j;
}

inline json membership_to_json(const Membership& m) {
  return {{"verdict", to_string(m.verdict)}, {"inner_distance", m.inner_distance}, {"separation", m.separation}};
}

inline json window_to_json(const DilationWindow& w) {
  return {{"slot_dim", w.slot_dim}, {"slots", w.slots},   {"home", w.home},
          {"rho", w.rho},           {"kind", w.kind},     {"valid_powers", w.valid_powers},
          {"operator", matrix_to_json(w.op)}};
}

inline DilationWindow window_from_json(const json& j) {
  if (!j.is_object()) throw InputError("window: expected a JSON object");
  for (const char* key : {"slot_dim", "slots", "home", "rho", "operator"})
    if (!j.contains(key)) throw InputError(std::string("window: missing field '") + key + "'");
  DilationWindow w;
  try {
    w.slot_dim = j["slot_dim"].get<std::size_t>();
    w.slots = j["slots"].get<std::size_t>();
    w.home = j["home"].get<std::size_t>();
    w.rho = j["rho"].get<double>();
    w.kind = j.value("kind", std::string("window"));
    w.valid_powers = j.value("valid_powers", int(w.slots) - 2);
  } catch (const json::exception& e) {
    throw InputError(std::string("window: bad field type (") + e.what() + ")");
  }
  w.op = matrix_from_json(j["operator"]);
  if (w.op.rows() != w.slot_dim * w.slots || !w.op.is_square()) throw InputError("window: operator shape does not match slots");
  if (w.home >= w.slots) throw InputError("window: home slot outside the window");
  return w;
}

inline json power_report_to_json(const PowerDilationReport& r) {
  return {{"residuals", r.residuals}, {"n_max", r.n_max}, {"tol", r.tol}, {"pass", r.pass}, {"max_residual", r.max_residual()}};
}

inline json permutation_to_json(const PermutationSpec& p) {
  json map = json::array();
  for (int m = p.lo; m <= p.hi; ++m) map.push_back(json::array({m, p(m)}));
  return {{"label", p.label}, {"lo", p.lo}, {"hi", p.hi}, {"map", std::move(map)}, {"bijective", p.is_bijection()}};
}

inline json nilpotent_to_json(const NilpotentBundle& b) {
  const NilpotentReport& r = b.report;
  json rep = {{"residuals_T", r.residuals_t},
              {"residuals_A", r.residuals_a},
              {"n_checked", r.n_checked},
              {"maps_bijective", r.maps_bijective},
              {"A_orth_T", verdict_to_json(r.a_orth_t)},
              {"T_orth_A", verdict_to_json(r.t_orth_a)},
              {"Te1_Ae1", complex_to_json(r.te1_ae1)},
              {"Ae4_Te4", complex_to_json(r.ae4_te4)},
              {"zero_in_W_UAstar_UT", membership_to_json(r.dilations_zero)}};
  return {{"rho", b.rho},
          {"window", b.window},
          {"T", matrix_to_json(b.t)},
          {"A", matrix_to_json(b.a)},
          {"f", permutation_to_json(b.spec_f)},
          {"g", permutation_to_json(b.spec_g)},
          {"U_T", window_to_json(b.u_t)},
          {"U_A", window_to_json(b.u_a)},
          {"report", std::move(rep)}};
}

inline json growing_map_to_json(const GrowingMap& g) {
  return {{"label", g.label},
          {"slot_dim", g.slot_dim},
          {"in_slots", g.in_slots},
          {"out_slots", g.out_slots},
          {"operator", matrix_to_json(g.op)}};
}

inline json ando_to_json(const AndoBundle& b) {
  json j;
  j["T"] = matrix_to_json(b.t);
  j["S"] = matrix_to_json(b.s);
  j["A"] = matrix_to_json(b.a);
  j["m"] = b.m;
  j["V_T"] = json::array();
  j["V_A"] = json::array();
  for (const auto& [k, g] : b.v_t) j["V_T"].push_back(growing_map_to_json(g));
  for (const auto& [k, g] : b.v_a) j["V_A"].push_back(growing_map_to_json(g));
  json dil = json::object();
  for (const auto& [nn, r] : b.dilation_residuals) dil[std::to_string(nn.first) + "," + std::to_string(nn.second)] = r;
  j["residuals"] = {{"isometry_V_T", b.isometry_residual_t},
                    {"isometry_V_A", b.isometry_residual_a},
                    {"commutation", b.commutation_residual},
                    {"intertwining", b.intertwining_residual},
                    {"defect_T_vs_ST", b.defect_residual},
                    {"dilation", std::move(dil)}};
  if (b.witness) {
    const AndoWitness& w = *b.witness;
    j["witness"] = {{"x", vector_to_json(w.x)},
                    {"beta", w.beta},
                    {"eta", w.eta},
                    {"zeta", w.zeta},
                    {"inner_product", complex_to_json(w.inner_product)},
                    {"closed_form", complex_to_json(w.closed_form)},
                    {"closed_form_residual", w.closed_form_residual}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline json brehmer_to_json(const BrehmerReport& r) {
  json mats = json::array();
  for (const auto& m : r.residual_matrices) mats.push_back(matrix_to_json(m));
  return {{"commute_residual", r.commute_residual},
          {"subsets", json::array({"{1}", "{2}", "{1,2}"})},
          {"residual_matrices", std::move(mats)},
          {"min_eigenvalues", r.min_eigenvalues},
          {"empty_set_min_eigenvalue", r.empty_set_min_eigenvalue},
          {"passes", r.passes}};
}

inline json regular_to_json(const RegularReport& r) {
  return {{"brehmer", brehmer_to_json(r.brehmer)},
          {"classical_zero", membership_to_json(r.classical_zero)},
          {"classical_witness", r.classical_witness ? vector_to_json(*r.classical_witness) : json(nullptr)},
          {"witness_value", complex_to_json(r.witness_value)},
          {"maximal_zero", membership_to_json(r.maximal_zero)},
          {"bj_T1_T2", verdict_to_json(r.bj)},
          {"predicate", to_string(r.predicate)}};
}

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/** @brief CSV with columns angle, re, im (inner polygon), re_outer, im_outer. */
inline std::string polygon_csv(const NRPolygon& p) {
  std::string out = "angle,re,im,re_outer,im_outer\n";
  for (std::size_t k = 0; k < p.angles.size(); ++k) {
    out += detail::fmt17(p.angles[k]) + "," + detail::fmt17(p.vertices[k].real()) + "," + detail::fmt17(p.vertices[k].imag()) +
           "," + detail::fmt17(p.outer[k].real()) + "," + detail::fmt17(p.outer[k].imag()) + "\n";
  }
  return out;
}

/** @brief Static SVG: outer polygon dashed, inner polygon filled, axes and origin marker. */
inline std::string polygon_svg(const NRPolygon& p, int size = 480) {
  double r = 1e-12;
  for (auto z : p.outer) r = std::max({r, std::abs(z.real()), std::abs(z.imag())});
  for (auto z : p.vertices) r = std::max({r, std::abs(z.real()), std::abs(z.imag())});
  r *= 1.15;
  const double half = size / 2.0;
  auto px = [&](Complex z) { return detail::fmt17(half + z.real() / r * half) + "," + detail::fmt17(half - z.imag() / r * half); };
  auto path = [&](const std::vector<Complex>& v) {
    std::string s;
    for (auto z : v) s += px(z) + " ";
    return s;
  };
  const std::string n = std::to_string(size);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + n + "\" height=\"" + n + "\" viewBox=\"0 0 " + n + " " + n + "\">\n";
  out += "<line x1=\"0\" y1=\"" + detail::fmt17(half) + "\" x2=\"" + n + "\" y2=\"" + detail::fmt17(half) + "\" stroke=\"#999\"/>\n";
  out += "<line x1=\"" + detail::fmt17(half) + "\" y1=\"0\" x2=\"" + detail::fmt17(half) + "\" y2=\"" + n + "\" stroke=\"#999\"/>\n";
  out += "<polygon points=\"" + path(p.outer) + "\" fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"4 3\"/>\n";
  out += "<polygon points=\"" + path(p.vertices) + "\" fill=\"#36c\" fill-opacity=\"0.3\" stroke=\"#36c\"/>\n";
  out += "<circle cx=\"" + detail::fmt17(half) + "\" cy=\"" + detail::fmt17(half) + "\" r=\"3\" fill=\"#000\"/>\n";
  out += "</svg>\n";
  return out;
}

inline json polygon_to_json(const NRPolygon& p) {
  json v = json::array(), o = json::array();
  for (auto z : p.vertices) v.push_back(complex_to_json(z));
  for (auto z : p.outer) o.push_back(complex_to_json(z));
  return {{"n_angles", p.angles.size()}, {"degenerate", p.is_degenerate}, {"vertices", std::move(v)}, {"outer", std::move(o)}};
}

/** @brief 64-bit FNV-1a digest as 16 hex digits. */
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace otk
