#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "otk/attainment.hpp"
#include "otk/linalg.hpp"
#include "otk/matrix.hpp"
#include "otk/random.hpp"
#include "otk/tolerance.hpp"

namespace otk {

/**
 * @brief Inner/outer polygon sandwich of a numerical range.
 *
 * vertices[j] = <B x_j, x_j> is the support point in direction angles[j]; support[j] is the
 * support value there; outer[j] is where support lines j and j+1 meet.
 * When `basis` is non-empty the range is the one of the compression basis* B basis, and the
 * witnesses are lifted to the full space.
 */
struct NRPolygon {
  std::size_t source_dim = 0;
  CMatrix source;
  CMatrix basis;
  std::vector<double> angles;
  std::vector<double> support;
  std::vector<Complex> vertices;
  std::vector<Complex> outer;
  std::vector<CMatrix> witnesses;
  bool is_degenerate = false;
};

/** @brief A point of a numerical range together with a unit vector realising it. */
struct RegionWitness {
  Complex point;
  CMatrix vector;
  double residual = 0;
};

/** @brief Certified membership outcome with its two certificates. */
struct Membership {
  Tri verdict = Tri::Inconclusive;
  double inner_distance = 0;  ///< distance from the point to the inner polygon (upper bound)
  double separation = 0;      ///< margin of the best separating support line (lower bound when > 0)
};

namespace geom {

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline double point_segment_distance(Complex z, Complex a, Complex b) {
  const Complex ab = b - a;
  const double l2 = std::norm(ab);
  if (l2 == 0.0) return std::abs(z - a);
  double s = ((z - a) * std::conj(ab)).real() / l2;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(z - (a + s * ab));
}

inline Complex nearest_on_segment(Complex z, Complex a, Complex b) {
  const Complex ab = b - a;
  const double l2 = std::norm(ab);
  if (l2 == 0.0) return a;
  double s = std::clamp(((z - a) * std::conj(ab)).real() / l2, 0.0, 1.0);
  return a + s * ab;
}

inline bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on = [](Complex p, Complex q, Complex r) {  // r on segment pq, given collinear
    return std::min(p.real(), q.real()) <= r.real() && r.real() <= std::max(p.real(), q.real()) &&
           std::min(p.imag(), q.imag()) <= r.imag() && r.imag() <= std::max(p.imag(), q.imag());
  };
  if (d1 == 0 && on(a, b, c)) return true;
  if (d2 == 0 && on(a, b, d)) return true;
  if (d3 == 0 && on(c, d, a)) return true;
  if (d4 == 0 && on(c, d, b)) return true;
  return false;
}

inline double segment_segment_distance(Complex a, Complex b, Complex c, Complex d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d), point_segment_distance(c, a, b),
                   point_segment_distance(d, a, b)});
}

inline double extent(const std::vector<Complex>& v) {
  double s = 0;
  for (auto z : v) s = std::max(s, std::abs(z));
  return s;
}

/** @brief Point-in-convex-polygon for counterclockwise vertices (duplicates allowed). */
inline bool inside_ccw(const std::vector<Complex>& v, Complex z) {
  const double scale = 1.0 + extent(v);
  const double slack = 1e-13 * scale * scale;
  // Near-duplicate vertices give edges of arbitrary direction, so a point-like polygon is
  // handled by distance alone.
  double diameter = 0;
  for (auto w : v) diameter = std::max(diameter, std::abs(w - v[0]));
  if (diameter <= 1e-11 * scale) return std::abs(z - v[0]) <= 1e-11 * scale;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Complex a = v[k], b = v[(k + 1) % v.size()];
    if (cross(b - a, z - a) < -slack) return false;
  }
  return true;
}

inline double polygon_point_distance(const std::vector<Complex>& v, bool degenerate, Complex z) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  if (v.size() == 1) return std::abs(z - v[0]);
  if (!degenerate && inside_ccw(v, z)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < v.size(); ++k) d = std::min(d, point_segment_distance(z, v[k], v[(k + 1) % v.size()]));
  return d;
}

inline Complex polygon_nearest_point(const std::vector<Complex>& v, bool degenerate, Complex z) {
  if (v.size() == 1) return v[0];
  if (!degenerate && inside_ccw(v, z)) return z;
  double best = std::numeric_limits<double>::infinity();
  Complex p = v[0];
  for (std::size_t k = 0; k < v.size(); ++k) {
    Complex q = nearest_on_segment(z, v[k], v[(k + 1) % v.size()]);
    if (std::abs(q - z) < best) {
      best = std::abs(q - z);
      p = q;
    }
  }
  return p;
}

inline double polygon_segment_distance(const std::vector<Complex>& v, bool degenerate, Complex a, Complex b) {
  if (v.empty()) return std::numeric_limits<double>::infinity();
  if (v.size() == 1) return point_segment_distance(v[0], a, b);
  if (!degenerate && (inside_ccw(v, a) || inside_ccw(v, b))) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < v.size(); ++k) d = std::min(d, segment_segment_distance(a, b, v[k], v[(k + 1) % v.size()]));
  return d;
}

/** @brief Sutherland-Hodgman clip of a convex vertex list against {Im z <= c} (sign = +1) or {Im z >= -c} (sign = -1). */
inline std::vector<Complex> clip_imag(const std::vector<Complex>& v, double c, int sign) {
  std::vector<Complex> out;
  auto val = [&](Complex z) { return sign * z.imag() - c; };  // <= 0 is kept
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Complex a = v[k], b = v[(k + 1) % v.size()];
    const double fa = val(a), fb = val(b);
    if (fa <= 0) out.push_back(a);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) out.push_back(a + (b - a) * (fa / (fa - fb)));
  }
  return out;
}

}  // namespace geom

namespace detail {

inline NRPolygon boundary_of(const CMatrix& b, const CMatrix& basis, int n_angles) {
  if (n_angles < 16) throw InputError("nr_boundary: n_angles must be at least 16");
  if (!b.is_square()) throw InputError("nr_boundary: matrix is not square");
  detail::require_finite(b, "nr_boundary");
  const CMatrix c = basis.empty() ? b : basis.adjoint() * b * basis;
  NRPolygon p;
  p.source_dim = b.rows();
  p.source = b;
  p.basis = basis;
  const std::size_t n = std::size_t(n_angles);
  p.angles.resize(n);
  p.support.resize(n);
  p.vertices.resize(n);
  p.witnesses.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 2.0 * M_PI * double(j) / double(n);
    HermEig e = herm_eig(rotated_real_part(c, th));
    CMatrix u = e.vectors.col(0);
    p.angles[j] = th;
    p.support[j] = e.values[0];
    p.vertices[j] = quad_form(c, u);
    p.witnesses[j] = basis.empty() ? u : basis * u;
  }
  p.outer.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    const double t1 = p.angles[j], t2 = k ? p.angles[k] : 2.0 * M_PI;
    const double det = std::sin(t2 - t1);
    const double h1 = p.support[j], h2 = p.support[k];
    // x cos t + y sin t = h for both lines
    const double x = (h1 * std::sin(t2) - h2 * std::sin(t1)) / det;
    const double y = (h2 * std::cos(t1) - h1 * std::cos(t2)) / det;
    p.outer[j] = {x, y};
  }
  // Degenerate when every vertex lies within rounding of the line through the two farthest ones.
  const double scale = 1.0 + geom::extent(p.vertices);
  std::size_t ia = 0, ib = 0;
  double far = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(p.vertices[i] - p.vertices[j]) > far) far = std::abs(p.vertices[i] - p.vertices[j]), ia = i, ib = j;
  double width = 0;
  if (far > 0) {
    const Complex dir = (p.vertices[ib] - p.vertices[ia]) / far;
    for (auto z : p.vertices) width = std::max(width, std::abs(geom::cross(dir, z - p.vertices[ia])));
  }
  p.is_degenerate = width <= 1e-10 * scale;
  return p;
}

}  // namespace detail

/** @brief Support-function sandwich of the numerical range of B with n_angles directions. */
inline NRPolygon nr_boundary(const CMatrix& b, int n_angles = 64) { return detail::boundary_of(b, CMatrix{}, n_angles); }

/** @brief Same polygon recomputed with a different number of directions. */
inline NRPolygon refined(const NRPolygon& p, int n_angles) { return detail::boundary_of(p.source, p.basis, n_angles); }

/** @brief Certified test of z against the polygon sandwich. */
inline Membership nr_contains_point(const NRPolygon& p, Complex z, double tol) {
  Membership m;
  m.inner_distance = geom::polygon_point_distance(p.vertices, p.is_degenerate, z);
  m.separation = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.angles.size(); ++j) {
    const double proj = (std::polar(1.0, -p.angles[j]) * z).real();
    m.separation = std::max(m.separation, proj - p.support[j]);
  }
  if (m.inner_distance <= tol) {
    m.verdict = Tri::True;
  } else if (m.separation > tol) {
    m.verdict = Tri::False;
  } else {
    m.verdict = Tri::Inconclusive;
  }
  return m;
}

inline Membership nr_contains_zero(const NRPolygon& p, double tol) { return nr_contains_point(p, 0.0, tol); }

/** @brief Doubles the angle count (up to max_angles) until membership is decided. */
inline std::pair<Membership, NRPolygon> contains_point_adaptive(NRPolygon p, Complex z, double tol,
                                                                int max_angles = 4096) {
  Membership m = nr_contains_point(p, z, tol);
  while (m.verdict == Tri::Inconclusive && int(p.angles.size()) * 2 <= max_angles) {
    p = refined(p, int(p.angles.size()) * 2);
    m = nr_contains_point(p, z, tol);
  }
  return {m, p};
}

namespace detail {

// Unit vector in span{u, w} whose form equals z, where <Bu,u> = p, <Bw,w> = r and z on [p, r].
inline CMatrix segment_interpolate(const CMatrix& b, const CMatrix& u, const CMatrix& w, Complex z) {
  const Complex p = quad_form(b, u), r = quad_form(b, w);
  const Complex d = r - p;
  if (std::abs(d) <= 1e-15 * (1.0 + std::abs(p))) return u;
  const double s = std::clamp(((z - p) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  const std::size_t n = b.rows();
  CMatrix bp = (b - CMatrix::identity(n) * p) / d;
  const CMatrix k = (bp - bp.adjoint()) * Complex(0.0, -0.5);
  const Complex c = inner(k * w, u);
  double phi = 0.0;
  if (std::abs(c) > 0) phi = M_PI / 2 - std::arg(c);
  const CMatrix we = w * std::polar(1.0, phi);
  auto form = [&](double t) {
    CMatrix x = u * Complex(1.0 - t) + we * Complex(t);
    const double nn = vnorm(x);
    return std::pair<double, CMatrix>{nn > 0 ? quad_form(bp, x).real() / (nn * nn) : 0.0, x};
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (form(mid).first < s) lo = mid;
    else hi = mid;
  }
  CMatrix x = form(0.5 * (lo + hi)).second;
  return normalized(x);
}

}  // namespace detail

/**
 * @brief Unit vector x with <Bx, x> close to target, interpolating polygon witnesses.
 *
 * The polygon is refined while the target sits in the inner/outer gap. A target certified
 * outside raises InputError. Otherwise the nearest inner-polygon point is realised and the
 * achieved residual is reported.
 */
inline RegionWitness nr_witness_in(NRPolygon poly, Complex target, double tol) {
  auto [m, p] = contains_point_adaptive(std::move(poly), target, tol);
  if (m.verdict == Tri::False) throw InputError("nr_witness: target not in range");
  const CMatrix& b = p.source;
  auto finish = [&](CMatrix x) {
    RegionWitness w;
    w.vector = normalized(x);
    w.point = target;
    w.residual = std::abs(quad_form(b, w.vector) - target);
    return w;
  };
  // Smallest-index polygon witness first.
  for (std::size_t j = 0; j < p.vertices.size(); ++j)
    if (std::abs(p.vertices[j] - target) <= tol) return finish(p.witnesses[j]);

  const Complex z = geom::polygon_nearest_point(p.vertices, p.is_degenerate, target);
  const auto& v = p.vertices;
  const std::size_t n = v.size();
  if (p.is_degenerate) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(v[j] - v[0]) > std::abs(v[hi] - v[0])) hi = j;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(v[j] - v[hi]) > std::abs(v[lo] - v[hi])) lo = j;
    }
    return finish(detail::segment_interpolate(b, p.witnesses[lo], p.witnesses[hi], z));
  }
  // Fan triangulation from vertex 0.
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Complex a = v[0], bb = v[k], c = v[k + 1];
    const double area = geom::cross(bb - a, c - a);
    if (std::abs(area) <= 1e-300) continue;
    const double wb = geom::cross(z - a, c - a) / area;
    const double wc = geom::cross(bb - a, z - a) / area;
    const double wa = 1.0 - wb - wc;
    const double eps = 1e-10;
    if (wa < -eps || wb < -eps || wc < -eps) continue;
    if (wb + wc <= 1e-14) return finish(p.witnesses[0]);
    const Complex q = (wb * bb + wc * c) / (wb + wc);
    CMatrix xq = detail::segment_interpolate(b, p.witnesses[k], p.witnesses[k + 1], q);
    return finish(detail::segment_interpolate(b, p.witnesses[0], xq, z));
  }
  // Fallback: nearest edge.
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    double d = geom::point_segment_distance(z, v[k], v[(k + 1) % n]);
    if (d < bd) bd = d, best = k;
  }
  return finish(detail::segment_interpolate(b, p.witnesses[best], p.witnesses[(best + 1) % n], z));
}

inline RegionWitness nr_witness(const CMatrix& b, Complex target, double tol, int n_angles = 64) {
  return nr_witness_in(nr_boundary(b, n_angles), target, tol);
}

/**
 * @brief Leftmost point of the range inside the strip {Re <= tol, |Im| <= tol}, with a witness.
 *
 * Real-axis crossings are preferred, so the returned point is real whenever the polygon
 * crosses the axis.
 */
inline std::optional<RegionWitness> nr_meets_nonpositive_reals(const NRPolygon& p, double tol) {
  const auto& v = p.vertices;
  std::optional<Complex> best;
  auto consider = [&](Complex z) {
    if (z.real() <= tol && std::abs(z.imag()) <= tol && (!best || z.real() < best->real())) best = z;
  };
  for (std::size_t k = 0; k < v.size(); ++k) {
    const Complex a = v[k], b = v[(k + 1) % v.size()];
    if (a.imag() == 0.0) consider(a);
    if ((a.imag() < 0 && b.imag() > 0) || (a.imag() > 0 && b.imag() < 0)) {
      const double s = a.imag() / (a.imag() - b.imag());
      consider(Complex((a + (b - a) * s).real(), 0.0));
    }
  }
  if (!best) {
    auto strip = geom::clip_imag(geom::clip_imag(v, tol, +1), tol, -1);
    for (auto z : strip) consider(z);
  }
  if (!best) return std::nullopt;
  return nr_witness_in(p, *best, tol);
}

/** @brief Distance between a vertex polygon and the ray (-inf, 0]. */
inline double ray_distance(const std::vector<Complex>& v, bool degenerate) {
  const double far = -4.0 * (1.0 + geom::extent(v));
  return geom::polygon_segment_distance(v, degenerate, Complex(far, 0.0), Complex(0.0, 0.0));
}

/** @brief Three-valued "meets (-inf, 0]" with the distance floor certificate of the outer polygon. */
struct RayMembership {
  Tri verdict = Tri::Inconclusive;
  double inner_distance = 0;
  double outer_distance = 0;
  std::optional<RegionWitness> witness;
  NRPolygon polygon;
};

inline RayMembership meets_nonpositive_adaptive(NRPolygon p, double tol, int max_angles = 4096) {
  RayMembership r;
  for (;;) {
    r.inner_distance = ray_distance(p.vertices, p.is_degenerate);
    r.outer_distance = ray_distance(p.outer, false);
    if (r.inner_distance <= tol) {
      r.witness = nr_meets_nonpositive_reals(p, tol);
      if (r.witness) {
        r.verdict = Tri::True;
        break;
      }
    }
    if (r.outer_distance > tol) {
      r.verdict = Tri::False;
      break;
    }
    if (int(p.angles.size()) * 2 > max_angles) {
      r.verdict = Tri::Inconclusive;
      break;
    }
    p = refined(p, int(p.angles.size()) * 2);
  }
  r.polygon = std::move(p);
  return r;
}

/** @brief Two-sided estimate of dist(0, W(C)). */
struct ZeroDistance {
  double lower = 0;   ///< max over scanned angles of lambda_min(Re(e^{-i theta} C)), clipped at 0
  double upper = 0;   ///< |<Cy, y>| at the best angle's bottom eigenvector y (a point of W(C))
  double theta = 0;
  CMatrix nearest;    ///< that eigenvector
};

/**
 * @brief dist(0, W(C)) via the support function: a dense angular scan of
 * lambda_min(Re(e^{-i theta} C)) with golden-section refinement around the best few angles.
 */
inline ZeroDistance zero_distance_bounds(const CMatrix& c, int scan = 256) {
  auto g = [&](double th) { return herm_eigvals(rotated_real_part(c, th)).back(); };
  std::vector<double> vals(static_cast<std::size_t>(scan));
  for (int j = 0; j < scan; ++j) vals[std::size_t(j)] = g(2.0 * M_PI * j / scan);
  std::vector<int> idx(static_cast<std::size_t>(scan));
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + 3, idx.end(),
                    [&](int a, int b) { return vals[std::size_t(a)] > vals[std::size_t(b)]; });
  double best = vals[std::size_t(idx[0])];
  double best_th = 2.0 * M_PI * idx[0] / scan;
  const double h = 2.0 * M_PI / scan;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int r = 0; r < 3; ++r) {
    double a = 2.0 * M_PI * idx[std::size_t(r)] / scan - h, b = a + 2.0 * h;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        a = x1, x1 = x2, f1 = f2, x2 = a + gr * (b - a), f2 = g(x2);
      } else {
        b = x2, x2 = x1, f2 = f1, x1 = b - gr * (b - a), f1 = g(x1);
      }
    }
    if (f1 > best) best = f1, best_th = x1;
    if (f2 > best) best = f2, best_th = x2;
  }
  ZeroDistance z;
  z.lower = std::max(0.0, best);
  z.theta = best_th;
  HermEig e = herm_eig(rotated_real_part(c, best_th));
  z.nearest = e.vectors.col(c.rows() - 1);
  z.upper = std::abs(quad_form(c, z.nearest));
  if (z.lower == 0.0) {
    const NRPolygon p = nr_boundary(c, 64);
    z.upper = std::min(z.upper, geom::polygon_point_distance(p.vertices, p.is_degenerate, 0.0));
  }
  return z;
}

inline double zero_distance(const CMatrix& c, int scan = 256) { return zero_distance_bounds(c, scan).lower; }

/** @brief Maximal numerical range: the numerical range of T compressed to H0, witnesses lifted. */
inline NRPolygon maximal_numerical_range(const CMatrix& t, const ToleranceConfig& tol = {}, int n_angles = 64) {
  detail::require_finite(t, "maximal_numerical_range");
  if (!t.is_square()) throw InputError("maximal_numerical_range: matrix is not square");
  if (t.max_abs() == 0.0) return nr_boundary(t, n_angles);
  NormAttainmentBasis nb = norm_attainment_basis(t, tol);
  return detail::boundary_of(t, nb.basis, n_angles);
}

/**
 * @brief Values <Tx, x> over random unit x with |Tx| >= |T| - slack.
 *
 * Each sample starts Gaussian and takes T*T power steps until it passes the filter, so the
 * cloud is independent of the eigen-decomposition used by maximal_numerical_range.
 */
inline std::vector<Complex> mnr_sampling_oracle(const CMatrix& t, double slack, int samples, std::uint64_t seed) {
  if (samples < 1000) throw InputError("mnr_sampling_oracle: at least 1000 samples");
  Rng rng(seed);
  const double nt = op_norm(t);
  const CMatrix g = t.adjoint() * t;
  std::vector<Complex> cloud;
  for (int s = 0; s < samples; ++s) {
    CMatrix x = rng.unit_vector(t.cols());
    for (int it = 0; it < 200; ++it) {
      if (vnorm(t * x) >= nt - slack) {
        cloud.push_back(quad_form(t, x));
        break;
      }
      x = normalized(g * x);
    }
  }
  return cloud;
}

/**
 * @brief Bound on outer_excess(maximal_numerical_range(t), z) for z in the sampling cloud.
 *
 * A filtered x has |P x|^2 <= e^2 = 2 |T| slack / gap off the top singular subspace, which moves
 * <Tx, x> at most 2 |T| (e + e^2) from the compression's range.
 */
inline double mnr_sampling_bound(const CMatrix& t, double slack, const ToleranceConfig& tol = {}) {
  if (t.max_abs() == 0.0) return 0.0;
  const NormAttainmentBasis nb = norm_attainment_basis(t, tol);
  const double nt = nb.norm;
  const double e2 = std::isinf(nb.gap) ? 0.0 : 2 * nt * slack / nb.gap;
  return 2 * nt * (std::sqrt(e2) + e2);
}

/** @brief Largest amount by which a point exceeds the outer polygon's support lines (<= 0 means inside). */
inline double outer_excess(const NRPolygon& p, Complex z) {
  double e = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < p.angles.size(); ++j)
    e = std::max(e, (std::polar(1.0, -p.angles[j]) * z).real() - p.support[j]);
  return e;
}

}  // namespace otk
