#pragma once

// Meshes of truncated conformal charts: a Delaunay core in a working chart plus
// structured logarithmic collars around every end, or a periodic grid for tori.

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "framed/delaunay.hpp"
#include "framed/divisor.hpp"
#include "framed/errors.hpp"
#include "framed/surface.hpp"

namespace framed {

/// zeta = c z when infinity is a puncture, otherwise zeta = c / (z - p0).
struct WorkingChart {
  bool shifted = false;
  Complex p0{};
  double scale = 1.0;

  Complex to_z(Complex zeta) const { return shifted ? p0 + scale / zeta : zeta / scale; }
  Complex from_z(Complex z) const { return shifted ? scale / (z - p0) : scale * z; }
  /// |dz/dzeta|^2
  double jac2(Complex zeta) const {
    return shifted ? scale * scale / std::norm(zeta * zeta) : 1.0 / (scale * scale);
  }
};

/// Local coordinate t at an end: 1/z at infinity, z - p in an unshifted working chart,
/// and t = a (z - p) / (z - p0) with a = p - p0 otherwise (tangent to z - p at p, affine in zeta).
struct EndChart {
  SpherePoint point;
  long order = 1;
  double r_trunc = 0.0;  // truncation circle |t| = r_trunc (Dirichlet)
  double r_glue = 0.0;   // gluing circle |t| = r_glue
  bool outer = false;    // the end sitting at zeta = infinity
  Complex a{};           // nonzero for the shifted-chart coordinate

  Complex to_z(Complex t) const {
    if (point.is_infinite()) return 1.0 / t;
    if (a != Complex{}) return point.z + a * t / (a - t);
    return point.z + t;
  }
  /// |dz/dt|^2
  double jac2(Complex t) const {
    if (point.is_infinite()) return 1.0 / std::norm(t * t);
    if (a != Complex{}) {
      const Complex d = a - t;
      return std::norm(a * a / (d * d));
    }
    return 1.0;
  }
};

/// Radius |t| of the truncation circle of an order-m end at parameter R.
inline double truncation_radius(long m, double R) {
  if (!(R > 1.0)) throw ValidationError("truncation parameter R must exceed 1");
  return m == 1 ? std::exp(-R) : std::pow(R, 1.0 / (1.0 - static_cast<double>(m)));
}

enum class PieceKind { Core, Collar, Torus };

struct MeshPiece {
  PieceKind kind = PieceKind::Core;
  int end = -1;
};

struct GlueSeam {
  int end = -1;
  std::vector<int> ring;  // shared vertices, counterclockwise in t
};

struct ConformalMesh {
  double R = 0.0, h = 0.0;
  WorkingChart chart;
  std::vector<EndChart> ends;
  std::vector<MeshPiece> pieces;
  std::vector<SpherePoint> excised;  // branch points removed by a Dirichlet disk
  double excision_radius = 0.0;
  bool periodic = false;
  Complex period1{}, period2{};

  std::vector<Complex> z;  // vertex positions in the global chart
  std::vector<double> e2l, K;
  std::vector<char> dirichlet;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> tri_piece;
  std::vector<std::array<Complex, 3>> tri_coords;  // positions in the piece chart
  std::vector<GlueSeam> seams;

  std::size_t n_vertices() const { return z.size(); }
  std::size_t n_triangles() const { return triangles.size(); }

  std::size_t n_edges() const {
    std::vector<std::pair<int, int>> e;
    e.reserve(3 * triangles.size());
    for (const auto& t : triangles)
      for (int k = 0; k < 3; ++k) e.emplace_back(std::minmax(t[k], t[(k + 1) % 3]));
    std::sort(e.begin(), e.end());
    return static_cast<std::size_t>(std::unique(e.begin(), e.end()) - e.begin());
  }

  long euler_characteristic() const {
    return static_cast<long>(n_vertices()) - static_cast<long>(n_edges()) + static_cast<long>(n_triangles());
  }

  /// Number of closed boundary curves (edges used by one triangle).
  int boundary_components() const;

  /// Global-chart point and |dz/dw|^2 for a point w of the given piece chart.
  std::pair<Complex, double> chart_point(int piece, Complex w) const {
    const MeshPiece& p = pieces[piece];
    switch (p.kind) {
      case PieceKind::Torus: return {w, 1.0};
      case PieceKind::Core: return {chart.to_z(w), chart.jac2(w)};
      default: {
        const EndChart& e = ends[p.end];
        const Complex t = std::exp(w);
        return {e.to_z(t), std::norm(t) * e.jac2(t)};
      }
    }
  }
};

namespace detail {

inline double triangle_min_angle(const std::array<Complex, 3>& p) {
  double best = std::numbers::pi;
  for (int k = 0; k < 3; ++k) {
    const Complex a = p[(k + 1) % 3] - p[k], b = p[(k + 2) % 3] - p[k];
    best = std::min(best, std::abs(std::arg(b / a)));
  }
  return best;
}

inline double signed_area(const std::array<Complex, 3>& p) {
  return 0.5 * static_cast<double>(orient(p[0], p[1], p[2]));
}

inline void boundary_edges(const std::vector<std::array<int, 3>>& tris, std::vector<std::pair<int, int>>& out) {
  std::vector<std::pair<int, int>> e;
  for (const auto& t : tris)
    for (int k = 0; k < 3; ++k) e.emplace_back(std::minmax(t[k], t[(k + 1) % 3]));
  std::sort(e.begin(), e.end());
  for (std::size_t i = 0; i < e.size();) {
    std::size_t j = i;
    while (j < e.size() && e[j] == e[i]) ++j;
    if (j - i == 1) out.push_back(e[i]);
    i = j;
  }
}

}  // namespace detail

inline int ConformalMesh::boundary_components() const {
  std::vector<std::pair<int, int>> be;
  detail::boundary_edges(triangles, be);
  std::vector<int> parent(n_vertices());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<char> on(n_vertices(), 0);
  for (const auto& [a, b] : be) {
    on[a] = on[b] = 1;
    parent[find(a)] = find(b);
  }
  int count = 0;
  for (std::size_t v = 0; v < parent.size(); ++v)
    if (on[v] && find(static_cast<int>(v)) == static_cast<int>(v)) ++count;
  return count;
}

/// Smallest interior angle over all triangles, in degrees (piece coordinates).
inline double min_angle_degrees(const ConformalMesh& m) {
  double best = 180.0;
  for (const auto& c : m.tri_coords) best = std::min(best, detail::triangle_min_angle(c) * 180.0 / std::numbers::pi);
  return best;
}

namespace detail {

class MeshBuilder {
 public:
  MeshBuilder(const SurfaceSpec& s, const SurfaceFields& F, double R, double h) : s_(s), F_(F) {
    m_.R = R;
    m_.h = h;
  }

  int add_vertex(Complex z, bool dirichlet) {
    m_.z.push_back(z);
    m_.dirichlet.push_back(dirichlet ? 1 : 0);
    return static_cast<int>(m_.z.size()) - 1;
  }

  void add_triangle(int piece, std::array<int, 3> v, std::array<Complex, 3> w) {
    if (signed_area(w) < 0) {
      std::swap(v[1], v[2]);
      std::swap(w[1], w[2]);
    }
    m_.triangles.push_back(v);
    m_.tri_piece.push_back(piece);
    m_.tri_coords.push_back(w);
  }

  int add_piece(PieceKind k, int end = -1) {
    m_.pieces.push_back({k, end});
    return static_cast<int>(m_.pieces.size()) - 1;
  }

  ConformalMesh& mesh() { return m_; }

  void finish() {
    m_.e2l.resize(m_.z.size());
    m_.K.resize(m_.z.size());
    for (std::size_t v = 0; v < m_.z.size(); ++v) {
      m_.e2l[v] = metric_factor(F_, m_.z[v]);
      m_.K[v] = gauss_curvature(F_, m_.z[v]);
    }
    const double a = min_angle_degrees(m_);
    if (!(a > 10.0)) throw MeshQuality("minimum angle " + format_real(a) + " degrees is below 10");
  }

 private:
  const SurfaceSpec& s_;
  const SurfaceFields& F_;
  ConformalMesh m_;
};

}  // namespace detail

/// Branch points of the surface that must be excised from the core.
inline std::vector<SpherePoint> mesh_branch_points(const SurfaceSpec& s, const SurfaceFields& F) {
  std::vector<SpherePoint> out;
  for (const auto& e : branch_divisor(s, F).entries()) out.push_back(e.point);
  return out;
}

namespace detail {

inline ConformalMesh build_torus_mesh(const SurfaceSpec& s, const SurfaceFields& F, double h) {
  MeshBuilder b(s, F, 0.0, h);
  const Complex w1 = s.period1, w2 = s.period2;
  const int n1 = std::max(3, static_cast<int>(std::ceil(std::abs(w1) / h)));
  const int n2 = std::max(3, static_cast<int>(std::ceil(std::abs(w2) / h)));
  const int piece = b.add_piece(PieceKind::Torus);
  auto pos = [&](int i, int j) { return (static_cast<double>(i) / n1) * w1 + (static_cast<double>(j) / n2) * w2; };
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) b.add_vertex(pos(i, j), false);
  auto id = [&](int i, int j) { return (j % n2) * n1 + (i % n1); };
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      const Complex pa = pos(i, j), pb = pos(i + 1, j), pc = pos(i, j + 1), pd = pos(i + 1, j + 1);
      // split along the shorter diagonal
      if (std::abs(pd - pa) <= std::abs(pc - pb)) {
        b.add_triangle(piece, {id(i, j), id(i + 1, j), id(i + 1, j + 1)}, {pa, pb, pd});
        b.add_triangle(piece, {id(i, j), id(i + 1, j + 1), id(i, j + 1)}, {pa, pd, pc});
      } else {
        b.add_triangle(piece, {id(i, j), id(i + 1, j), id(i, j + 1)}, {pa, pb, pc});
        b.add_triangle(piece, {id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)}, {pb, pd, pc});
      }
    }
  ConformalMesh& m = b.mesh();
  m.periodic = true;
  m.period1 = w1;
  m.period2 = w2;
  b.finish();
  return std::move(b.mesh());
}

}  // namespace detail

/// Mesh of the truncated surface B_R with target edge length h.
inline ConformalMesh build_mesh(const SurfaceSpec& s, const SurfaceFields& F, double R, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("mesh size h must be positive");
  if (!F.has_metric()) throw Unsupported("index computations need a metric");
  if (s.torus) return detail::build_torus_mesh(s, F, h);
  if (s.punctures.empty()) throw Unsupported("compact genus-0 surfaces are not meshed");

  const double two_pi = 2.0 * std::numbers::pi;
  detail::MeshBuilder b(s, F, R, h);
  ConformalMesh& m = b.mesh();

  // working chart with an end at zeta = infinity
  WorkingChart ch;
  std::size_t outer = 0;
  {
    auto it = std::find_if(s.punctures.begin(), s.punctures.end(), [](const SpherePoint& p) { return p.is_infinite(); });
    if (it == s.punctures.end()) {
      ch.shifted = true;
      ch.p0 = s.punctures.front().z;
      outer = 0;
    } else {
      outer = static_cast<std::size_t>(it - s.punctures.begin());
    }
  }
  const std::vector<SpherePoint> branch = mesh_branch_points(s, F);
  std::vector<Complex> q_unit;  // special points other than the outer end, chart with scale 1
  for (std::size_t i = 0; i < s.punctures.size(); ++i)
    if (i != outer) q_unit.push_back(ch.from_z(s.punctures[i].z));
  for (const auto& p : branch) q_unit.push_back(p.is_infinite() ? Complex{} : ch.from_z(p.z));
  double dmin = INFINITY;
  for (std::size_t i = 0; i < q_unit.size(); ++i)
    for (std::size_t j = i + 1; j < q_unit.size(); ++j) dmin = std::min(dmin, std::abs(q_unit[i] - q_unit[j]));
  ch.scale = std::isfinite(dmin) ? std::max(1.0, 1.0 / dmin) : 1.0;
  m.chart = ch;

  std::vector<Complex> q;
  for (const auto& c : q_unit) q.push_back(ch.scale * c);
  double qmax = 0.0;
  for (const auto& c : q) qmax = std::max(qmax, std::abs(c));
  const double Ro = 2.0 * (1.0 + qmax);

  // end charts
  for (std::size_t i = 0; i < s.punctures.size(); ++i) {
    EndChart e;
    e.point = s.punctures[i];
    e.order = end_order(F, e.point);
    e.r_trunc = truncation_radius(e.order, R);
    e.outer = (i == outer);
    if (ch.shifted && !e.outer) e.a = e.point.z - ch.p0;
    if (e.outer) {
      e.r_glue = ch.scale / Ro;
    } else {
      const Complex zq = ch.from_z(e.point.z);
      double d = INFINITY;
      for (const auto& c : q)
        if (std::abs(c - zq) > 1e-12) d = std::min(d, std::abs(c - zq));
      const double r_zeta = std::min({0.5, 0.3 * d, 0.3 * (Ro - std::abs(zq))});
      const double dzeta_dt = ch.shifted ? ch.scale / std::norm(e.a) : ch.scale;
      e.r_glue = r_zeta / dzeta_dt;
    }
    if (!(e.r_trunc < e.r_glue))
      throw DisjointnessViolation("truncation circle of the end at " + format_point(e.point) +
                                  " does not fit inside its gluing circle; increase R");
    m.ends.push_back(e);
  }
  const double eps = 0.5 * h;
  m.excision_radius = eps;
  m.excised = branch;

  // boundary rings of the core (in zeta) and the matching collar resolution
  const int n_collar = 8 * std::max(2, static_cast<int>(std::ceil(two_pi / h / 8.0)));
  struct Hole {
    Complex center;
    double radius;
    int end;  // -1 for a branch excision
    std::vector<int> ring;
  };
  std::vector<Hole> holes;
  std::vector<int> ring_size(m.ends.size());
  std::vector<Complex> pts;
  auto push_point = [&](Complex zeta, Complex z, bool dir) {
    pts.push_back(zeta);
    return b.add_vertex(z, dir);
  };
  for (std::size_t e = 0; e < m.ends.size(); ++e) {
    const EndChart& E = m.ends[e];
    int n = n_collar;
    auto max_chord = [&](int nn) {
      double best = 0.0;
      Complex prev = ch.from_z(E.to_z(Complex(E.r_glue, 0.0)));
      for (int k = 1; k <= nn; ++k) {
        const Complex cur = ch.from_z(E.to_z(std::polar(E.r_glue, two_pi * k / nn)));
        best = std::max(best, std::abs(cur - prev));
        prev = cur;
      }
      return best;
    };
    while (max_chord(n) > 1.05 * h) n *= 2;
    while (n % 2 == 0 && n / 2 >= 8 && max_chord(n / 2) <= 1.05 * h) n /= 2;
    ring_size[e] = n;
    const Complex zc = E.outer ? Complex{} : ch.from_z(E.point.z);
    const double rc = E.outer ? ch.scale / E.r_glue : (ch.shifted ? ch.scale / std::norm(E.a) : ch.scale) * E.r_glue;
    Hole hole{zc, rc, static_cast<int>(e), {}};
    for (int k = 0; k < n; ++k) {
      const Complex t = std::polar(E.r_glue, two_pi * k / n);
      const Complex z = E.to_z(t);
      hole.ring.push_back(push_point(ch.from_z(z), z, false));
    }
    holes.push_back(std::move(hole));
  }
  for (const auto& p : branch) {
    const Complex c = p.is_infinite() ? Complex{} : ch.from_z(p.z);
    Hole hole{c, eps, -1, {}};
    const int n = 8;
    for (int k = 0; k < n; ++k) {
      const Complex zeta = c + std::polar(eps, two_pi * k / n);
      hole.ring.push_back(push_point(zeta, ch.to_z(zeta), true));
    }
    holes.push_back(std::move(hole));
  }
  // geometric sanity of the core domain
  for (std::size_t i = 0; i < holes.size(); ++i) {
    if (holes[i].end >= 0 && m.ends[holes[i].end].outer) continue;
    if (std::abs(holes[i].center) + holes[i].radius > Ro - 2.0 * h)
      throw DisjointnessViolation("excised disk leaves the core");
    for (std::size_t j = i + 1; j < holes.size(); ++j) {
      if (holes[j].end >= 0 && m.ends[holes[j].end].outer) continue;
      if (std::abs(holes[i].center - holes[j].center) < holes[i].radius + holes[j].radius + 1.5 * h)
        throw DisjointnessViolation("excised disks overlap at mesh size " + format_real(h));
    }
  }
  const double Ro_eff = [&] {
    for (const auto& H : holes)
      if (H.end >= 0 && m.ends[H.end].outer) return std::abs(pts[H.ring.front()]);
    return Ro;
  }();

  // interior lattice
  const double margin = 0.6 * h;
  auto inside_domain = [&](Complex zeta, double pad) {
    if (std::abs(zeta) > Ro_eff - pad) return false;
    for (const auto& H : holes) {
      if (H.end >= 0 && m.ends[H.end].outer) continue;
      if (std::abs(zeta - H.center) < H.radius + pad) return false;
    }
    return true;
  };
  const double dy = h * std::sqrt(3.0) / 2.0;
  const double x0 = -Ro_eff + 0.318309886 * h, y0 = -Ro_eff + 0.271828183 * h;
  const int nx = static_cast<int>(std::ceil(2.0 * Ro_eff / h)) + 2;
  const int ny = static_cast<int>(std::ceil(2.0 * Ro_eff / dy)) + 2;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Complex zeta(x0 + i * h + (j % 2 ? 0.5 * h : 0.0), y0 + j * dy);
      if (!inside_domain(zeta, margin)) continue;
      pts.push_back(zeta);
      b.add_vertex(ch.to_z(zeta), false);
    }

  // core triangulation; the core's vertices are exactly 0..pts.size()-1
  const int core = b.add_piece(PieceKind::Core);
  {
    const auto tris = delaunay(pts);
    for (const auto& t : tris) {
      const Complex c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
      if (!inside_domain(c, 0.0)) continue;
      b.add_triangle(core, t, {pts[t[0]], pts[t[1]], pts[t[2]]});
    }
    // every ring edge must be a core boundary edge
    std::vector<std::pair<int, int>> be;
    detail::boundary_edges(m.triangles, be);
    std::sort(be.begin(), be.end());
    for (const auto& H : holes)
      for (std::size_t k = 0; k < H.ring.size(); ++k) {
        const auto e = std::minmax(H.ring[k], H.ring[(k + 1) % H.ring.size()]);
        if (!std::binary_search(be.begin(), be.end(), std::pair<int, int>(e)))
          throw MeshQuality("core triangulation does not conform to a boundary circle");
      }
    if (be.size() != [&] {
          std::size_t n = 0;
          for (const auto& H : holes) n += H.ring.size();
          return n;
        }())
      throw MeshQuality("core triangulation has stray boundary edges");
  }

  // collars in sigma = log t, graded toward the puncture
  for (std::size_t e = 0; e < m.ends.size(); ++e) {
    const EndChart& E = m.ends[e];
    const int piece = b.add_piece(PieceKind::Collar, static_cast<int>(e));
    const double s_g = std::log(E.r_glue), s_t = std::log(E.r_trunc);
    std::vector<int> ring = holes[e].ring;
    m.seams.push_back({static_cast<int>(e), ring});
    int n = ring_size[e];
    double s = s_g;
    int regular = 0;
    while (true) {
      const double dth = two_pi / n;
      const bool halve = n > n_collar && n % 2 == 0 && regular >= 2;
      const bool twice = n < n_collar && regular >= 2;
      const double step = halve ? 1.5 * dth : twice ? 0.75 * dth : dth;
      double s_next = s - step;
      const bool last = s_next <= s_t + 0.3 * step;
      if (last) s_next = s_t;
      const int n_next = last ? n : halve ? n / 2 : twice ? 2 * n : n;
      std::vector<int> next(n_next);
      for (int k = 0; k < n_next; ++k) {
        const Complex t = std::exp(Complex(s_next, two_pi * k / n_next));
        next[k] = b.add_vertex(E.to_z(t), last);
      }
      auto sig = [&](double ss, int k, int nn) { return Complex(ss, two_pi * k / nn); };
      if (n_next == n) {
        for (int k = 0; k < n; ++k) {
          const int k1 = k + 1;
          const int a = ring[k], bb = ring[k1 % n], c = next[k], d = next[k1 % n];
          b.add_triangle(piece, {a, c, d}, {sig(s, k, n), sig(s_next, k, n), sig(s_next, k1, n)});
          b.add_triangle(piece, {a, d, bb}, {sig(s, k, n), sig(s_next, k1, n), sig(s, k1, n)});
        }
      } else if (n_next < n) {
        for (int k = 0; k < n_next; ++k) {
          const int a0 = ring[2 * k], a1 = ring[2 * k + 1], a2 = ring[(2 * k + 2) % n];
          const int b0 = next[k], b1 = next[(k + 1) % n_next];
          const Complex pa0 = sig(s, 2 * k, n), pa1 = sig(s, 2 * k + 1, n), pa2 = sig(s, 2 * k + 2, n);
          const Complex pb0 = sig(s_next, k, n_next), pb1 = sig(s_next, k + 1, n_next);
          b.add_triangle(piece, {a0, a1, b0}, {pa0, pa1, pb0});
          b.add_triangle(piece, {a1, b1, b0}, {pa1, pb1, pb0});
          b.add_triangle(piece, {a1, a2, b1}, {pa1, pa2, pb1});
        }
      } else {
        for (int k = 0; k < n; ++k) {
          const int a0 = ring[k], a1 = ring[(k + 1) % n];
          const int b0 = next[2 * k], b1 = next[2 * k + 1], b2 = next[(2 * k + 2) % n_next];
          const Complex pa0 = sig(s, k, n), pa1 = sig(s, k + 1, n);
          const Complex pb0 = sig(s_next, 2 * k, n_next), pb1 = sig(s_next, 2 * k + 1, n_next),
                        pb2 = sig(s_next, 2 * k + 2, n_next);
          b.add_triangle(piece, {a0, b0, b1}, {pa0, pb0, pb1});
          b.add_triangle(piece, {a0, b1, a1}, {pa0, pb1, pa1});
          b.add_triangle(piece, {a1, b1, b2}, {pa1, pb1, pb2});
        }
      }
      const bool changed = n_next != n;
      regular = changed ? 0 : regular + 1;
      ring = std::move(next);
      n = n_next;
      s = s_next;
      if (last) break;
    }
  }
  b.finish();
  return std::move(b.mesh());
}

inline ConformalMesh build_mesh(const SurfaceSpec& s, double R, double h) { return build_mesh(s, make_fields(s), R, h); }

/// Wavefront OBJ of the mesh in the global chart (x, y) = z; per-vertex K and e^{2 lambda}
/// are written as "# K <value> <e2l>" comment lines.
inline void write_mesh_obj(const ConformalMesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out.precision(17);
  out << "# vertices " << m.n_vertices() << " triangles " << m.n_triangles() << "\n";
  for (std::size_t v = 0; v < m.n_vertices(); ++v) {
    out << "v " << m.z[v].real() << " " << m.z[v].imag() << " 0\n";
    out << "# K " << m.K[v] << " " << m.e2l[v] << "\n";
  }
  for (const auto& t : m.triangles) out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

}  // namespace framed
