#pragma once

// Triangulated images of a chart grid: Euclidean minimal immersion or the Poincare-ball
// picture of the Bryant surface, propagated edge by edge from a base vertex.

#include <array>
#include <cmath>
#include <fstream>
#include <queue>
#include <string>
#include <vector>

#include "framed/monodromy.hpp"
#include "framed/null_lift.hpp"
#include "framed/quadrature.hpp"
#include "framed/representations.hpp"

namespace framed {

enum class ImmersionModel { Euclidean, Ball };

struct ImmersedMesh {
  std::vector<Complex> z;
  std::vector<std::array<double, 3>> x;
  std::vector<std::array<int, 3>> triangles;
  ImmersionModel model = ImmersionModel::Euclidean;
};

struct GridDomain {
  Complex center{};
  double half_width = 1.5;
  double hole_radius = 0.15;
  std::vector<Complex> holes;
};

/// Square around the finite special points with round holes at punctures and poles.
inline GridDomain grid_domain(const SurfaceSpec& s, const SurfaceFields& F, int n) {
  if (s.torus) throw Unsupported("no immersion for a torus given intrinsically");
  GridDomain d;
  d.holes = singular_candidates(s, F);
  double r = 1.0;
  for (const auto& p : s.punctures)
    if (!p.is_infinite()) r = std::max(r, std::abs(p.z));
  d.half_width = 1.5 * r;
  const double edge = 2.0 * d.half_width / n;
  d.hole_radius = std::max(0.1 * d.half_width, 1.5 * edge);
  return d;
}

namespace detail {

inline ImmersedMesh grid_mesh(const GridDomain& d, int n) {
  ImmersedMesh m;
  std::vector<int> id((n + 1) * (n + 1), -1);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const Complex z = d.center + d.half_width * Complex(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n);
      bool keep = true;
      for (const auto& q : d.holes) keep = keep && std::abs(z - q) > d.hole_radius;
      if (!keep) continue;
      id[j * (n + 1) + i] = static_cast<int>(m.z.size());
      m.z.push_back(z);
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = id[j * (n + 1) + i], b = id[j * (n + 1) + i + 1];
      const int c = id[(j + 1) * (n + 1) + i + 1], e = id[(j + 1) * (n + 1) + i];
      if (a < 0 || b < 0 || c < 0 || e < 0) continue;
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, e});
    }
  return m;
}

/// Breadth-first spanning tree over triangle edges: visit(parent, child) in BFS order.
template <class Visit>
void spanning_tree(const ImmersedMesh& m, int root, Visit&& visit) {
  std::vector<std::vector<int>> adj(m.z.size());
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      adj[t[k]].push_back(t[(k + 1) % 3]);
      adj[t[(k + 1) % 3]].push_back(t[k]);
    }
  std::vector<char> seen(m.z.size(), 0);
  std::queue<int> q;
  q.push(root);
  seen[root] = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        visit(v, w);
        q.push(w);
      }
  }
}

inline int nearest_vertex(const ImmersedMesh& m, Complex z) {
  int best = 0;
  for (std::size_t i = 1; i < m.z.size(); ++i)
    if (std::abs(m.z[i] - z) < std::abs(m.z[best] - z)) best = static_cast<int>(i);
  return best;
}

/// Drops vertices the tree did not reach (separate components) and re-indexes.
inline void keep_reached(ImmersedMesh& m, const std::vector<char>& reached) {
  std::vector<int> map(m.z.size(), -1);
  ImmersedMesh r;
  r.model = m.model;
  for (std::size_t i = 0; i < m.z.size(); ++i)
    if (reached[i]) {
      map[i] = static_cast<int>(r.z.size());
      r.z.push_back(m.z[i]);
      r.x.push_back(m.x[i]);
    }
  for (const auto& t : m.triangles)
    if (map[t[0]] >= 0 && map[t[1]] >= 0 && map[t[2]] >= 0) r.triangles.push_back({map[t[0]], map[t[1]], map[t[2]]});
  m = std::move(r);
}

}  // namespace detail

/// Grid of n x n cells; Euclidean needs Weierstrass data, the ball model takes Bryant data
/// or develops minimal data through the Lawson correspondence with F = I at the base vertex.
inline ImmersedMesh immerse_grid(const SurfaceSpec& s, ImmersionModel model, int n = 40) {
  if (n < 2) throw ValidationError("grid: need at least 2 cells per side");
  SurfaceSpec spec = s;
  SurfaceFields F = make_fields(spec);
  if (model == ImmersionModel::Euclidean && F.is_bryant()) {
    spec = lawson_bryant_to_min(spec);
    F = make_fields(spec);
  }
  if (model == ImmersionModel::Euclidean && F.kind != SurfaceFields::Kind::Weierstrass)
    throw Unsupported("euclidean model needs Weierstrass or Bryant data");
  if (model == ImmersionModel::Ball && F.kind != SurfaceFields::Kind::Weierstrass && !F.is_bryant())
    throw Unsupported("ball model needs Weierstrass or Bryant data");

  const GridDomain d = grid_domain(spec, F, n);
  ImmersedMesh m = detail::grid_mesh(d, n);
  m.model = model;
  if (m.z.empty()) throw ValidationError("grid: every vertex falls in a hole");
  m.x.assign(m.z.size(), {0.0, 0.0, 0.0});
  const int root = detail::nearest_vertex(m, d.center + Complex(0.31, 0.47) * d.half_width);
  std::vector<char> reached(m.z.size(), 0);
  reached[root] = 1;

  if (model == ImmersionModel::Euclidean) {
    detail::spanning_tree(m, root, [&](int a, int b) {
      for (int k = 0; k < 3; ++k) {
        auto f = [&](Complex w) { return immersion_integrands(F, w)[k]; };
        m.x[b][k] = m.x[a][k] + integrate_segment(f, m.z[a], m.z[b], 1e-11).real();
      }
      reached[b] = 1;
    });
  } else if (F.kind == SurfaceFields::Kind::BryantExplicit) {
    for (std::size_t i = 0; i < m.z.size(); ++i) {
      m.x[i] = bryant_position(omega_matrix(*F.f, *F.g, m.z[i])).ball;
      reached[i] = 1;
    }
  } else {
    std::vector<Mat2> lift(m.z.size(), Mat2::identity());
    m.x[root] = bryant_position(lift[root]).ball;
    detail::spanning_tree(m, root, [&](int a, int b) {
      lift[b] = NullLift(F, m.z[a], lift[a]).at(m.z[b]);
      m.x[b] = bryant_position(lift[b]).ball;
      reached[b] = 1;
    });
  }
  detail::keep_reached(m, reached);
  return m;
}

inline void write_immersion_obj(const ImmersedMesh& m, const std::string& path, const std::string& title = "") {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out.precision(12);
  if (!title.empty()) out << "# " << title << "\n";
  out << "# model " << (m.model == ImmersionModel::Ball ? "ball" : "euclidean") << "\n";
  for (const auto& x : m.x) out << "v " << x[0] << " " << x[1] << " " << x[2] << "\n";
  for (const auto& t : m.triangles) out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

}  // namespace framed
