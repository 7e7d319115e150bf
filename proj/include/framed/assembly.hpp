#pragma once

// P1 finite elements for the Jacobi form Q(f, f) = int |grad f|^2 + 2K f^2 da and the
// weighted mass int u^2 f^2 da on a ConformalMesh.

#include <Eigen/Sparse>
#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <thread>
#include <vector>

#include "framed/errors.hpp"
#include "framed/mesh.hpp"

namespace framed {

enum class PotentialRule {
  Barycentric,  // potential frozen at the centroid, exact P1 products
  Dunavant6     // degree-4 rule on the full integrand
};

struct AssemblyOptions {
  PotentialRule rule = PotentialRule::Barycentric;
  unsigned threads = 1;
};

/// Per-vertex weight u > 0.
struct WeightField {
  std::vector<double> u;
};

/// u at an end of order m as a function of r = |t|.
inline double end_weight(long m, double r) {
  const double L = std::log(1.0 / r);
  if (m == 1) return 1.0 / (L * std::log(L));
  return std::pow(r, static_cast<double>(m - 1)) / (static_cast<double>(m - 1) * L);
}

/// Radius below which the end formula for u is used (so log log |t|^{-1} >= log 2).
inline double weight_switch_radius(const EndChart& e) { return std::min(e.r_glue, std::exp(-2.0)); }

/// u at a point of a mesh piece: the end formula inside |t| < tau, continued by its
/// value at tau outward, and 1 on the core.
inline double weight_at(const ConformalMesh& m, int piece, Complex w) {
  const MeshPiece& p = m.pieces[piece];
  if (p.kind != PieceKind::Collar) return 1.0;
  const EndChart& e = m.ends[p.end];
  const double tau = weight_switch_radius(e);
  const double r = std::min(std::exp(w.real()), tau);
  return end_weight(e.order, r) / end_weight(e.order, tau);
}

inline WeightField weight_field(const ConformalMesh& m) {
  WeightField W;
  W.u.assign(m.n_vertices(), 1.0);
  for (std::size_t t = 0; t < m.n_triangles(); ++t)
    for (int k = 0; k < 3; ++k) W.u[m.triangles[t][k]] = weight_at(m, m.tri_piece[t], m.tri_coords[t][k]);
  return W;
}

struct SpectralMatrices {
  Eigen::SparseMatrix<double> A, B;
  std::vector<int> vertex_to_dof;  // -1 on Dirichlet vertices
  std::vector<int> dof_to_vertex;
};

struct ElementMatrices {
  std::array<double, 9> A{}, B{};
};

namespace detail {

struct QuadPoint {
  double l0, l1, l2, w;
};

inline const std::vector<QuadPoint>& dunavant6() {
  static const std::vector<QuadPoint> q = [] {
    const double a = 0.445948490915965, wa = 0.223381589678011;
    const double b = 0.091576213509771, wb = 0.109951743655322;
    return std::vector<QuadPoint>{{a, a, 1 - 2 * a, wa}, {a, 1 - 2 * a, a, wa}, {1 - 2 * a, a, a, wa},
                                  {b, b, 1 - 2 * b, wb}, {b, 1 - 2 * b, b, wb}, {1 - 2 * b, b, b, wb}};
  }();
  return q;
}

struct PointData {
  double V, mass;  // 2K e^{2 lambda} and u^2 e^{2 lambda}, both in the piece chart
};

inline PointData point_data(const ConformalMesh& m, const SurfaceFields& F, int piece, Complex w) {
  const auto [z, J] = m.chart_point(piece, w);
  const double V = jacobi_potential(F, z) * J;
  const double u = weight_at(m, piece, w);
  const double mass = u * u * metric_factor(F, z) * J;
  if (!std::isfinite(V) || !std::isfinite(mass))
    throw AssemblyError("non-finite potential or weight at z = " + format_complex(z));
  return {V, mass};
}

}  // namespace detail

/// Stiffness plus potential-weighted consistent mass for constant coefficients V and W.
inline ElementMatrices p1_element(const std::array<Complex, 3>& p, double V, double W) {
  const double area = detail::signed_area(p);
  if (!(area > 0.0)) throw AssemblyError("degenerate triangle");
  ElementMatrices E;
  // grad l_i is the edge opposite vertex i rotated by 90 degrees over 2 area
  std::array<Complex, 3> e;
  for (int i = 0; i < 3; ++i) e[i] = p[(i + 2) % 3] - p[(i + 1) % 3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double mij = area / 12.0 * (i == j ? 2.0 : 1.0);
      E.A[3 * i + j] = (e[i].real() * e[j].real() + e[i].imag() * e[j].imag()) / (4.0 * area) + V * mij;
      E.B[3 * i + j] = W * mij;
    }
  return E;
}

/// Element matrices of one triangle (row-major 3x3).
inline ElementMatrices element_matrices(const ConformalMesh& m, const SurfaceFields& F, std::size_t t,
                                        PotentialRule rule) {
  const auto& p = m.tri_coords[t];
  const int piece = m.tri_piece[t];
  if (rule == PotentialRule::Barycentric) {
    const detail::PointData d = detail::point_data(m, F, piece, (p[0] + p[1] + p[2]) / 3.0);
    return p1_element(p, d.V, d.mass);
  }
  ElementMatrices E = p1_element(p, 0.0, 0.0);
  const double area = detail::signed_area(p);
  for (const auto& q : detail::dunavant6()) {
    const std::array<double, 3> l{q.l0, q.l1, q.l2};
    const detail::PointData d = detail::point_data(m, F, piece, q.l0 * p[0] + q.l1 * p[1] + q.l2 * p[2]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double mij = q.w * area * l[i] * l[j];
        E.A[3 * i + j] += d.V * mij;
        E.B[3 * i + j] += d.mass * mij;
      }
  }
  return E;
}

/// Global matrices on the free (non-Dirichlet) vertices.  Element work is split over
/// threads; accumulation runs in triangle order, so results do not depend on the thread count.
inline SpectralMatrices assemble(const ConformalMesh& m, const SurfaceFields& F, const AssemblyOptions& opt = {}) {
  SpectralMatrices S;
  S.vertex_to_dof.assign(m.n_vertices(), -1);
  for (std::size_t v = 0; v < m.n_vertices(); ++v)
    if (!m.dirichlet[v]) {
      S.vertex_to_dof[v] = static_cast<int>(S.dof_to_vertex.size());
      S.dof_to_vertex.push_back(static_cast<int>(v));
    }
  const std::size_t nt = m.n_triangles();
  std::vector<ElementMatrices> elems(nt);
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, 64));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned id) {
    try {
      for (std::size_t t = id; t < nt; t += threads) elems[t] = element_matrices(m, F, t, opt.rule);
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<Eigen::Triplet<double>> ta, tb;
  ta.reserve(9 * nt);
  tb.reserve(9 * nt);
  for (std::size_t t = 0; t < nt; ++t)
    for (int i = 0; i < 3; ++i) {
      const int di = S.vertex_to_dof[m.triangles[t][i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = S.vertex_to_dof[m.triangles[t][j]];
        if (dj < 0) continue;
        ta.emplace_back(di, dj, elems[t].A[3 * i + j]);
        tb.emplace_back(di, dj, elems[t].B[3 * i + j]);
      }
    }
  const auto n = static_cast<Eigen::Index>(S.dof_to_vertex.size());
  S.A.resize(n, n);
  S.B.resize(n, n);
  S.A.setFromTriplets(ta.begin(), ta.end());
  S.B.setFromTriplets(tb.begin(), tb.end());
  S.A.makeCompressed();
  S.B.makeCompressed();
  return S;
}

/// Entrywise equality of two sparse matrices (same pattern, same values).
inline bool identical(const Eigen::SparseMatrix<double>& X, const Eigen::SparseMatrix<double>& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols() || X.nonZeros() != Y.nonZeros()) return false;
  for (Eigen::Index k = 0; k < X.outerSize(); ++k) {
    Eigen::SparseMatrix<double>::InnerIterator a(X, k), b(Y, k);
    for (; a && b; ++a, ++b)
      if (a.index() != b.index() || a.value() != b.value()) return false;
    if (a || b) return false;
  }
  return true;
}

/// Vector of nodal values f(z_v) on the free vertices.
template <class Fn>
Eigen::VectorXd interpolate(const ConformalMesh& m, const SpectralMatrices& S, Fn&& f) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(S.dof_to_vertex.size()));
  for (std::size_t d = 0; d < S.dof_to_vertex.size(); ++d) x[static_cast<Eigen::Index>(d)] = f(S.dof_to_vertex[d]);
  return x;
}

}  // namespace framed
