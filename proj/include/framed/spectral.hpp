#pragma once

// Morse index estimation on truncated meshes, the divisor-bound comparison, and
// diagnostics: log-cutoff test functions, weighted eigenvalues, L^2_* quadrature.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "framed/assembly.hpp"
#include "framed/divisor.hpp"
#include "framed/inertia.hpp"
#include "framed/mesh.hpp"
#include "framed/rational.hpp"

namespace framed {

struct SpectralRun {
  double R = 0.0, h = 0.0;
  std::size_t n_vertices = 0, n_dofs = 0;
  long minus = 0, zero = 0;
  double retry_shift = 0.0;
  double min_angle = 0.0;
};

struct SpectralReport {
  std::string surface;
  std::vector<SpectralRun> runs;
  IndexBound bound;
  std::vector<std::string> monotonicity_log;  // one line per violation of R-monotonicity
  bool converged = false;
  long estimate = -1;  // valid only when converged
  std::size_t excised_points = 0;
  double excision_radius = 0.0;

  std::string trace() const {
    std::ostringstream os;
    for (const auto& r : runs)
      os << "R=" << r.R << " h=" << r.h << " minus=" << r.minus << " zero=" << r.zero << "\n";
    return os.str();
  }
};

struct IndexOptions {
  AssemblyOptions assembly;
  double eps_zero = 1e-9;
};

/// Index count for one (R, h).
inline SpectralRun spectral_run(const SurfaceSpec& s, const SurfaceFields& F, double R, double h,
                                const IndexOptions& opt = {}) {
  const ConformalMesh m = build_mesh(s, F, R, h);
  const SpectralMatrices S = assemble(m, F, opt.assembly);
  const Inertia in = negative_inertia(S.A, opt.eps_zero);
  SpectralRun r;
  r.R = R;
  r.h = h;
  r.n_vertices = m.n_vertices();
  r.n_dofs = static_cast<std::size_t>(S.A.rows());
  r.minus = in.negative;
  r.zero = in.zero;
  r.retry_shift = in.retry_shift;
  r.min_angle = min_angle_degrees(m);
  return r;
}

/// Runs the (R, h) schedule.  Converged when negative and zero counts agree on every run
/// at the last two R values (all h of the schedule, at least two refinements) and R is monotone.
inline SpectralReport estimate_index(const SurfaceSpec& s, std::vector<double> Rs, std::vector<double> hs,
                                     const IndexOptions& opt = {}) {
  if (s.sidedness != Sidedness::TwoSided) throw Unsupported("index estimation needs a two-sided surface");
  if (Rs.empty() || hs.empty()) throw ValidationError("empty R or h schedule");
  std::sort(Rs.begin(), Rs.end());
  std::sort(hs.begin(), hs.end(), std::greater<>());
  const SurfaceFields F = make_fields(s);
  SpectralReport rep;
  rep.surface = s.name;
  rep.bound = index_bound(s.genus(), fundamental_divisor(s, F), s.sidedness);
  const std::vector<double>& Rlist = Rs;  // tori ignore R but report every row
  for (double R : Rlist)
    for (double h : hs) rep.runs.push_back(spectral_run(s, F, R, h, opt));
  if (!s.torus) {
    const ConformalMesh m0 = build_mesh(s, F, Rs.front(), hs.front());
    rep.excised_points = m0.excised.size();
    rep.excision_radius = m0.excised.empty() ? 0.0 : m0.excision_radius;
  }
  for (double h : hs) {
    const SpectralRun* prev = nullptr;
    for (const auto& r : rep.runs) {
      if (r.h != h) continue;
      if (prev && r.minus < prev->minus) {
        std::ostringstream os;
        os << "h=" << h << ": negative count drops from " << prev->minus << " at R=" << prev->R << " to " << r.minus
           << " at R=" << r.R;
        rep.monotonicity_log.push_back(os.str());
      }
      prev = &r;
    }
  }
  const double R_cut = Rlist.size() >= 2 ? Rlist[Rlist.size() - 2] : Rlist.back();
  const SpectralRun* ref = nullptr;
  bool ok = hs.size() >= 3 && Rlist.size() >= 2 && rep.monotonicity_log.empty();
  for (const auto& r : rep.runs) {
    if (r.R < R_cut) continue;
    if (!ref) ref = &r;
    if (r.minus != ref->minus || r.zero != ref->zero) ok = false;
  }
  rep.converged = ok && ref != nullptr;
  if (rep.converged) rep.estimate = ref->minus;
  return rep;
}

/// The converged estimate, or NotConverged with the full trace.
inline long index_estimate(const SpectralReport& rep) {
  if (!rep.converged) throw NotConverged("index counts did not stabilize:\n" + rep.trace());
  return rep.estimate;
}

struct BoundVerdict {
  bool pass = false;
  long estimate = 0;
  long ceiling = 0;
  long margin = 0;       // estimate - ceiling
  std::string bound;     // exact rational
};

inline BoundVerdict compare_bound(const SpectralReport& rep, const IndexBound& bound) {
  BoundVerdict v;
  v.estimate = index_estimate(rep);
  v.ceiling = bound.ceiling();
  v.margin = v.estimate - v.ceiling;
  v.pass = v.margin >= 0;
  v.bound = bound.fraction();
  return v;
}

inline BoundVerdict compare_bound(const SpectralReport& rep) { return compare_bound(rep, rep.bound); }

// ---- log-cutoff test functions ------------------------------------------------------

namespace detail {

/// Smooth step: 0 for x <= 0, 1 for x >= 1.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

inline double smooth_step_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a * b * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x))) / ((a + b) * (a + b));
}

/// psi_R as a function of s = log|t| at an end of order m.
inline double log_cutoff_psi(long m, double R, double s) {
  if (m == 1) return 2.0 - std::log(-s) / std::log(R);
  return 2.0 - static_cast<double>(m - 1) * (-s) / std::log(R);
}

/// Values of s where psi_R = 1 (inner edge of B_R) and psi_R = 0.
inline std::pair<double, double> log_cutoff_support(long m, double R) {
  if (m == 1) return {-R, -R * R};
  const double k = std::log(R) / static_cast<double>(m - 1);
  return {-k, -2.0 * k};
}

}  // namespace detail

struct CutoffCheck {
  double discrete = 0.0;  // phi^T A phi
  double analytic = 0.0;  // Q(phi) by one-dimensional quadrature
  double rayleigh = 0.0;  // phi^T A phi / phi^T B phi
  double relative_error() const { return std::abs(discrete - analytic) / std::abs(analytic); }
};

/// Test function phi = xi o psi_R (1 on B_R, 0 beyond B_{R^2}) evaluated on a mesh whose
/// truncation lies outside B_{R^2}.
inline CutoffCheck log_cutoff_check(const SurfaceSpec& s, const SurfaceFields& F, const ConformalMesh& m,
                                    double R_cut, const AssemblyOptions& aopt = {}) {
  if (s.torus) throw Unsupported("log-cutoff test functions need ends");
  for (const auto& e : m.ends) {
    const auto [s_in, s_out] = detail::log_cutoff_support(e.order, R_cut);
    if (s_in > std::log(e.r_glue)) throw ValidationError("cutoff region reaches the core; increase R_cut");
    if (s_out < std::log(e.r_trunc)) throw ValidationError("mesh truncation cuts the test function; increase R");
  }
  // nodal values: 1 on the core, xi(psi(s)) on collars
  std::vector<double> phi(m.n_vertices(), 1.0);
  for (std::size_t t = 0; t < m.n_triangles(); ++t) {
    const MeshPiece& p = m.pieces[m.tri_piece[t]];
    if (p.kind != PieceKind::Collar) continue;
    const long order = m.ends[p.end].order;
    for (int k = 0; k < 3; ++k)
      phi[m.triangles[t][k]] = detail::smooth_step(detail::log_cutoff_psi(order, R_cut, m.tri_coords[t][k].real()));
  }
  const SpectralMatrices S = assemble(m, F, aopt);
  const Eigen::VectorXd x = interpolate(m, S, [&](int v) { return phi[v]; });
  CutoffCheck c;
  c.discrete = x.dot(S.A * x);
  c.rayleigh = c.discrete / x.dot(S.B * x);

  // analytic: 2 pi int phi'(s)^2 ds per end, plus int V phi^2 = 2 int K dA - int V (1 - phi^2)
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double two_pi = 2.0 * std::numbers::pi;
  double energy = 0.0, correction = 0.0;
  const int n_theta = 128;
  for (std::size_t ei = 0; ei < m.ends.size(); ++ei) {
    const EndChart& e = m.ends[ei];
    const long order = e.order;
    const auto [s_in, s_out] = detail::log_cutoff_support(order, R_cut);
    // in x = psi: ds = dx / psi'(s), so int xi'(psi)^2 psi'^2 ds = int xi'(x)^2 psi'(s(x)) dx
    auto dpsi_at = [&](double x) {
      if (order == 1) {
        const double s_x = -std::pow(R_cut, 2.0 - x);
        return -1.0 / (s_x * std::log(R_cut));
      }
      return static_cast<double>(order - 1) / std::log(R_cut);
    };
    energy += two_pi * GK::integrate([&](double x) {
      const double d = detail::smooth_step_derivative(x);
      return d * d * dpsi_at(x);
    }, 0.0, 1.0, 15, 1e-13);
    auto ring_V = [&](double ss) {
      double acc = 0.0;
      for (int k = 0; k < n_theta; ++k) {
        const Complex t = std::exp(Complex(ss, two_pi * (k + 0.5) / n_theta));
        acc += jacobi_potential(F, e.to_z(t)) * std::norm(t) * e.jac2(t);
      }
      return acc * two_pi / n_theta;
    };
    auto one_minus = [&](double ss) {
      const double p = detail::smooth_step(detail::log_cutoff_psi(order, R_cut, ss));
      return 1.0 - p * p;
    };
    correction += GK::integrate([&](double ss) { return ring_V(ss) * one_minus(ss); }, s_out, s_in, 15, 1e-12);
    correction += GK::integrate(ring_V, s_out - 30.0, s_out, 15, 1e-12);
  }
  c.analytic = energy + 2.0 * total_curvature(F) - correction;
  return c;
}

// ---- generalized eigenvalues of (A, B) ---------------------------------------------

/// The smallest k eigenvalues of A x = lambda B x by shift-invert subspace iteration,
/// with the shift certified below the spectrum by an inertia count.
inline std::vector<double> smallest_generalized_eigenvalues(const SpectralMatrices& S, int k, double tol = 1e-8,
                                                            int max_iter = 300) {
  const Eigen::Index n = S.A.rows();
  if (n == 0 || k <= 0) return {};
  const int p = static_cast<int>(std::min<Eigen::Index>(n, 2 * k + 4));
  // a shift below every eigenvalue: Gershgorin on B^{-1/2} A B^{-1/2} is unavailable, so step down
  // until A - sigma B is positive definite
  const double scaleA = inf_norm(S.A), scaleB = std::max(inf_norm(S.B), 1e-300);
  double sigma = -scaleA / scaleB;
  for (int tries = 0;; ++tries) {
    const Eigen::SparseMatrix<double> M = S.A - sigma * S.B;
    detail::SparseLDLT ldlt(M);
    bool pd = ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0).all();
    if (pd) break;
    if (tries > 60) throw NotConverged("no positive definite shift found");
    sigma *= 4.0;
  }
  std::mt19937 rng(2024);
  std::normal_distribution<double> N;
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = N(rng);
  std::vector<double> prev;
  for (int refine = 0; refine < 3; ++refine) {
    const Eigen::SparseMatrix<double> M = S.A - sigma * S.B;
    detail::SparseLDLT ldlt(M);
    if (ldlt.info() != Eigen::Success) throw FactorizationBreakdown("shifted factorization failed");
    std::vector<double> vals;
    for (int it = 0; it < max_iter; ++it) {
      Eigen::MatrixXd Y = ldlt.solve(S.B * X);
      // B-orthonormal Ritz basis
      const Eigen::MatrixXd Ar = Y.transpose() * (S.A * Y);
      const Eigen::MatrixXd Br = Y.transpose() * (S.B * Y);
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(0.5 * (Ar + Ar.transpose()),
                                                                     0.5 * (Br + Br.transpose()));
      if (ges.info() != Eigen::Success) throw NotConverged("Rayleigh-Ritz step failed");
      X = Y * ges.eigenvectors();
      vals.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + p);
      bool done = prev.size() == vals.size();
      for (int i = 0; done && i < k; ++i)
        done = std::abs(vals[i] - prev[i]) <= tol * std::max(1.0, std::abs(vals[i]));
      prev = vals;
      if (done) break;
    }
    // move the shift just below the lowest Ritz value and confirm with an inertia count
    const double gap = std::max(0.05 * std::abs(vals[0]), 1e-6 * std::abs(sigma) + 1e-12);
    const double candidate = vals[0] - gap;
    if (candidate <= sigma) break;
    const Eigen::SparseMatrix<double> Mc = S.A - candidate * S.B;
    detail::SparseLDLT lc(Mc);
    if (lc.info() != Eigen::Success || !(lc.vectorD().array() > 0).all()) break;
    sigma = candidate;
    prev.clear();
  }
  prev.resize(static_cast<std::size_t>(k));
  return prev;
}

// ---- weighted L^2 of 1-forms by quadrature --------------------------------------------

/// int u^2 |w|^2 dx dy over small punctured disks |t| in [e^{-L_{j+1}}, e^{-L_j}], summed over
/// the ends (u from the end formula), poles of w and infinity (u = 1 there), accumulated over
/// depths L_j = L0 2^j.  dx dy is the flat measure of the local coordinate t; |w|^2 da is
/// conformally invariant.
inline std::vector<double> l2star_end_integrals(const Expr& w, const SurfaceSpec& s, const SurfaceFields& F,
                                                double L0 = 1.0, int levels = 4) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double two_pi = 2.0 * std::numbers::pi;
  struct Probe {
    SpherePoint p;
    long order;  // end order, 0 for an interior point
  };
  std::vector<Probe> probes;
  for (const auto& p : s.punctures) probes.push_back({p, end_order(F, p)});
  auto known = [&](const SpherePoint& p) {
    return std::any_of(probes.begin(), probes.end(), [&](const Probe& q) { return near(q.p, p, 1e-9); });
  };
  for (const auto& c : pole_candidates(w))
    if (!known(SpherePoint::finite(c))) probes.push_back({SpherePoint::finite(c), 0});
  if (!known(SpherePoint::infinity())) probes.push_back({SpherePoint::infinity(), 0});

  double dmin = INFINITY, rmax = 0.0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (probes[i].p.is_infinite()) continue;
    rmax = std::max(rmax, std::abs(probes[i].p.z));
    for (std::size_t j = i + 1; j < probes.size(); ++j)
      if (!probes[j].p.is_infinite()) dmin = std::min(dmin, std::abs(probes[i].p.z - probes[j].p.z));
  }
  L0 = std::max({L0, std::isfinite(dmin) ? -std::log(0.3 * dmin) : 0.0, std::log(3.0 * (1.0 + rmax))});
  std::vector<double> out;
  double acc = 0.0, L_prev = L0;
  for (int j = 1; j <= levels; ++j) {
    const double L_next = L0 * std::pow(2.0, j);
    for (const auto& pr : probes) {
      auto ring = [&](double L) {
        const int n = 64;
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
          const Complex t = std::exp(Complex(-L, two_pi * (k + 0.5) / n));
          const Complex wt = pr.p.is_infinite() ? w.eval(1.0 / t) * (-1.0 / (t * t)) : w.eval(pr.p.z + t);
          sum += std::norm(wt);
        }
        const double r = std::exp(-L);
        const double u = pr.order > 0 ? end_weight(pr.order, r) : 1.0;
        return u * u * sum * (two_pi / n) * r * r;
      };
      acc += GK::integrate(ring, L_prev, L_next, 6, 1e-8);
    }
    out.push_back(acc);
    L_prev = L_next;
  }
  return out;
}

/// Quadrature verdict: finite iff the increments of l2star_end_integrals shrink.
inline bool l2star_by_quadrature(const Expr& w, const SurfaceSpec& s, const SurfaceFields& F) {
  const std::vector<double> v = l2star_end_integrals(w, s, F);
  for (double x : v)
    if (!std::isfinite(x)) return false;
  const double d1 = v[1] - v[0], d2 = v[2] - v[1], d3 = v[3] - v[2];
  const double scale = std::max(std::abs(v[3]), 1e-300);
  if (std::abs(d3) <= 1e-12 * scale) return true;
  return d3 < 0.75 * d2 && d2 < 0.75 * d1;
}

}  // namespace framed
