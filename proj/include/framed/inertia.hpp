#pragma once

// Sylvester inertia of symmetric matrices from sparse LDL^T factorizations.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>
#include <vector>

#include <lapacke.h>

#include "framed/errors.hpp"

namespace framed {

struct Inertia {
  long negative = 0, zero = 0, positive = 0;
  double norm = 0.0;       // infinity norm of A
  double band = 0.0;       // eigenvalues with |lambda| < band count as zero
  double retry_shift = 0;  // extra perturbation used after a breakdown, 0 if none
  bool pivoted_fallback = false;  // counted by dense Bunch-Kaufman after a sparse breakdown
};

/// Infinity norm (max absolute row sum) of a symmetric sparse matrix.
inline double inf_norm(const Eigen::SparseMatrix<double>& A) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(A.rows());
  for (Eigen::Index k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return A.rows() ? rows.maxCoeff() : 0.0;
}

namespace detail {

using SparseLDLT = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>>;

/// Number of negative pivots of A - shift I, or -1 when the factorization is unreliable.
inline long negative_pivots(const Eigen::SparseMatrix<double>& A, double shift, double norm) {
  const auto n = A.rows();
  Eigen::SparseMatrix<double> I(n, n);
  I.setIdentity();
  const Eigen::SparseMatrix<double> M = A - shift * I;
  SparseLDLT ldlt(M);
  if (ldlt.info() != Eigen::Success) return -1;
  const Eigen::VectorXd D = ldlt.vectorD();
  long neg = 0;
  for (Eigen::Index i = 0; i < D.size(); ++i) {
    if (!std::isfinite(D[i]) || D[i] == 0.0) return -1;
    if (D[i] < 0) ++neg;
  }
  // backward-error check: a tiny residual certifies the pivots belong to a nearby matrix
  std::mt19937 rng(12345);
  std::normal_distribution<double> N;
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) b[i] = N(rng);
  const Eigen::VectorXd x = ldlt.solve(b);
  if (!x.allFinite()) return -1;
  const double res = (M * x - b).norm() / ((norm + std::abs(shift)) * x.norm() + b.norm());
  if (!(res < 1e-10)) return -1;
  return neg;
}

inline long negative_pivots_retry(const Eigen::SparseMatrix<double>& A, double shift, double norm, double& used) {
  long k = negative_pivots(A, shift, norm);
  used = 0.0;
  for (double rel : {1e-8, 1e-6, 1e-4}) {
    if (k >= 0) break;
    used = rel * norm;
    k = negative_pivots(A, shift + used, norm);
  }
  if (k < 0) throw FactorizationBreakdown("LDL^T breakdown persists after perturbation");
  return k;
}

}  // namespace detail

/// Inertia from the Bunch-Kaufman factorization P A P^T = L D L^T (LAPACK dsytrf); D has
/// 1x1 and 2x2 blocks whose eigenvalue signs are counted.
inline Inertia bunch_kaufman_inertia(const Eigen::MatrixXd& A, double eps_zero = 1e-9) {
  Inertia r;
  const lapack_int n = static_cast<lapack_int>(A.rows());
  r.norm = n ? A.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  r.band = eps_zero * r.norm;
  auto below = [&](double shift) {
    Eigen::MatrixXd M = A - shift * Eigen::MatrixXd::Identity(n, n);
    std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
    const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, M.data(), n, ipiv.data());
    if (info < 0) throw FactorizationBreakdown("dsytrf rejected its arguments");
    long neg = 0;
    for (lapack_int i = 0; i < n; ++i) {
      if (ipiv[i] > 0) {
        if (M(i, i) < 0) ++neg;
        else if (M(i, i) == 0.0) throw FactorizationBreakdown("exact zero pivot at the band edge");
      } else {
        // 2x2 block [a b; b c]
        const double a = M(i, i), b = M(i + 1, i), c = M(i + 1, i + 1);
        const double det = a * c - b * b;
        if (det < 0) ++neg;
        else if (a + c < 0) neg += 2;
        ++i;
      }
    }
    return neg;
  };
  if (n == 0) return r;
  const long lo = below(-r.band), hi = below(r.band);
  r.negative = lo;
  r.zero = hi - lo;
  r.positive = n - hi;
  return r;
}

/// Inertia of symmetric A by two shifted factorizations A -+ band I, band = eps_zero ||A||.
inline Inertia negative_inertia(const Eigen::SparseMatrix<double>& A, double eps_zero = 1e-9,
                                long dense_limit = 3000) {
  if (A.rows() != A.cols()) throw ValidationError("inertia needs a square matrix");
  Inertia r;
  const long n = static_cast<long>(A.rows());
  if (n == 0) return r;
  r.norm = inf_norm(A);
  r.band = eps_zero * std::max(r.norm, 1e-300);
  double u1 = 0.0, u2 = 0.0;
  if (n <= dense_limit) {
    // moderate sizes: certify the sparse pivots, fall back to pivoted dense on any doubt
    const long a = detail::negative_pivots(A, -r.band, r.norm), b = detail::negative_pivots(A, r.band, r.norm);
    if (a < 0 || b < 0) {
      Inertia d = bunch_kaufman_inertia(Eigen::MatrixXd(A), eps_zero);
      d.pivoted_fallback = true;
      return d;
    }
    r.negative = a;
    r.zero = b - a;
    r.positive = n - b;
    return r;
  }
  const long below_minus = detail::negative_pivots_retry(A, -r.band, r.norm, u1);  // lambda < -band
  const long below_plus = detail::negative_pivots_retry(A, r.band, r.norm, u2);    // lambda < +band
  r.negative = below_minus;
  r.zero = below_plus - below_minus;
  r.positive = n - below_plus;
  r.retry_shift = std::max(std::abs(u1), std::abs(u2));
  if (r.zero < 0) throw FactorizationBreakdown("inconsistent inertia counts across the zero band");
  return r;
}

inline Inertia negative_inertia(const Eigen::MatrixXd& A, double eps_zero = 1e-9, long dense_limit = 3000) {
  return negative_inertia(Eigen::SparseMatrix<double>(A.sparseView()), eps_zero, dense_limit);
}

/// Reference inertia from a dense symmetric eigensolver.
inline Inertia dense_inertia(const Eigen::MatrixXd& A, double eps_zero = 1e-9) {
  Inertia r;
  r.norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  r.band = eps_zero * r.norm;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double l = es.eigenvalues()[i];
    if (l < -r.band) ++r.negative;
    else if (l < r.band) ++r.zero;
    else ++r.positive;
  }
  return r;
}

}  // namespace framed
