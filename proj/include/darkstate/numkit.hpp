#pragma once

// Dense complex linear algebra used by every physics module: general
// eigendecomposition with defect detection, matrix-exponential time
// evolution, and exponential-decay fitting.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "darkstate/types.hpp"

namespace darkstate::numkit {

struct Spectrum {
  CVector eigenvalues;           // sorted ascending by (Re, Im)
  CMatrix right;                 // columns: unit-norm right eigenvectors
  CMatrix left;                  // columns: left eigenvectors, paired by index
  RVector residuals;             // ||M v_i - lambda_i v_i||_2
  std::vector<bool> defect_flags;

  Eigen::Index size() const { return eigenvalues.size(); }
};

struct DefectReport {
  Cplx eigenvalue;
  int algebraic = 0;
  int geometric = 0;
};

namespace detail {

inline void check_square_finite(const CMatrix& m, const char* who) {
  require(m.rows() > 0 && m.rows() == m.cols(),
          std::string(who) + ": matrix must be square and non-empty");
  require(all_finite(m), std::string(who) + ": matrix has non-finite entries");
}

inline std::vector<Eigen::Index> sort_order(const CVector& vals) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(vals.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (vals[a].real() != vals[b].real()) return vals[a].real() < vals[b].real();
    return vals[a].imag() < vals[b].imag();
  });
  return idx;
}

// Connected components of the "closer than radius" graph on eigenvalues.
inline std::vector<std::vector<Eigen::Index>> cluster_eigenvalues(
    const CVector& vals, double radius) {
  const Eigen::Index n = vals.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(vals[i] - vals[j]) <= radius) {
        const auto ri = find(i), rj = find(j);
        if (ri != rj) parent[static_cast<std::size_t>(ri)] = rj;
      }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> root_slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = find(i);
    auto& slot = root_slot[static_cast<std::size_t>(r)];
    if (slot < 0) {
      slot = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot)].push_back(i);
  }
  return groups;
}

struct RankResult {
  Eigen::Index rank = 0;
  CMatrix right_null;  // columns span ker(A)
  CMatrix left_null;   // columns span ker(A^dagger)
};

inline RankResult numerical_rank(const CMatrix& a, double threshold) {
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > threshold) ++rank;
  RankResult out;
  out.rank = rank;
  const Eigen::Index nullity = a.cols() - rank;
  out.right_null = svd.matrixV().rightCols(nullity);
  out.left_null = svd.matrixU().rightCols(nullity);
  return out;
}

}  // namespace detail

inline CVector eigenvalues_only(const CMatrix& m) {
  detail::check_square_finite(m, "eigenvalues_only");
  Eigen::ComplexEigenSolver<CMatrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigenvalues_only: QR iteration did not converge");
  CVector vals = es.eigenvalues();
  const auto order = detail::sort_order(vals);
  CVector sorted(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) sorted[i] = vals[order[static_cast<std::size_t>(i)]];
  return sorted;
}

// Full eigendecomposition of a general complex matrix via Hessenberg
// reduction + shifted QR (Eigen's ComplexEigenSolver). Eigenvalues are
// reported ascending by (Re, Im). Repeated eigenvalues are clustered;
// defective clusters are flagged, their members collapsed to the cluster
// mean (more accurate than the individual QR values there), and their
// eigenvector slots filled from the numerical null space so the residual
// contract holds even without a full eigenbasis.
inline Spectrum eig_general(const CMatrix& m, double tol = 1e-10) {
  detail::check_square_finite(m, "eig_general");
  require(tol > 0, "eig_general: tol must be positive");
  const Eigen::Index n = m.rows();
  const double scale = 1.0 + m.norm();

  Eigen::ComplexEigenSolver<CMatrix> es(m, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw NumericalError("eig_general: QR iteration did not converge");
  Eigen::ComplexEigenSolver<CMatrix> les(m.adjoint(), /*computeEigenvectors=*/true);
  if (les.info() != Eigen::Success)
    throw NumericalError("eig_general: QR iteration did not converge (adjoint)");

  Spectrum out;
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  out.left.resize(n, n);
  out.residuals.resize(n);
  out.defect_flags.assign(static_cast<std::size_t>(n), false);

  const auto order = detail::sort_order(es.eigenvalues());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = order[static_cast<std::size_t>(i)];
    out.eigenvalues[i] = es.eigenvalues()[src];
    out.right.col(i) = es.eigenvectors().col(src).normalized();
  }

  // Pair left eigenvectors by nearest conjugate eigenvalue.
  CVector lvals = les.eigenvalues().conjugate();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(lvals[j] - out.eigenvalues[i]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    out.left.col(i) = les.eigenvectors().col(best).normalized();
  }

  // Cluster radius: wide enough to catch QR splitting of small Jordan
  // blocks (~eps^(1/2), ~eps^(1/3) times scale), narrow enough to leave
  // genuinely separate eigenvalues alone.
  const double cluster_radius = std::max(tol, 1.5e-5) * scale;
  const double rank_threshold = 4.0 * cluster_radius;
  const auto groups = detail::cluster_eigenvalues(out.eigenvalues, cluster_radius);
  for (const auto& g : groups) {
    if (g.size() < 2) continue;
    Cplx mean = 0.0;
    for (auto i : g) mean += out.eigenvalues[i];
    mean /= static_cast<double>(g.size());
    CMatrix shifted = m - mean * CMatrix::Identity(n, n);
    const auto rr = detail::numerical_rank(shifted, rank_threshold);
    const Eigen::Index geo = n - rr.rank;
    if (geo >= static_cast<Eigen::Index>(g.size())) {
      // Semisimple cluster: biorthogonalize left block against right block.
      CMatrix v(n, g.size()), w(n, g.size());
      for (std::size_t k = 0; k < g.size(); ++k) {
        v.col(static_cast<Eigen::Index>(k)) = out.right.col(g[k]);
        w.col(static_cast<Eigen::Index>(k)) = out.left.col(g[k]);
      }
      CMatrix gram = w.adjoint() * v;
      Eigen::FullPivLU<CMatrix> lu(gram);
      if (lu.isInvertible()) {
        CMatrix refined = w * lu.inverse().adjoint();
        for (std::size_t k = 0; k < g.size(); ++k)
          out.left.col(g[k]) = refined.col(static_cast<Eigen::Index>(k)).normalized();
      }
      continue;
    }
    // Defective: fewer independent eigenvectors than eigenvalues.
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto i = g[k];
      out.defect_flags[static_cast<std::size_t>(i)] = true;
      out.eigenvalues[i] = mean;
      if (geo > 0) {
        out.right.col(i) = rr.right_null.col(static_cast<Eigen::Index>(k) % geo);
        out.left.col(i) = rr.left_null.col(static_cast<Eigen::Index>(k) % geo);
      }
    }
  }

  for (Eigen::Index i = 0; i < n; ++i)
    out.residuals[i] = (m * out.right.col(i) - out.eigenvalues[i] * out.right.col(i)).norm();
  return out;
}

// Algebraic and geometric multiplicity of an eigenvalue supplied by the
// caller. tol scales with (1 + ||M||_F) and serves both as the matching
// radius and the rank cutoff.
inline DefectReport defect_report(const CMatrix& m, Cplx lambda, double tol = 1e-8) {
  detail::check_square_finite(m, "defect_report");
  require(tol > 0, "defect_report: tol must be positive");
  const double scale = 1.0 + m.norm();
  const double radius = tol * scale;
  const CVector vals = eigenvalues_only(m);
  int algebraic = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (std::abs(vals[i] - lambda) <= radius) ++algebraic;
  if (algebraic == 0)
    throw DomainError("defect_report: lambda is not an eigenvalue within tol");
  const CMatrix shifted = m - lambda * CMatrix::Identity(m.rows(), m.cols());
  const auto rr = detail::numerical_rank(shifted, radius);
  int geometric = static_cast<int>(m.rows() - rr.rank);
  geometric = std::clamp(geometric, 1, algebraic);
  return {lambda, algebraic, geometric};
}

// psi(t) = exp(-i H t) psi0 by scaling-and-squaring; well-defined for
// defective H as well.
inline CVector evolve(const CMatrix& h, const CVector& psi0, double t) {
  detail::check_square_finite(h, "evolve");
  require(psi0.size() == h.rows(), "evolve: state dimension mismatch");
  require(psi0.allFinite(), "evolve: state has non-finite entries");
  require(std::isfinite(t), "evolve: time must be finite");
  const CMatrix generator = Cplx(0.0, -t) * h;
  const CMatrix u = generator.exp();
  CVector psi = u * psi0;
  if (!psi.allFinite())
    throw NumericalError("evolve: propagator overflowed (gain too large for requested time)");
  return psi;
}

// Least-squares fit of ln|m| = a - kappa * n; returns kappa.
inline double fit_decay(const std::vector<std::pair<double, double>>& samples) {
  require(samples.size() >= 3, "fit_decay: need at least 3 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, mag] : samples) {
    require(std::isfinite(n), "fit_decay: non-finite sample index");
    require(std::isfinite(mag) && mag > 0, "fit_decay: magnitudes must be positive");
    const double y = std::log(mag);
    sx += n;
    sy += y;
    sxx += n * n;
    sxy += n * y;
  }
  const double count = static_cast<double>(samples.size());
  const double denom = count * sxx - sx * sx;
  require(denom > 0, "fit_decay: sample indices must not be all equal");
  const double slope = (count * sxy - sx * sy) / denom;
  return -slope;
}

}  // namespace darkstate::numkit
