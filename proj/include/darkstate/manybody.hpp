#pragma once

// Small bosonic exact diagonalization on the ladder: number-conserving
// Fock space with an optional per-mode occupation cap, the lifted
// one-body ladder Hamiltonian plus a rung-local density-density
// interaction U * n(r,up) * n(r,down), and the flat-band density-wave
// states built by filling every other lowest-band up orbital.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "darkstate/ladder.hpp"
#include "darkstate/numkit.hpp"
#include "darkstate/types.hpp"

namespace darkstate::manybody {

struct FockBasis {
  int n_modes = 0;
  int n_particles = 0;
  int cap = 0;
  std::vector<std::vector<int>> states;  // ascending lexicographic occupations

  static FockBasis build(int n_modes, int n_particles, int cap,
                         std::size_t max_states = 200000) {
    require(n_modes >= 1, "FockBasis: need at least one mode");
    require(n_particles >= 0, "FockBasis: negative particle number");
    require(cap >= 1 || n_particles == 0, "FockBasis: cap must be >= 1");
    FockBasis basis;
    basis.n_modes = n_modes;
    basis.n_particles = n_particles;
    basis.cap = cap;
    std::vector<int> occ(static_cast<std::size_t>(n_modes), 0);
    basis.fill_rec(occ, 0, n_particles, max_states);
    for (std::size_t i = 0; i < basis.states.size(); ++i)
      basis.index_of.emplace(basis.states[i], i);
    return basis;
  }

  std::size_t size() const { return states.size(); }

  std::size_t index(const std::vector<int>& occ) const {
    const auto it = index_of.find(occ);
    require(it != index_of.end(), "FockBasis: occupation vector not in basis");
    return it->second;
  }

 private:
  std::map<std::vector<int>, std::size_t> index_of;

  void fill_rec(std::vector<int>& occ, int mode, int remaining, std::size_t max_states) {
    if (mode == n_modes) {
      if (remaining == 0) {
        if (states.size() >= max_states)
          throw ResourceError("FockBasis: state count exceeds the configured limit");
        states.push_back(occ);
      }
      return;
    }
    const int hi = std::min(cap, remaining);
    for (int k = 0; k <= hi; ++k) {
      occ[static_cast<std::size_t>(mode)] = k;
      fill_rec(occ, mode + 1, remaining - k, max_states);
    }
    occ[static_cast<std::size_t>(mode)] = 0;
  }
};

// Dense many-body matrix of sum_{rc} M(r,c) b^dag_r b_c plus the rung
// interaction. Hops that would push a mode past the cap are projected out
// (the capped basis is a hard truncation).
inline CMatrix build_manybody(const CMatrix& one_body, const FockBasis& basis, double U) {
  require(one_body.rows() == one_body.cols(), "build_manybody: one-body matrix not square");
  require(one_body.rows() == basis.n_modes, "build_manybody: mode count mismatch");
  require(basis.n_modes % 2 == 0, "build_manybody: interaction needs up/down mode pairs");
  require(std::isfinite(U), "build_manybody: U must be finite");
  require(all_finite(one_body), "build_manybody: non-finite one-body entry");
  if (basis.size() > 5000)
    throw ResourceError("build_manybody: dense dimension limit is 5000 states");

  const Eigen::Index dim = static_cast<Eigen::Index>(basis.size());
  CMatrix h = CMatrix::Zero(dim, dim);
  std::vector<int> occ;
  for (Eigen::Index s = 0; s < dim; ++s) {
    const auto& state = basis.states[static_cast<std::size_t>(s)];
    for (int c = 0; c < basis.n_modes; ++c) {
      const int nc = state[static_cast<std::size_t>(c)];
      if (nc == 0) continue;
      for (int r = 0; r < basis.n_modes; ++r) {
        const Cplx m = one_body(r, c);
        if (m == Cplx(0.0)) continue;
        if (r == c) {
          h(s, s) += m * static_cast<double>(nc);
          continue;
        }
        const int nr = state[static_cast<std::size_t>(r)];
        if (nr + 1 > basis.cap) continue;
        occ = state;
        --occ[static_cast<std::size_t>(c)];
        ++occ[static_cast<std::size_t>(r)];
        const auto target = static_cast<Eigen::Index>(basis.index(occ));
        h(target, s) += m * std::sqrt(static_cast<double>(nc) * (nr + 1));
      }
    }
    double diag = 0.0;
    for (int rung = 0; 2 * rung + 1 < basis.n_modes; ++rung)
      diag += static_cast<double>(state[static_cast<std::size_t>(2 * rung)]) *
              static_cast<double>(state[static_cast<std::size_t>(2 * rung + 1)]);
    h(s, s) += U * diag;
  }
  return h;
}

// Matrix of the creation operator sum_m phi(m) b^dag_m from the N-particle
// basis into the (N+1)-particle basis. Components that would exceed the
// occupation cap cannot be represented and raise a domain error.
inline CMatrix lift_orbital(const CVector& phi, const FockBasis& from, const FockBasis& to) {
  require(phi.size() == from.n_modes, "lift_orbital: amplitude vector has wrong length");
  require(from.n_modes == to.n_modes && from.cap == to.cap,
          "lift_orbital: basis mode sets differ");
  require(to.n_particles == from.n_particles + 1,
          "lift_orbital: target basis must hold one more particle");
  CMatrix d = CMatrix::Zero(static_cast<Eigen::Index>(to.size()),
                            static_cast<Eigen::Index>(from.size()));
  std::vector<int> occ;
  for (std::size_t s = 0; s < from.size(); ++s) {
    const auto& state = from.states[s];
    for (int m = 0; m < from.n_modes; ++m) {
      const Cplx a = phi[m];
      if (a == Cplx(0.0)) continue;
      const int nm = state[static_cast<std::size_t>(m)];
      if (nm + 1 > from.cap)
        throw DomainError("lift_orbital: occupation cap blocks a nonzero component");
      occ = state;
      ++occ[static_cast<std::size_t>(m)];
      d(static_cast<Eigen::Index>(to.index(occ)), static_cast<Eigen::Index>(s)) +=
          a * std::sqrt(static_cast<double>(nm + 1));
    }
  }
  return d;
}

// Lowest-band up orbitals of the periodic flat-band ladder at every
// fourth rung; offset 0 centers the pattern on rungs 0, 4, 8, ...,
// offset 1 on rungs 2, 6, 10, ....
inline std::vector<ladder::Orbital> cdw_orbitals(const ladder::LadderParams& p, int offset) {
  p.validate();
  require(p.at_flat_band(), "cdw_orbitals: defined at the flat-band point gamma = -omega_y");
  require(p.boundary == ladder::Boundary::periodic, "cdw_orbitals: periodic chains only");
  require(p.length % 4 == 0, "cdw_orbitals: length must be a multiple of 4");
  require(offset == 0 || offset == 1, "cdw_orbitals: offset must be 0 or 1");
  const auto all = ladder::bulk_orbitals(p);
  std::vector<ladder::Orbital> picked;
  for (int center = 2 * offset; center < p.length; center += 4) {
    bool found = false;
    for (const auto& orb : all)
      if (orb.kind == ladder::OrbitalKind::up_minus && orb.center == center) {
        picked.push_back(orb);
        found = true;
        break;
      }
    if (!found) throw NumericalError("cdw_orbitals: missing up orbital at a pattern center");
  }
  return picked;
}

// Normalized product state with one boson in each pattern orbital.
inline CVector cdw_state(const ladder::LadderParams& p, const FockBasis& basis, int offset) {
  require(basis.n_modes == 2 * p.length, "cdw_state: basis mode count mismatch");
  require(basis.n_particles == p.length / 4,
          "cdw_state: basis must hold one particle per pattern cell");
  const auto orbitals = cdw_orbitals(p, offset);
  CVector vec = CVector::Ones(1);
  FockBasis current = FockBasis::build(basis.n_modes, 0, basis.cap);
  for (std::size_t i = 0; i < orbitals.size(); ++i) {
    const FockBasis next =
        (static_cast<int>(i) + 1 == basis.n_particles)
            ? basis
            : FockBasis::build(basis.n_modes, static_cast<int>(i) + 1, basis.cap);
    vec = (lift_orbital(orbitals[i].to_vector(p.length), current, next) * vec).eval();
    current = next;
  }
  const double n = vec.norm();
  if (n <= 0.0) throw NumericalError("cdw_state: vanishing norm");
  return vec / n;
}

// Interaction matrix elements between pattern orbitals through their
// rung-density overlap: V(i,j) = U sum_r [rho_i_up(r) rho_j_down(r) +
// rho_i_down(r) rho_j_up(r)].
inline Eigen::MatrixXd projected_interaction(const std::vector<ladder::Orbital>& orbitals,
                                             int length, double U) {
  require(std::isfinite(U), "projected_interaction: U must be finite");
  const auto n = static_cast<Eigen::Index>(orbitals.size());
  Eigen::MatrixXd rho_up = Eigen::MatrixXd::Zero(n, length);
  Eigen::MatrixXd rho_down = Eigen::MatrixXd::Zero(n, length);
  for (Eigen::Index i = 0; i < n; ++i)
    for (const auto& [mode, amp] : orbitals[static_cast<std::size_t>(i)].amplitudes) {
      if (mode.leg == ladder::Leg::up)
        rho_up(i, mode.rung) += std::norm(amp);
      else
        rho_down(i, mode.rung) += std::norm(amp);
    }
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      v(i, j) = U * (rho_up.row(i).dot(rho_down.row(j)) + rho_down.row(i).dot(rho_up.row(j)));
  return v;
}

struct GroundManifold {
  Cplx e_min;
  std::vector<Eigen::Index> indices;  // eigenvalues within tol of e_min
  CMatrix vectors;                    // right eigenvectors, one column per index
  double gap = 0.0;                   // min Re distance to the rest of the spectrum
};

inline GroundManifold ground_manifold(const CMatrix& h, double tol) {
  require(std::isfinite(tol) && tol > 0, "ground_manifold: tol must be positive");
  const auto spec = numkit::eig_general(h);
  GroundManifold out;
  out.e_min = spec.eigenvalues[0];  // sorted by (Re, Im)
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    if (std::abs(spec.eigenvalues[i] - out.e_min) <= tol)
      out.indices.push_back(i);
    else
      gap = std::min(gap, spec.eigenvalues[i].real() - out.e_min.real());
  }
  out.vectors.resize(spec.right.rows(), static_cast<Eigen::Index>(out.indices.size()));
  for (std::size_t c = 0; c < out.indices.size(); ++c)
    out.vectors.col(static_cast<Eigen::Index>(c)) = spec.right.col(out.indices[c]);
  out.gap = std::isfinite(gap) ? gap : 0.0;
  return out;
}

struct CdwReport {
  double energy = 0.0;  // expected pattern energy, n_particles * (omega_x - t)
  double residual[2] = {0.0, 0.0};
  double fidelity[2] = {0.0, 0.0};  // norm of the projection onto the ground manifold
  Cplx e_min;
  int manifold_dim = 0;
  double gap = 0.0;
};

inline CdwReport verify_cdw(const ladder::LadderParams& p, double U,
                            double manifold_tol = 1e-8) {
  p.validate();
  require(p.length % 4 == 0, "verify_cdw: length must be a multiple of 4");
  const int n_particles = p.length / 4;
  const FockBasis basis = FockBasis::build(2 * p.length, n_particles, n_particles);
  const CMatrix h = build_manybody(ladder::build_ladder_b(p), basis, U);

  CdwReport report;
  report.energy = n_particles * (p.omega_x - p.t);
  CVector cdw[2] = {cdw_state(p, basis, 0), cdw_state(p, basis, 1)};
  for (int o = 0; o < 2; ++o)
    report.residual[o] = (h * cdw[o] - Cplx(report.energy) * cdw[o]).norm();

  const auto manifold = ground_manifold(h, manifold_tol);
  report.e_min = manifold.e_min;
  report.manifold_dim = static_cast<int>(manifold.indices.size());
  report.gap = manifold.gap;
  const Eigen::HouseholderQR<CMatrix> qr(manifold.vectors);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(manifold.vectors.rows(),
                                                          manifold.vectors.cols());
  for (int o = 0; o < 2; ++o) report.fidelity[o] = (q.adjoint() * cdw[o]).norm();
  return report;
}

}  // namespace darkstate::manybody
