#pragma once

// Non-Hermitian two-leg ladder with alternating intra-leg bonds and
// imaginary inter-leg transfer. At the flat-band point (gamma = -omega_y)
// the inter-leg transfer becomes unidirectional, the spectrum collapses to
// four flat values, and the eigenbasis localizes into dimer orbitals plus
// edge states of one or a few sites.
//
// Two single-particle bases are used:
//   a basis: legs carry gain/loss (-i gamma sigma_z) and the onsite drive
//            omega_x sigma_x + omega_y sigma_y; every bond hops t/2 with a
//            staggered spin-flip part.
//   b basis: per-rung Hadamard rotation of the a basis. Legs decouple into
//            alternating strong bonds; up-leg bonds sit on (2m, 2m+1),
//            down-leg bonds on (2m+1, 2m+2), all of strength t.
// Mode index: 2*rung + (0 for up leg, 1 for down leg), rungs 0-based.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "darkstate/numkit.hpp"
#include "darkstate/types.hpp"

namespace darkstate::ladder {

enum class Boundary { open, periodic };
enum class Leg { up, down };

struct Mode {
  int rung = 0;
  Leg leg = Leg::up;
};

struct LadderParams {
  double t = 1.0;        // strong-bond hopping, > 0
  double gamma = 0.0;    // gain/loss strength
  double omega_x = 0.0;  // onsite +omega_x on up leg, -omega_x on down leg
  double omega_y = 0.0;
  int length = 4;        // number of rungs
  Boundary boundary = Boundary::open;

  void validate() const {
    require(std::isfinite(t) && t > 0.0, "LadderParams: t must be finite and > 0");
    require(std::isfinite(gamma) && std::isfinite(omega_x) && std::isfinite(omega_y),
            "LadderParams: non-finite parameter");
    require(length >= 4, "LadderParams: length must be >= 4");
    if (boundary == Boundary::periodic)
      require(length % 2 == 0, "LadderParams: periodic boundary needs even length");
  }

  // Inter-leg transfer amplitudes in the b basis.
  Cplx t_up() const { return -kI * (gamma + omega_y); }    // row (n,up), col (n,down)
  Cplx t_down() const { return -kI * (gamma - omega_y); }  // row (n,down), col (n,up)

  double param_scale() const {
    return t + std::abs(gamma) + std::abs(omega_x) + std::abs(omega_y);
  }
  // Flat-band point: t_up vanishes, hopping between the legs becomes
  // one-way (up feeds down).
  bool at_flat_band() const {
    return std::abs(gamma + omega_y) <= 1e-12 * param_scale();
  }
};

inline Eigen::Index mode_index(int rung, Leg leg, int length) {
  require(rung >= 0 && rung < length, "mode_index: rung out of range");
  return 2 * static_cast<Eigen::Index>(rung) + (leg == Leg::down ? 1 : 0);
}

namespace detail {

inline int wrap(int rung, int length) { return ((rung % length) + length) % length; }

// Down-leg bonds: (2m+1, 2m+2); the periodic closure adds (length-1, 0).
inline std::vector<std::pair<int, int>> down_bonds(const LadderParams& p) {
  std::vector<std::pair<int, int>> bonds;
  for (int a = 1; a + 1 < p.length; a += 2) bonds.emplace_back(a, a + 1);
  if (p.boundary == Boundary::periodic && (p.length - 1) % 2 == 1)
    bonds.emplace_back(p.length - 1, 0);
  return bonds;
}

// Up-leg bonds: (2m, 2m+1); always complete for even length.
inline std::vector<std::pair<int, int>> up_bonds(const LadderParams& p) {
  std::vector<std::pair<int, int>> bonds;
  for (int a = 0; a + 1 < p.length; a += 2) bonds.emplace_back(a, a + 1);
  return bonds;
}

// Deterministic overall phase: largest-magnitude component real positive.
inline void fix_phase(CVector& v) {
  Eigen::Index anchor = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      anchor = i;
    }
  if (best > 0) v *= std::conj(v[anchor]) / std::abs(v[anchor]);
}

}  // namespace detail

inline CMatrix build_ladder_b(const LadderParams& p) {
  p.validate();
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(p.length);
  CMatrix h = CMatrix::Zero(n, n);
  for (int r = 0; r < p.length; ++r) {
    const auto iu = mode_index(r, Leg::up, p.length);
    const auto id = mode_index(r, Leg::down, p.length);
    h(iu, iu) = p.omega_x;
    h(id, id) = -p.omega_x;
    h(iu, id) = p.t_up();
    h(id, iu) = p.t_down();
  }
  for (const auto& [a, b] : detail::up_bonds(p)) {
    const auto ia = mode_index(a, Leg::up, p.length);
    const auto ib = mode_index(b, Leg::up, p.length);
    h(ia, ib) = p.t;
    h(ib, ia) = p.t;
  }
  for (const auto& [a, b] : detail::down_bonds(p)) {
    const auto ia = mode_index(a, Leg::down, p.length);
    const auto ib = mode_index(b, Leg::down, p.length);
    h(ia, ib) = p.t;
    h(ib, ia) = p.t;
  }
  return h;
}

// Spin-resolved form: gain/loss on the legs, onsite drive, and a uniform
// t/2 hop plus a staggered spin-flip hop of the same strength.
inline CMatrix build_ladder_a(const LadderParams& p) {
  p.validate();
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(p.length);
  CMatrix h = CMatrix::Zero(n, n);
  for (int r = 0; r < p.length; ++r) {
    const auto iu = mode_index(r, Leg::up, p.length);
    const auto id = mode_index(r, Leg::down, p.length);
    h(iu, iu) = -kI * p.gamma;
    h(id, id) = kI * p.gamma;
    h(iu, id) = p.omega_x - kI * p.omega_y;
    h(id, iu) = p.omega_x + kI * p.omega_y;
  }
  const int last = (p.boundary == Boundary::periodic) ? p.length : p.length - 1;
  for (int r = 0; r < last; ++r) {
    const int s = detail::wrap(r + 1, p.length);
    const double flip = (r % 2 == 0) ? 0.5 * p.t : -0.5 * p.t;
    const auto ru = mode_index(r, Leg::up, p.length);
    const auto rd = mode_index(r, Leg::down, p.length);
    const auto su = mode_index(s, Leg::up, p.length);
    const auto sd = mode_index(s, Leg::down, p.length);
    h(ru, su) += 0.5 * p.t;
    h(su, ru) += 0.5 * p.t;
    h(rd, sd) += 0.5 * p.t;
    h(sd, rd) += 0.5 * p.t;
    h(ru, sd) += flip;
    h(sd, ru) += flip;
    h(rd, su) += flip;
    h(su, rd) += flip;
  }
  return h;
}

// Per-rung Hadamard conjugation. Involutive; maps sigma_z to sigma_x and
// sigma_y to -sigma_y, so it carries the a basis onto the b basis with the
// sign of omega_y reversed.
inline CMatrix hadamard_transform(const CMatrix& m) {
  require(m.rows() == m.cols() && m.rows() % 2 == 0,
          "hadamard_transform: need a square matrix over rung pairs");
  const Eigen::Index n = m.rows();
  CMatrix u = CMatrix::Zero(n, n);
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index b = 0; b < n; b += 2) {
    u(b, b) = r;
    u(b, b + 1) = r;
    u(b + 1, b) = r;
    u(b + 1, b + 1) = -r;
  }
  return u * m * u;
}

// Closed six-mode block around an up-leg dimer at the flat-band point,
// ordered (down left pair | up dimer | down right pair):
//   [ -wx   t    0    0    0    0 ]
//   [  t   -wx -2ig   0    0    0 ]
//   [  0    0   wx    t    0    0 ]
//   [  0    0    t   wx    0    0 ]
//   [  0    0    0  -2ig  -wx   t ]
//   [  0    0    0    0    t   -wx ]
inline CMatrix local_block(const LadderParams& p) {
  p.validate();
  require(p.at_flat_band(), "local_block: defined at the flat-band point gamma = -omega_y");
  CMatrix h = CMatrix::Zero(6, 6);
  const double wx = p.omega_x;
  const Cplx feed = -2.0 * kI * p.gamma;
  h(0, 0) = -wx; h(0, 1) = p.t;
  h(1, 0) = p.t; h(1, 1) = -wx; h(1, 2) = feed;
  h(2, 2) = wx;  h(2, 3) = p.t;
  h(3, 2) = p.t; h(3, 3) = wx;
  h(4, 3) = feed; h(4, 4) = -wx; h(4, 5) = p.t;
  h(5, 4) = p.t; h(5, 5) = -wx;
  return h;
}

enum class OrbitalKind { down_minus, down_plus, up_minus, up_plus, edge_single, edge_up };

struct Orbital {
  OrbitalKind kind = OrbitalKind::down_minus;
  int center = 0;  // left rung of the defining bond / dimer, or the edge rung
  std::vector<std::pair<Mode, Cplx>> amplitudes;
  Cplx energy;

  CVector to_vector(int length) const {
    CVector v = CVector::Zero(2 * static_cast<Eigen::Index>(length));
    for (const auto& [mode, amp] : amplitudes) v[mode_index(mode.rung, mode.leg, length)] = amp;
    return v;
  }
};

namespace detail {

// Parameters where flat-band orbital energies collide and the closed
// blocks stop having a unique eigenvector per energy.
inline bool degenerate_orbital_params(const LadderParams& p) {
  const double tol = 1e-12 * p.param_scale();
  if (std::abs(p.omega_x) <= tol) return true;
  if (std::abs(std::abs(p.omega_x) - p.t) <= tol) return true;
  if (p.boundary == Boundary::open &&
      std::abs(std::abs(p.omega_x) - 0.5 * p.t) <= tol)
    return true;
  return false;
}

inline Orbital make_orbital(OrbitalKind kind, int center,
                            const std::vector<Mode>& modes, const CVector& amps,
                            Cplx energy) {
  Orbital orb;
  orb.kind = kind;
  orb.center = center;
  orb.energy = energy;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Cplx a = amps[static_cast<Eigen::Index>(i)];
    if (std::abs(a) > 0.0) orb.amplitudes.emplace_back(modes[i], a);
  }
  return orb;
}

// Eigenvector of the closed block around the up dimer (a, a+1) at the
// requested energy. Returns nullopt when the energy has no independent
// up-weighted eigenvector (defective parameter points).
inline std::optional<Orbital> up_orbital(const LadderParams& p, const CMatrix& full,
                                         int a, Cplx target, OrbitalKind kind) {
  const int b = a + 1;
  std::vector<Mode> modes;
  const bool periodic = (p.boundary == Boundary::periodic);
  if (periodic || a - 1 >= 0) modes.push_back({wrap(a - 1, p.length), Leg::down});
  modes.push_back({a, Leg::down});
  modes.push_back({a, Leg::up});
  modes.push_back({wrap(b, p.length), Leg::up});
  modes.push_back({wrap(b, p.length), Leg::down});
  if (periodic || b + 1 < p.length) modes.push_back({wrap(b + 1, p.length), Leg::down});

  const Eigen::Index nb = static_cast<Eigen::Index>(modes.size());
  CMatrix block(nb, nb);
  for (Eigen::Index i = 0; i < nb; ++i)
    for (Eigen::Index j = 0; j < nb; ++j)
      block(i, j) = full(mode_index(modes[static_cast<std::size_t>(i)].rung,
                                    modes[static_cast<std::size_t>(i)].leg, p.length),
                         mode_index(modes[static_cast<std::size_t>(j)].rung,
                                    modes[static_cast<std::size_t>(j)].leg, p.length));

  Eigen::ComplexEigenSolver<CMatrix> es(block, true);
  if (es.info() != Eigen::Success)
    throw NumericalError("up_orbital: block eigensolve failed");
  const double scale = 1.0 + block.norm();
  std::vector<Eigen::Index> hits;
  for (Eigen::Index i = 0; i < nb; ++i)
    if (std::abs(es.eigenvalues()[i] - target) <= 1e-9 * scale) hits.push_back(i);
  if (hits.empty()) return std::nullopt;

  CVector vec;
  if (hits.size() == 1) {
    vec = es.eigenvectors().col(hits[0]);
  } else {
    // Degenerate with pure down-leg eigenvectors. Those are known exactly:
    // every chain down-bond with both ends in the block gives a +/- dimer,
    // every unpaired down mode gives a single-site state. Remove their
    // directions and keep the up-weighted remainder, if any survives.
    std::vector<CVector> knowns;
    auto down_slot = [&](int rung) -> Eigen::Index {
      for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes[i].leg == Leg::down && modes[i].rung == rung)
          return static_cast<Eigen::Index>(i);
      return -1;
    };
    std::vector<bool> paired(modes.size(), false);
    for (const auto& [x, y] : down_bonds(p)) {
      const Eigen::Index ix = down_slot(x), iy = down_slot(y);
      if (ix < 0 || iy < 0) continue;
      paired[static_cast<std::size_t>(ix)] = paired[static_cast<std::size_t>(iy)] = true;
      for (int sign : {-1, +1}) {
        if (std::abs(Cplx(-p.omega_x + sign * p.t) - target) > 1e-9 * scale) continue;
        CVector k = CVector::Zero(nb);
        k[ix] = 1.0 / std::sqrt(2.0);
        k[iy] = Cplx(sign / std::sqrt(2.0));
        knowns.push_back(std::move(k));
      }
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (modes[i].leg != Leg::down || paired[i]) continue;
      if (std::abs(Cplx(-p.omega_x) - target) > 1e-9 * scale) continue;
      CVector k = CVector::Zero(nb);
      k[static_cast<Eigen::Index>(i)] = 1.0;
      knowns.push_back(std::move(k));
    }
    CVector best;
    double best_norm = -1.0;
    for (auto hi : hits) {
      CVector cand = es.eigenvectors().col(hi);
      for (const auto& k : knowns) cand -= k.dot(cand) * k;
      if (cand.norm() > best_norm) {
        best_norm = cand.norm();
        best = cand;
      }
    }
    if (best_norm < 1e-6) return std::nullopt;
    vec = best;
  }
  vec.normalize();
  fix_phase(vec);
  return make_orbital(kind, a, modes, vec, target);
}

}  // namespace detail

// Localized eigenbasis of the flat-band ladder away from unpaired edge
// sites: one +/- pair per down-leg bond, one +/- pair per up-leg dimer
// (the up orbitals drag a down-leg tail of up to four modes with them).
// Requires nondegenerate orbital energies unless defect_tolerant is set,
// in which case orbitals without an independent eigenvector are omitted
// and the returned set need not span.
inline std::vector<Orbital> bulk_orbitals(const LadderParams& p, bool defect_tolerant = false) {
  p.validate();
  require(p.at_flat_band(), "bulk_orbitals: defined at the flat-band point gamma = -omega_y");
  if (!defect_tolerant)
    require(!detail::degenerate_orbital_params(p),
            "bulk_orbitals: orbital energies are degenerate at these parameters "
            "(pass defect_tolerant to get the orbitals that still exist)");
  const CMatrix full = build_ladder_b(p);
  const double res_tol = 1e-10 * (1.0 + full.norm());
  std::vector<Orbital> out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (const auto& [a, b] : detail::down_bonds(p)) {
    for (int sign : {-1, +1}) {
      std::vector<Mode> modes{{a, Leg::down}, {b, Leg::down}};
      CVector amps(2);
      amps << inv_sqrt2, sign * inv_sqrt2;
      out.push_back(detail::make_orbital(
          sign < 0 ? OrbitalKind::down_minus : OrbitalKind::down_plus, a, modes, amps,
          -p.omega_x + sign * p.t));
    }
  }
  for (const auto& [a, b] : detail::up_bonds(p)) {
    (void)b;
    for (int sign : {-1, +1}) {
      const Cplx target = p.omega_x + sign * p.t;
      auto orb = detail::up_orbital(
          p, full, a, target, sign < 0 ? OrbitalKind::up_minus : OrbitalKind::up_plus);
      if (!orb.has_value()) {
        if (defect_tolerant) continue;
        throw NumericalError("bulk_orbitals: missing up orbital eigenvector");
      }
      out.push_back(*orb);
    }
  }
  for (const auto& orb : out) {
    const CVector v = orb.to_vector(p.length);
    const double residual = (full * v - orb.energy * v).norm();
    if (residual > res_tol && !defect_tolerant)
      throw NumericalError("bulk_orbitals: orbital failed the eigenvector check");
  }
  return out;
}

struct EdgeBlock {
  CMatrix h;       // 3x3 closed block at the right edge
  Orbital orbital; // eigenvector at energy omega_x
};

// Right-edge block for an odd number of rungs: the unpaired up-leg site
// feeds the last down-leg dimer.
inline EdgeBlock edge_block(const LadderParams& p) {
  p.validate();
  require(p.at_flat_band(), "edge_block: defined at the flat-band point gamma = -omega_y");
  require(p.boundary == Boundary::open, "edge_block: needs an open chain");
  require(p.length % 2 == 1, "edge_block: the unpaired up-leg site exists for odd length");
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 0) = p.omega_x;
  h(1, 0) = -2.0 * kI * p.gamma;
  h(1, 1) = -p.omega_x;
  h(1, 2) = p.t;
  h(2, 1) = p.t;
  h(2, 2) = -p.omega_x;

  // The other block levels are -omega_x -+ t; a collision at
  // omega_x = -+ t/2 leaves a Jordan pair instead of an edge orbital.
  require(std::min(std::abs(2.0 * p.omega_x - p.t), std::abs(2.0 * p.omega_x + p.t)) >
              1e-9 * (1.0 + p.param_scale()),
          "edge_block: edge energy collides with the last dimer levels");
  const CMatrix shifted = h - Cplx(p.omega_x) * CMatrix::Identity(3, 3);
  const auto rr = numkit::detail::numerical_rank(shifted, 1e-10 * (1.0 + h.norm()));
  if (rr.rank != 2)
    throw DomainError("edge_block: edge energy is degenerate at these parameters");
  CVector v = rr.right_null.col(0);
  detail::fix_phase(v);
  const std::vector<Mode> modes{{p.length - 1, Leg::up},
                                {p.length - 1, Leg::down},
                                {p.length - 2, Leg::down}};
  EdgeBlock out;
  out.h = h;
  out.orbital = detail::make_orbital(OrbitalKind::edge_up, p.length - 1, modes, v, p.omega_x);
  return out;
}

// Down-leg sites left without a bond by the dimerization; each is an
// exact single-site eigenstate at the flat-band point (nothing feeds out
// of the down leg once t_up = 0).
inline std::vector<Orbital> single_site_edges(const LadderParams& p) {
  p.validate();
  require(p.at_flat_band(), "single_site_edges: defined at the flat-band point gamma = -omega_y");
  std::vector<Orbital> out;
  if (p.boundary == Boundary::periodic) return out;
  std::vector<int> lone{0};
  if (p.length % 2 == 0) lone.push_back(p.length - 1);
  for (int r : lone) {
    std::vector<Mode> modes{{r, Leg::down}};
    CVector amp(1);
    amp << 1.0;
    out.push_back(detail::make_orbital(OrbitalKind::edge_single, r, modes, amp, -p.omega_x));
  }
  return out;
}

// Bloch Hamiltonian over the two-rung unit cell (slots: even-rung up/down,
// odd-rung up/down); the down-leg bond crosses the cell boundary.
inline CMatrix bloch_hamiltonian(const LadderParams& p, double k) {
  p.validate();
  require(std::isfinite(k), "bloch_hamiltonian: k must be finite");
  CMatrix h = CMatrix::Zero(4, 4);
  const Cplx tu = p.t_up(), td = p.t_down();
  h(0, 0) = p.omega_x;
  h(1, 1) = -p.omega_x;
  h(2, 2) = p.omega_x;
  h(3, 3) = -p.omega_x;
  h(0, 1) = tu;
  h(1, 0) = td;
  h(2, 3) = tu;
  h(3, 2) = td;
  h(0, 2) = p.t;
  h(2, 0) = p.t;
  h(3, 1) = p.t * std::exp(kI * k);
  h(1, 3) = p.t * std::exp(-kI * k);
  return h;
}

struct BandSweep {
  std::vector<double> k;
  CMatrix energies;               // n_k x 4, bands sorted by (Re, Im) per k
  std::array<double, 4> flatness; // max_k |E_b(k) - E_b(k_0)|
};

inline BandSweep band_sweep(const LadderParams& p, int n_k) {
  p.validate();
  require(n_k >= 2, "band_sweep: need at least 2 k points");
  BandSweep out;
  out.k.resize(static_cast<std::size_t>(n_k));
  out.energies.resize(n_k, 4);
  for (int j = 0; j < n_k; ++j) {
    const double k = -M_PI + 2.0 * M_PI * j / n_k;
    out.k[static_cast<std::size_t>(j)] = k;
    const CVector ev = numkit::eigenvalues_only(bloch_hamiltonian(p, k));
    for (int b = 0; b < 4; ++b) out.energies(j, b) = ev[b];
  }
  for (int b = 0; b < 4; ++b) {
    double worst = 0.0;
    for (int j = 1; j < n_k; ++j)
      worst = std::max(worst, std::abs(out.energies(j, b) - out.energies(0, b)));
    out.flatness[static_cast<std::size_t>(b)] = worst;
  }
  return out;
}

// Zero-energy left edge state of the open chain with omega_x = 0, from the
// two-step recursion
//   psi(2n+1, up)  = -(t_up/t)   psi(2n, down)
//   psi(2n+2, down) = -(t_down/t) psi(2n+1, up)
// so both sublattices decay by |t_up t_down| / t^2 per two rungs.
inline CVector analytic_edge_state(const LadderParams& p) {
  p.validate();
  require(p.boundary == Boundary::open, "analytic_edge_state: open chains only");
  require(std::abs(p.omega_x) <= 1e-14 * p.param_scale(),
          "analytic_edge_state: derived for omega_x = 0");
  require(std::abs(p.t_up() * p.t_down()) < p.t * p.t,
          "analytic_edge_state: needs |t_up t_down| < t^2");
  CVector psi = CVector::Zero(2 * static_cast<Eigen::Index>(p.length));
  Cplx down_amp = 1.0;
  psi[mode_index(0, Leg::down, p.length)] = down_amp;
  for (int n = 0; 2 * n + 1 < p.length; ++n) {
    const Cplx up_amp = -(p.t_up() / p.t) * down_amp;
    psi[mode_index(2 * n + 1, Leg::up, p.length)] = up_amp;
    if (2 * n + 2 >= p.length) break;
    down_amp = -(p.t_down() / p.t) * up_amp;
    psi[mode_index(2 * n + 2, Leg::down, p.length)] = down_amp;
  }
  psi.normalize();
  return psi;
}

enum class Side { left, right };

struct EdgeState {
  Cplx energy;
  CVector psi;
  Side side = Side::left;
  int support_size = 0;       // modes with |amp| > 1e-8 (unit-norm state)
  double weight_elsewhere = 0.0;
  double fitted_kappa = std::numeric_limits<double>::quiet_NaN();
};

struct EdgeReport {
  std::vector<EdgeState> states;
  double fitted_kappa = std::numeric_limits<double>::quiet_NaN();  // per two-rung cell
  double predicted_sigma = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline double half_weight(const CVector& v, int length, Side side) {
  double w = 0.0;
  for (int r = 0; r < length; ++r) {
    if ((side == Side::left) != (r < length / 2)) continue;
    w += std::norm(v[mode_index(r, Leg::up, length)]);
    w += std::norm(v[mode_index(r, Leg::down, length)]);
  }
  return w;
}

inline CVector half_projection(const CVector& v, int length, Side side) {
  CVector out = CVector::Zero(v.size());
  for (int r = 0; r < length; ++r) {
    if ((side == Side::left) != (r < length / 2)) continue;
    out[mode_index(r, Leg::up, length)] = v[mode_index(r, Leg::up, length)];
    out[mode_index(r, Leg::down, length)] = v[mode_index(r, Leg::down, length)];
  }
  return out;
}

// Decay constant per two-rung step, sampled on the seed's leg walking
// inward from the strongest site.
inline double fit_edge_kappa(const CVector& v, int length) {
  Eigen::Index seed = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      seed = i;
    }
  if (best <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const int rung0 = static_cast<int>(seed / 2);
  const Leg leg = (seed % 2 == 0) ? Leg::up : Leg::down;
  const int step = (rung0 < length / 2) ? 2 : -2;
  std::vector<std::pair<double, double>> samples;
  // Sample only the first quarter of the chain: past that, the mirror
  // state's tail is no longer negligible against the local amplitude.
  for (int i = 0; i * 8 <= length; ++i) {
    const int r = rung0 + i * step;
    if (r < 0 || r >= length) break;
    const double mag = std::abs(v[mode_index(r, leg, length)]);
    if (mag < best * 1e-10) break;
    samples.emplace_back(static_cast<double>(i), mag);
  }
  if (samples.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  return numkit::fit_decay(samples);
}

}  // namespace detail

// Diagonalize the open chain and pull out the states inside the edge
// energy window (|E| for omega_x = 0, |E -+ omega_x| otherwise).
// Numerically degenerate pairs are split into left/right components
// before classification; exact edge states are untouched by this.
inline EdgeReport numeric_edge_states(const LadderParams& p, double e_window) {
  p.validate();
  require(p.boundary == Boundary::open, "numeric_edge_states: open chains only");
  require(std::isfinite(e_window) && e_window > 0, "numeric_edge_states: bad window");
  const CMatrix h = build_ladder_b(p);
  const auto spec = numkit::eig_general(h);
  const double scale = 1.0 + h.norm();

  std::vector<Eigen::Index> selected;
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    const double d = std::min(std::abs(spec.eigenvalues[i] - Cplx(p.omega_x)),
                              std::abs(spec.eigenvalues[i] + Cplx(p.omega_x)));
    if (d < e_window) selected.push_back(i);
  }

  // Group numerically coincident energies.
  std::vector<std::vector<Eigen::Index>> groups;
  for (auto idx : selected) {
    bool placed = false;
    for (auto& g : groups)
      if (std::abs(spec.eigenvalues[g.front()] - spec.eigenvalues[idx]) <= 1e-8 * scale) {
        g.push_back(idx);
        placed = true;
        break;
      }
    if (!placed) groups.push_back({idx});
  }

  std::vector<CVector> candidates;
  for (const auto& g : groups) {
    if (g.size() == 1) {
      candidates.push_back(spec.right.col(g[0]));
      continue;
    }
    for (Side side : {Side::left, Side::right}) {
      CVector best;
      double best_norm = -1.0;
      for (auto idx : g) {
        CVector proj = detail::half_projection(spec.right.col(idx), p.length, side);
        if (proj.norm() > best_norm) {
          best_norm = proj.norm();
          best = proj;
        }
      }
      if (best_norm > 1e-6) candidates.push_back(best.normalized());
    }
  }

  EdgeReport report;
  for (auto& v : candidates) {
    EdgeState st;
    st.psi = v;
    detail::fix_phase(st.psi);
    st.energy = st.psi.dot(h * st.psi);
    st.side = detail::half_weight(st.psi, p.length, Side::left) >=
                      detail::half_weight(st.psi, p.length, Side::right)
                  ? Side::left
                  : Side::right;
    for (Eigen::Index i = 0; i < st.psi.size(); ++i) {
      if (std::abs(st.psi[i]) > 1e-8)
        ++st.support_size;
      else
        st.weight_elsewhere += std::norm(st.psi[i]);
    }
    st.fitted_kappa = detail::fit_edge_kappa(st.psi, p.length);
    report.states.push_back(std::move(st));
  }
  std::sort(report.states.begin(), report.states.end(), [](const EdgeState& a, const EdgeState& b) {
    if (a.side != b.side) return a.side == Side::left;
    if (a.energy.real() != b.energy.real()) return a.energy.real() < b.energy.real();
    return a.energy.imag() < b.energy.imag();
  });

  const double pp = std::abs(p.t_up() * p.t_down());
  if (pp == 0.0)
    report.predicted_sigma = 0.0;
  else if (pp < p.t * p.t)
    report.predicted_sigma = 1.0 / std::log(p.t * p.t / pp);
  for (const auto& st : report.states)
    if (std::isfinite(st.fitted_kappa)) {
      report.fitted_kappa = st.fitted_kappa;
      break;
    }
  return report;
}

struct ScanPoint {
  double gamma = 0.0;
  double omega_y = 0.0;
  int n_edge_states = 0;  // eigenvalues with |E| < tol_edge
  double max_im = 0.0;
  bool spectral_real = false;
};

// Open-chain sweep over (gamma, omega_y); rows ordered omega_y-major then
// gamma, regardless of the number of worker threads.
inline std::vector<ScanPoint> phase_scan(const LadderParams& base,
                                         const std::vector<double>& gammas,
                                         const std::vector<double>& omega_ys,
                                         double tol_edge = 0.0) {
  base.validate();
  require(!gammas.empty() && !omega_ys.empty(), "phase_scan: empty grid");
  const double tol = tol_edge > 0.0 ? tol_edge : 1e-6 * base.t;
  std::vector<ScanPoint> out(gammas.size() * omega_ys.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= out.size()) return;
      LadderParams p = base;
      p.boundary = Boundary::open;
      p.omega_y = omega_ys[i / gammas.size()];
      p.gamma = gammas[i % gammas.size()];
      const CVector ev = numkit::eigenvalues_only(build_ladder_b(p));
      ScanPoint pt;
      pt.gamma = p.gamma;
      pt.omega_y = p.omega_y;
      for (Eigen::Index j = 0; j < ev.size(); ++j) {
        if (std::abs(ev[j]) < tol) ++pt.n_edge_states;
        pt.max_im = std::max(pt.max_im, std::abs(ev[j].imag()));
      }
      pt.spectral_real = pt.max_im < 1e-10 * base.t;
      out[i] = pt;
    }
  };
  const unsigned n_threads =
      std::max(1u, std::min(std::thread::hardware_concurrency(),
                            static_cast<unsigned>(out.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

inline numkit::Spectrum spectrum_report(const LadderParams& p) {
  return numkit::eig_general(build_ladder_b(p));
}

}  // namespace darkstate::ladder
