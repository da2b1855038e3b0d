#pragma once

// Three-level Lambda system driven by two Rabi couplings, with a complex
// (gain/loss) magnetic field acting on the two lower levels. Provides the
// dark/bright decomposition, the rotated-field matrix elements, and the
// imaginary-field compensation that pins the dark state as an exact
// eigenstate with a real eigenvalue.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "darkstate/numkit.hpp"
#include "darkstate/types.hpp"

namespace darkstate::lambda {

// Basis order everywhere: (|up>, |down>, |3>).

struct RabiPair {
  double omega1 = 0.0;  // couples |up> to |3>
  double omega2 = 0.0;  // couples |down> to |3>, with opposite sign

  void validate() const {
    require(std::isfinite(omega1) && std::isfinite(omega2),
            "RabiPair: non-finite Rabi amplitude");
    require(omega1 >= 0.0 && omega2 >= 0.0, "RabiPair: amplitudes must be >= 0");
    require(omega() > 0.0, "RabiPair: omega1 and omega2 must not both vanish");
  }
  double omega() const { return std::hypot(omega1, omega2); }
  // cos(theta/2) = omega2/omega, sin(theta/2) = omega1/omega
  double theta() const { return 2.0 * std::atan2(omega1, omega2); }
};

inline RabiPair rabi_from_theta(double theta, double omega = 1.0) {
  require(std::isfinite(theta) && theta >= 0.0 && theta <= M_PI,
          "rabi_from_theta: theta must lie in [0, pi]");
  require(std::isfinite(omega) && omega > 0.0, "rabi_from_theta: omega must be > 0");
  return {omega * std::sin(theta / 2.0), omega * std::cos(theta / 2.0)};
}

struct ComplexField {
  RVec3 real = RVec3::Zero();
  RVec3 imag = RVec3::Zero();

  void validate() const {
    require(real.allFinite() && imag.allFinite(), "ComplexField: non-finite component");
  }
  CVec3 value() const { return real.cast<Cplx>() + kI * imag.cast<Cplx>(); }
};

struct DarkBright {
  double theta = 0.0;
  Eigen::Vector2d dark;    // cos(theta/2)|up> + sin(theta/2)|down>
  Eigen::Vector2d bright;  // -sin(theta/2)|up> + cos(theta/2)|down>
};

inline DarkBright dark_bright(const RabiPair& rabi) {
  rabi.validate();
  const double c = rabi.omega2 / rabi.omega();
  const double s = rabi.omega1 / rabi.omega();
  DarkBright db;
  db.theta = rabi.theta();
  db.dark << c, s;
  db.bright << -s, c;
  return db;
}

// Full 3x3 Hamiltonian: Rabi couplings to |3> plus the field acting as
// B.S (S = sigma/2) on the (|up>, |down>) block.
inline Eigen::Matrix3cd h_lambda(const RabiPair& rabi, const ComplexField& field) {
  rabi.validate();
  field.validate();
  const CVec3 b = field.value();
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 0) = 0.5 * b[2];
  h(0, 1) = 0.5 * (b[0] - kI * b[1]);
  h(1, 0) = 0.5 * (b[0] + kI * b[1]);
  h(1, 1) = -0.5 * b[2];
  h(0, 2) = rabi.omega1;
  h(2, 0) = rabi.omega1;
  h(1, 2) = -rabi.omega2;
  h(2, 1) = -rabi.omega2;
  return h;
}

// Field components in the frame where the dark state maps to |up|:
//   B'x = Bx cos(theta) - Bz sin(theta)
//   B'y = By
//   B'z = Bx sin(theta) + Bz cos(theta)
// Applied componentwise to complex vectors.
inline CVec3 rotate_field(const CVec3& b, double theta) {
  require(std::isfinite(theta), "rotate_field: theta must be finite");
  require(b.allFinite(), "rotate_field: non-finite field");
  const double c = std::cos(theta), s = std::sin(theta);
  CVec3 out;
  out[0] = b[0] * c - b[2] * s;
  out[1] = b[1];
  out[2] = b[0] * s + b[2] * c;
  return out;
}

inline CVec3 inverse_rotate_field(const CVec3& b, double theta) {
  return rotate_field(b, -theta);
}

struct DBCouplings {
  Cplx m_db;   // <D|H|B>: feeds the dark state from the bright one
  Cplx m_bd;   // <B|H|D>: leaks the dark state into the bright one
  Cplx delta;  // <D|H|D> - <B|H|B>
};

inline DBCouplings db_couplings(const RabiPair& rabi, const ComplexField& field) {
  const auto db = dark_bright(rabi);
  field.validate();
  const Eigen::Matrix3cd h3 = h_lambda(rabi, field);
  const Eigen::Matrix2cd h2 = h3.topLeftCorner<2, 2>();
  const Eigen::Vector2cd d = db.dark.cast<Cplx>();
  const Eigen::Vector2cd b = db.bright.cast<Cplx>();
  DBCouplings out;
  out.m_db = d.dot(h2 * b);
  out.m_bd = b.dot(h2 * d);
  out.delta = d.dot(h2 * d) - b.dot(h2 * b);
  return out;
}

// Imaginary field that cancels the dark->bright leakage and the imaginary
// part of the detuning, in closed form:
//   Bi_x = -Br_y cos(theta)
//   Bi_y =  Br_x cos(theta) - Br_z sin(theta)
//   Bi_z =  Br_y sin(theta)
inline RVec3 compensate(const RVec3& b_real, double theta) {
  require(b_real.allFinite(), "compensate: non-finite field");
  require(std::isfinite(theta), "compensate: theta must be finite");
  const double c = std::cos(theta), s = std::sin(theta);
  RVec3 bi;
  bi[0] = -b_real[1] * c;
  bi[1] = b_real[0] * c - b_real[2] * s;
  bi[2] = b_real[1] * s;
  return bi;
}

// Independent route to the same field: solve the 3x3 real linear system
//   Re <B|H|D> = 0,  Im <B|H|D> = 0,  Im delta = 0
// for the imaginary components. Kept deliberately separate from the
// closed form above so the two can cross-check each other.
inline RVec3 compensate_linear(const RVec3& b_real, double theta) {
  require(b_real.allFinite(), "compensate_linear: non-finite field");
  require(std::isfinite(theta), "compensate_linear: theta must be finite");
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix3d rot;
  rot << c, 0.0, -s,
         0.0, 1.0, 0.0,
         s, 0.0, c;
  const RVec3 br_rot = rot * b_real;
  // Unknown x = B_imag. Conditions on the rotated components:
  //   (R x)_y = (R Br)_x,  (R x)_x = -(R Br)_y,  (R x)_z = 0.
  Eigen::Matrix3d a;
  a.row(0) = rot.row(1);
  a.row(1) = rot.row(0);
  a.row(2) = rot.row(2);
  RVec3 rhs(br_rot[0], -br_rot[1], 0.0);
  Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
  if (!lu.isInvertible())
    throw NumericalError("compensate_linear: singular compensation system");
  return lu.solve(rhs);
}

struct DarkCheck {
  double residual = 0.0;  // ||(H - lambda_d) |D>|| on the full 3-level space
  Cplx lambda_d;          // <D|H|D>
};

inline DarkCheck verify_dark(const RabiPair& rabi, const ComplexField& field) {
  const auto db = dark_bright(rabi);
  const Eigen::Matrix3cd h = h_lambda(rabi, field);
  CVec3 d3;
  d3 << db.dark[0], db.dark[1], 0.0;
  DarkCheck out;
  out.lambda_d = d3.dot(h * d3);
  out.residual = (h * d3 - out.lambda_d * d3).norm();
  return out;
}

struct BlochSample {
  double t = 0.0;
  RVec3 s = RVec3::Zero();      // Bloch vector of the normalized 2-level block
  double dark_fidelity = 0.0;   // |<D|psi>| / ||psi||
};

inline std::vector<BlochSample> bloch_trajectory(const RabiPair& rabi,
                                                 const ComplexField& field,
                                                 const CVec3& psi0,
                                                 const std::vector<double>& times) {
  const auto db = dark_bright(rabi);
  field.validate();
  require(psi0.allFinite() && psi0.norm() > 0, "bloch_trajectory: invalid initial state");
  const Eigen::Matrix3cd h = h_lambda(rabi, field);
  const CMatrix hd = h;
  std::vector<BlochSample> out;
  out.reserve(times.size());
  for (double t : times) {
    CVector psi = numkit::evolve(hd, psi0, t);
    const double norm = psi.norm();
    if (!(norm > 1e-300))
      throw NumericalError("bloch_trajectory: state norm underflowed");
    BlochSample sample;
    sample.t = t;
    const Cplx up = psi[0], down = psi[1];
    const double n2 = std::norm(up) + std::norm(down);
    if (n2 > 0) {
      const Cplx cross = std::conj(up) * down;
      sample.s[0] = 2.0 * cross.real() / n2;
      sample.s[1] = 2.0 * cross.imag() / n2;
      sample.s[2] = (std::norm(up) - std::norm(down)) / n2;
    }
    sample.dark_fidelity =
        std::abs(db.dark[0] * up + db.dark[1] * down) / norm;
    out.push_back(sample);
  }
  return out;
}

}  // namespace darkstate::lambda
