#pragma once

#include <optional>

#include "dpsim/types.hpp"

namespace dpsim {

// Hull parameters for the uniform-prism vessel model. All model matrices
// derive from these. Lengths in m, density in kg/m^3, current in body frame.
struct VesselParams {
  double length = 1.0;
  double beam = 0.3;
  double draft = 0.08;
  double rho = 1000.0;

  // Added mass as a fraction of the rigid-body diagonal, per DOF
  // (surge, sway, heave, roll, pitch, yaw).
  Vec6 added_mass_factor = (Vec6() << 0.2, 1.0, 1.0, 1.0, 0.5, 0.5).finished();

  // Linear damping diagonal; derived from the mass/restoring diagonals
  // when unset (see build_matrices).
  std::optional<Vec6> damping;

  // Metacentric heights; uniform-prism values when unset.
  std::optional<double> gm_t;
  std::optional<double> gm_l;

  // Constant current velocity nu_c, body frame.
  Vec6 current = Vec6::Zero();

  // Knobs for the derived damping defaults.
  double damping_time_constant = 5.0;   // surge/sway/yaw: d = M_ii / T_c
  double damping_ratio = 0.1;           // heave/roll/pitch: d = 2*zeta*sqrt(M_ii*G_ii)
};

struct VesselState {
  Vec6 eta = Vec6::Zero();  // [x y z phi theta psi], world frame
  Vec6 nu = Vec6::Zero();   // [u v w p q r], body frame

  void wrap_angles() {
    eta(3) = wrap_pi(eta(3));
    eta(4) = wrap_pi(eta(4));
    eta(5) = wrap_pi(eta(5));
  }
  bool finite() const { return eta.allFinite() && nu.allFinite(); }
};

// Diagonal model matrices, stored as their diagonals.
struct ModelMatrices {
  Vec6 M_rb = Vec6::Zero();  // rigid-body mass/inertia
  Vec6 M_a = Vec6::Zero();   // added mass
  Vec6 D = Vec6::Zero();     // linear damping
  Vec6 G = Vec6::Zero();     // restoring stiffness (heave, roll, pitch)

  Vec6 M() const { return M_rb + M_a; }

  // Surge/sway/yaw sub-blocks used by the 3-DOF controllers.
  Mat3 M3() const;
  Mat3 D3() const;
};

// Mass, inertia, added mass, damping and restoring diagonals from hull
// parameters. Throws ConfigError on invalid parameters.
ModelMatrices build_matrices(const VesselParams& params);

// Kinematic transform eta_dot = J(eta) * nu: rotation block for linear
// velocities, Euler-rate block for angular. Throws SingularityError when
// |theta| is within 3 degrees of +-90.
Mat6 transform_J(const Vec6& eta);

// Coriolis-centripetal matrix from a mass matrix and a velocity, standard
// two-block skew-symmetric construction. C(nu) satisfies x'C(nu)x = 0.
Mat6 coriolis(const Mat6& M, const Vec6& nu);
Mat6 coriolis(const Vec6& M_diag, const Vec6& nu);

struct StateDeriv {
  Vec6 eta_dot;
  Vec6 nu_dot;
};

// Right-hand side of the equations of motion:
//   eta_dot = J(eta) nu
//   nu_dot  = M^-1 (tau - C_rb(nu) nu_r - C_a(nu_r) nu_r - D nu_r - G eta)
// with nu_r = nu - nu_c.
StateDeriv eom_rhs(const VesselState& state, const Vec6& tau, const ModelMatrices& mats,
                   const Vec6& nu_c);

}  // namespace dpsim
