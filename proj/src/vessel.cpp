#include "dpsim/vessel.hpp"

namespace dpsim {

Mat3 ModelMatrices::M3() const {
  const Vec6 m = M();
  Mat3 out = Mat3::Zero();
  out(0, 0) = m(0);
  out(1, 1) = m(1);
  out(2, 2) = m(5);
  return out;
}

Mat3 ModelMatrices::D3() const {
  Mat3 out = Mat3::Zero();
  out(0, 0) = D(0);
  out(1, 1) = D(1);
  out(2, 2) = D(5);
  return out;
}

ModelMatrices build_matrices(const VesselParams& p) {
  if (!(p.length > 0.0) || !(p.beam > 0.0) || !(p.draft > 0.0) || !(p.rho > 0.0)) {
    throw ConfigError("vessel dimensions and density must be positive");
  }
  if ((p.added_mass_factor.array() < 0.0).any()) {
    throw ConfigError("added-mass factors must be nonnegative");
  }
  if (p.damping && (p.damping->array() < 0.0).any()) {
    throw ConfigError("damping coefficients must be nonnegative");
  }

  const double L = p.length, B = p.beam, T = p.draft;
  const double m = p.rho * L * B * T;

  ModelMatrices mm;
  mm.M_rb << m, m, m,
      m * (B * B + T * T) / 12.0,
      m * (L * L + T * T) / 12.0,
      m * (L * L + B * B) / 12.0;
  mm.M_a = p.added_mass_factor.cwiseProduct(mm.M_rb);

  // Uniform prism: KB = KG = T/2, so GM reduces to BM = I_waterplane / volume.
  const double gm_t = p.gm_t.value_or(B * B / (12.0 * T));
  const double gm_l = p.gm_l.value_or(L * L / (12.0 * T));
  mm.G.setZero();
  mm.G(2) = p.rho * kGravity * L * B;
  mm.G(3) = p.rho * kGravity * (L * B * T) * gm_t;
  mm.G(4) = p.rho * kGravity * (L * B * T) * gm_l;

  if (p.damping) {
    mm.D = *p.damping;
  } else {
    const Vec6 M = mm.M();
    for (int i : {0, 1, 5}) mm.D(i) = M(i) / p.damping_time_constant;
    for (int i : {2, 3, 4}) mm.D(i) = 2.0 * p.damping_ratio * std::sqrt(M(i) * mm.G(i));
  }

  if ((mm.M().array() <= 0.0).any()) {
    throw ConfigError("total mass matrix must be positive definite");
  }
  return mm;
}

namespace {

Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0.0, -a(2), a(1), a(2), 0.0, -a(0), -a(1), a(0), 0.0;
  return s;
}

}  // namespace

Mat6 transform_J(const Vec6& eta) {
  const double phi = eta(3), theta = eta(4), psi = eta(5);
  if (std::abs(theta) >= deg2rad(87.0)) {
    throw SingularityError("pitch angle too close to +-90 deg for Euler kinematics");
  }

  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double cth = std::cos(theta), sth = std::sin(theta);
  const double cpsi = std::cos(psi), spsi = std::sin(psi);

  // zyx rotation, body to world.
  Mat3 R;
  R << cpsi * cth, -spsi * cphi + cpsi * sth * sphi, spsi * sphi + cpsi * cphi * sth,
      spsi * cth, cpsi * cphi + sphi * sth * spsi, -cpsi * sphi + sth * spsi * cphi,
      -sth, cth * sphi, cth * cphi;

  // Euler-rate transform for [phi theta psi]_dot.
  const double tth = sth / cth;
  Mat3 Teul;
  Teul << 1.0, sphi * tth, cphi * tth,
      0.0, cphi, -sphi,
      0.0, sphi / cth, cphi / cth;

  Mat6 J = Mat6::Zero();
  J.topLeftCorner<3, 3>() = R;
  J.bottomRightCorner<3, 3>() = Teul;
  return J;
}

Mat6 coriolis(const Mat6& M, const Vec6& nu) {
  const Vec3 nu1 = nu.head<3>();
  const Vec3 nu2 = nu.tail<3>();
  const Vec3 a = M.topLeftCorner<3, 3>() * nu1 + M.topRightCorner<3, 3>() * nu2;
  const Vec3 b = M.bottomLeftCorner<3, 3>() * nu1 + M.bottomRightCorner<3, 3>() * nu2;

  Mat6 C = Mat6::Zero();
  C.topRightCorner<3, 3>() = -skew(a);
  C.bottomLeftCorner<3, 3>() = -skew(a);
  C.bottomRightCorner<3, 3>() = -skew(b);
  return C;
}

Mat6 coriolis(const Vec6& M_diag, const Vec6& nu) {
  return coriolis(Mat6(M_diag.asDiagonal()), nu);
}

StateDeriv eom_rhs(const VesselState& state, const Vec6& tau, const ModelMatrices& mats,
                   const Vec6& nu_c) {
  const Vec6 M = mats.M();
  if ((M.array() == 0.0).any()) {
    throw ConfigError("singular mass matrix in eom_rhs");
  }

  const Vec6 nu_r = state.nu - nu_c;
  const Mat6 C_rb = coriolis(mats.M_rb, state.nu);
  const Mat6 C_a = coriolis(mats.M_a, nu_r);

  StateDeriv d;
  d.eta_dot = transform_J(state.eta) * state.nu;
  const Vec6 load = tau - C_rb * nu_r - C_a * nu_r - mats.D.cwiseProduct(nu_r) -
                    mats.G.cwiseProduct(state.eta);
  d.nu_dot = load.cwiseQuotient(M);
  return d;
}

}  // namespace dpsim
