#include "dpsim/gnc.hpp"

#include <Eigen/Eigenvalues>

namespace dpsim {

void RefFilterParams::validate() const {
  if ((omega.array() <= 0.0).any() || (delta.array() <= 0.0).any()) {
    throw ConfigError("reference-filter bandwidth and damping must be positive");
  }
}

RefFilterState RefFilterState::at_rest(const Vec3& pose) {
  RefFilterState s;
  s.x.segment<3>(0) = pose;
  return s;
}

Mat9 ref_filter_A(const RefFilterParams& params) {
  const Mat3 Om = params.omega.asDiagonal();
  const Mat3 De = params.delta.asDiagonal();
  const Mat3 Om2 = Om * Om;
  const Mat3 Om3 = Om2 * Om;
  const Mat3 two_de_i = 2.0 * De + Mat3::Identity();

  Mat9 A = Mat9::Zero();
  A.block<3, 3>(0, 3) = Mat3::Identity();
  A.block<3, 3>(3, 6) = Mat3::Identity();
  A.block<3, 3>(6, 0) = -Om3;
  A.block<3, 3>(6, 3) = -two_de_i * Om2;
  A.block<3, 3>(6, 6) = -two_de_i * Om;
  return A;
}

Eigen::Matrix<double, 9, 3> ref_filter_B(const RefFilterParams& params) {
  const Mat3 Om = params.omega.asDiagonal();
  Eigen::Matrix<double, 9, 3> B = Eigen::Matrix<double, 9, 3>::Zero();
  B.block<3, 3>(6, 0) = Om * Om * Om;
  return B;
}

RefFilterState ref_filter_step(const RefFilterState& state, const RefFilterParams& params,
                               const Vec3& eta_r, double dt) {
  params.validate();
  if (!(dt > 0.0)) throw ConfigError("reference-filter step requires dt > 0");
  if (dt * params.omega.maxCoeff() >= 0.1) {
    throw ConfigError("timestep too large for reference-filter bandwidth (forward Euler)");
  }

  Vec3 input = eta_r;
  input(2) = state.x(2) + wrap_pi(eta_r(2) - state.x(2));

  RefFilterState next;
  next.x = state.x + dt * (ref_filter_A(params) * state.x + ref_filter_B(params) * input);
  return next;
}

BodyReference body_reference(const RefFilterState& state, double psi) {
  const Mat3 Rt = rot_z(psi).transpose();
  const Vec3 etad_dot = state.eta_d_dot();
  const Vec3 etad_ddot = state.eta_d_ddot();
  const double r_d = etad_dot(2);

  // d/dt(R' v) = R' v_dot - r S R' v, planar skew about z.
  Mat3 S = Mat3::Zero();
  S(0, 1) = -1.0;
  S(1, 0) = 1.0;

  BodyReference ref;
  ref.nu_d = Rt * etad_dot;
  ref.nu_d_dot = Rt * etad_ddot - r_d * (S * (Rt * etad_dot));
  return ref;
}

namespace {

void require_spd(const Mat3& m, const char* name) {
  if (!m.isApprox(m.transpose(), 1e-9)) {
    throw ConfigError(std::string(name) + " must be symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Mat3> es(m);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw ConfigError(std::string(name) + " must be positive definite");
  }
}

}  // namespace

void PoseGains::validate() const {
  require_spd(kp, "pose Kp");
  require_spd(kd, "pose Kd");
}

Vec3 pose_control(const Vec3& eta, const Vec3& eta_dot, const Vec3& eta_d,
                  const Vec3& eta_d_dot, const PoseGains& gains) {
  Vec3 err = eta - eta_d;
  err(2) = wrap_pi(err(2));
  const Vec3 err_dot = eta_dot - eta_d_dot;

  const Mat3 Rt = rot_z(eta(2)).transpose();
  return -gains.kp * (Rt * err) - gains.kd * (Rt * err_dot);
}

void VelGains::validate() const {
  if ((kp.array() <= 0.0).any() || (ki.array() <= 0.0).any()) {
    throw ConfigError("velocity gains must be positive");
  }
  if ((xi_max.array() <= 0.0).any()) {
    throw ConfigError("integral clamp must be positive");
  }
}

VelControlOut velocity_control(const Vec3& nu, const Vec3& nu_d, const Vec3& nu_d_dot,
                               const VelGains& gains, const Vec3& xi, const Mat3& M3,
                               const Mat3& D3, double dt) {
  const Vec3 err = nu - nu_d;
  const Vec3 a = nu_d_dot - gains.kp.cwiseProduct(err) - gains.ki.cwiseProduct(xi);

  VelControlOut out;
  out.tau = M3 * a + D3 * nu_d;
  out.xi_next = (xi + dt * err).cwiseMax(-gains.xi_max).cwiseMin(gains.xi_max);
  return out;
}

double velocity_lyapunov(const Vec3& nu_err, const Vec3& xi, const VelGains& gains,
                         const Mat3& M3) {
  const Mat3 KiM = Mat3(gains.ki.asDiagonal()) * M3;
  return 0.5 * nu_err.dot(M3 * nu_err) + 0.5 * xi.dot(KiM * xi);
}

const char* to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::pose: return "pose";
    case ControlMode::velocity: return "velocity";
    case ControlMode::external: return "external";
  }
  return "?";
}

std::optional<ControlMode> control_mode_from_string(const std::string& s) {
  if (s == "pose") return ControlMode::pose;
  if (s == "velocity") return ControlMode::velocity;
  if (s == "external") return ControlMode::external;
  return std::nullopt;
}

MuxOutput ControlMux::select(ControlMode mode, const std::optional<Vec3>& pose_tau,
                             const std::optional<Vec3>& velocity_tau,
                             const std::optional<Vec3>& external_tau) {
  const std::optional<Vec3>* chosen = nullptr;
  switch (mode) {
    case ControlMode::pose: chosen = &pose_tau; break;
    case ControlMode::velocity: chosen = &velocity_tau; break;
    case ControlMode::external: chosen = &external_tau; break;
  }
  if (!chosen || !chosen->has_value()) {
    throw ConfigError(std::string("no control candidate for active mode '") + to_string(mode) +
                      "'");
  }

  MuxOutput out;
  out.tau = **chosen;
  out.velocity_reset = (mode != mode_);
  mode_ = mode;
  return out;
}

}  // namespace dpsim
