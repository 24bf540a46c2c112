#pragma once

#include <optional>

#include "dpsim/types.hpp"

namespace dpsim {

// Third-order reference filter producing smooth desired pose, velocity and
// acceleration from step setpoints, one critically tunable axis each for
// surge, sway and heading.
struct RefFilterParams {
  Vec3 omega = Vec3(0.6, 0.6, 0.9);  // bandwidth, rad/s
  Vec3 delta = Vec3(1.0, 1.0, 1.0);  // damping

  void validate() const;
};

struct RefFilterState {
  Vec9 x = Vec9::Zero();  // stacked [eta_d, eta_d_dot, eta_d_ddot]

  Vec3 eta_d() const { return x.segment<3>(0); }
  Vec3 eta_d_dot() const { return x.segment<3>(3); }
  Vec3 eta_d_ddot() const { return x.segment<3>(6); }

  static RefFilterState at_rest(const Vec3& pose);
};

// State matrices x_dot = A x + B eta_r.
Mat9 ref_filter_A(const RefFilterParams& params);
Eigen::Matrix<double, 9, 3> ref_filter_B(const RefFilterParams& params);

// One forward-Euler update. The heading component of eta_r is unwrapped
// relative to the current desired heading so setpoints across +-pi do not
// jump. Throws ConfigError when dt * max(omega) >= 0.1.
RefFilterState ref_filter_step(const RefFilterState& state, const RefFilterParams& params,
                               const Vec3& eta_r, double dt);

// Desired velocity/acceleration rotated into the body frame at heading psi,
// for driving the velocity loop from the filter.
struct BodyReference {
  Vec3 nu_d;
  Vec3 nu_d_dot;
};
BodyReference body_reference(const RefFilterState& state, double psi);

struct PoseGains {
  Mat3 kp = Vec3(40.0, 40.0, 15.0).asDiagonal();
  Mat3 kd = Vec3(60.0, 60.0, 20.0).asDiagonal();

  void validate() const;  // symmetric positive definite
};

// PD law on the body-frame tracking error:
//   tau = -Kp R(psi)' (eta - eta_d) - Kd R(psi)' (eta_dot - eta_d_dot)
// with the heading error wrapped to (-pi, pi].
Vec3 pose_control(const Vec3& eta, const Vec3& eta_dot, const Vec3& eta_d,
                  const Vec3& eta_d_dot, const PoseGains& gains);

struct VelGains {
  Vec3 kp = Vec3(1.5, 1.5, 1.5);   // diagonal, > 0
  Vec3 ki = Vec3(0.3, 0.3, 0.3);   // diagonal, > 0
  Vec3 xi_max = Vec3::Constant(1e9);  // integral clamp

  void validate() const;
};

struct VelControlOut {
  Vec3 tau;
  Vec3 xi_next;
};

// PI velocity law with reference feedforward:
//   a = nu_d_dot - Kp (nu - nu_d) - Ki xi,  tau = M a + D nu_d
// xi advances by forward Euler on the velocity error and is clamped to
// +-xi_max componentwise.
VelControlOut velocity_control(const Vec3& nu, const Vec3& nu_d, const Vec3& nu_d_dot,
                               const VelGains& gains, const Vec3& xi, const Mat3& M3,
                               const Mat3& D3, double dt);

// Lyapunov function of the velocity loop, V = 1/2 e'Me + 1/2 xi'Ki M xi.
double velocity_lyapunov(const Vec3& nu_err, const Vec3& xi, const VelGains& gains,
                         const Mat3& M3);

enum class ControlMode { pose, velocity, external };

const char* to_string(ControlMode mode);
std::optional<ControlMode> control_mode_from_string(const std::string& s);

struct MuxOutput {
  Vec3 tau;
  bool velocity_reset;  // true on a mode switch; caller zeroes the integral state
};

// Controller multiplexer: forwards exactly the candidate of the active
// mode. A missing active candidate is a configuration error. Switching
// modes flags the velocity controller's integral state for reset.
class ControlMux {
 public:
  explicit ControlMux(ControlMode initial = ControlMode::pose) : mode_(initial) {}

  ControlMode mode() const { return mode_; }

  MuxOutput select(ControlMode mode, const std::optional<Vec3>& pose_tau,
                   const std::optional<Vec3>& velocity_tau,
                   const std::optional<Vec3>& external_tau);

 private:
  ControlMode mode_;
};

}  // namespace dpsim
