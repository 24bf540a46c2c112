#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Eigenvalues>
#include <random>

#include "doctest.h"
#include "dpsim/gnc.hpp"

using namespace dpsim;

TEST_CASE("reference filter equilibrium identity") {
  RefFilterParams p;
  const Vec3 eta_r(1.3, -0.7, 0.4);
  Vec9 x = Vec9::Zero();
  x.segment<3>(0) = eta_r;

  const Vec9 rhs = ref_filter_A(p) * x + ref_filter_B(p) * eta_r;
  CHECK(rhs.cwiseAbs().maxCoeff() <= 1e-12);

  const RefFilterState next = ref_filter_step(RefFilterState{x}, p, eta_r, 0.01);
  CHECK(next.x == x);
}

TEST_CASE("filter poles are strictly in the left half-plane") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uo(0.05, 4.0), ud(0.05, 3.0);
  for (int k = 0; k < 100; ++k) {
    RefFilterParams p;
    for (int i = 0; i < 3; ++i) {
      p.omega(i) = uo(rng);
      p.delta(i) = ud(rng);
    }
    const Eigen::EigenSolver<Mat9> es(ref_filter_A(p));
    CHECK(es.eigenvalues().real().maxCoeff() < 0.0);
  }
}

TEST_CASE("critically damped step response has no overshoot and no bias") {
  RefFilterParams p;  // delta = 1
  RefFilterState s;
  const Vec3 target(1.0, -2.0, 0.5);

  const double dt = 0.01;
  double max_x = 0.0;
  for (int k = 0; k < 8000; ++k) {
    s = ref_filter_step(s, p, target, dt);
    max_x = std::max(max_x, s.x(0));
  }
  CHECK(max_x <= 1.05 * target(0));
  CHECK((s.eta_d() - target).cwiseAbs().maxCoeff() < 1e-3);
  CHECK(s.eta_d_dot().cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("timestep guard against the filter bandwidth") {
  RefFilterParams p;
  p.omega = Vec3(4.0, 4.0, 4.0);
  RefFilterState s;
  CHECK_THROWS_AS(ref_filter_step(s, p, Vec3::Zero(), 0.05), ConfigError);
}

TEST_CASE("heading setpoints take the short way across +-pi") {
  RefFilterParams p;
  RefFilterState s;
  s.x(2) = 3.0;  // current desired heading near +pi
  const Vec3 target(0.0, 0.0, -3.0);  // 0.28 rad away across the seam

  const double dt = 0.01;
  double max_dev = 0.0;
  for (int k = 0; k < 6000; ++k) {
    s = ref_filter_step(s, p, target, dt);
    max_dev = std::max(max_dev, std::abs(s.x(2) - 3.0));
  }
  // Short path: the desired heading moves ~0.28 rad up, never swings ~6 rad.
  CHECK(max_dev < 0.5);
  CHECK(std::abs(wrap_pi(s.x(2) - target(2))) < 1e-3);
}

TEST_CASE("pose control is zero at zero error") {
  PoseGains g;
  const Vec3 eta(0.4, 0.2, 1.0);
  const Vec3 eta_dot(0.1, 0.0, -0.05);
  CHECK(pose_control(eta, eta_dot, eta, eta_dot, g).isZero());
}

TEST_CASE("unit proportional gain at zero heading") {
  PoseGains g;
  g.kp = Mat3::Identity();
  g.kd = Mat3::Identity();
  const Vec3 tau =
      pose_control(Vec3(1.0, 0.0, 0.0), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), g);
  CHECK(tau(0) == doctest::Approx(-1.0));
  CHECK(tau(1) == doctest::Approx(0.0));
  CHECK(tau(2) == doctest::Approx(0.0));
}

TEST_CASE("body-frame command is invariant under world rotations") {
  PoseGains g;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ua(-kPi, kPi);
  for (int k = 0; k < 200; ++k) {
    const Vec3 eta(u(rng), u(rng), ua(rng));
    const Vec3 eta_d(u(rng), u(rng), ua(rng) * 0.2);
    const Vec3 eta_dot(u(rng), u(rng), u(rng));
    const Vec3 eta_d_dot(u(rng), u(rng), u(rng));
    const Vec3 tau = pose_control(eta, eta_dot, eta_d, eta_d_dot, g);

    const double rot = ua(rng);
    const Mat3 R = rot_z(rot);
    const auto rotate = [&R, rot](const Vec3& v, bool pose) {
      Vec3 out = R * Vec3(v(0), v(1), 0.0);
      out(2) = pose ? v(2) + rot : v(2);
      return out;
    };
    const Vec3 tau_rot = pose_control(rotate(eta, true), rotate(eta_dot, false),
                                      rotate(eta_d, true), rotate(eta_d_dot, false), g);
    CHECK((tau - tau_rot).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("heading error wraps across +-pi") {
  PoseGains g;
  g.kp = Mat3::Identity();
  g.kd = Mat3::Zero() + 1e-12 * Mat3::Identity();
  const Vec3 eta(0.0, 0.0, deg2rad(179.0));
  const Vec3 eta_d(0.0, 0.0, deg2rad(-179.0));
  const Vec3 tau = pose_control(eta, Vec3::Zero(), eta_d, Vec3::Zero(), g);
  // 2 degrees of error, not 358.
  CHECK(std::abs(tau(2)) == doctest::Approx(deg2rad(2.0)).epsilon(1e-9));
}

TEST_CASE("pose gain validation") {
  PoseGains g;
  g.kp(0, 1) = 5.0;  // asymmetric
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = PoseGains{};
  g.kd = -Mat3::Identity();
  CHECK_THROWS_AS(g.validate(), ConfigError);
}

namespace {

Mat3 diag3(double a, double b, double c) { return Vec3(a, b, c).asDiagonal(); }

}  // namespace

TEST_CASE("velocity control reduces to damping feedforward at zero error") {
  VelGains g;
  const Mat3 M = diag3(28.8, 48.0, 3.27);
  const Mat3 D = diag3(5.76, 9.6, 0.654);
  const Vec3 nu_d(0.2, -0.1, 0.05);
  const VelControlOut out =
      velocity_control(nu_d, nu_d, Vec3::Zero(), g, Vec3::Zero(), M, D, 0.01);
  CHECK((out.tau - D * nu_d).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pure proportional braking") {
  VelGains g;
  const Mat3 M = diag3(28.8, 48.0, 3.27);
  const Mat3 D = diag3(5.76, 9.6, 0.654);
  const Vec3 nu(0.3, 0.1, -0.2);
  const VelControlOut out =
      velocity_control(nu, Vec3::Zero(), Vec3::Zero(), g, Vec3::Zero(), M, D, 0.01);
  const Vec3 expected = -M * g.kp.cwiseProduct(nu);
  CHECK((out.tau - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("integral state integrates the error and clamps") {
  VelGains g;
  g.xi_max = Vec3(0.05, 0.05, 0.05);
  const Mat3 M = diag3(1.0, 1.0, 1.0);
  const Mat3 D = M;
  Vec3 xi = Vec3::Zero();
  const Vec3 nu(1.0, -1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    xi = velocity_control(nu, Vec3::Zero(), Vec3::Zero(), g, xi, M, D, 0.01).xi_next;
    CHECK(xi.cwiseAbs().maxCoeff() <= g.xi_max.maxCoeff() + 1e-15);
  }
  CHECK(xi(0) == doctest::Approx(0.05));
  CHECK(xi(1) == doctest::Approx(-0.05));
}

TEST_CASE("Ki M is symmetric for diagonal configurations") {
  VelGains g;
  const Mat3 M = diag3(28.8, 48.0, 3.27);
  const Mat3 KiM = Mat3(g.ki.asDiagonal()) * M;
  CHECK((KiM - KiM.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Lyapunov function decays along the nominal closed loop") {
  // Integrate the coupled (nu, xi) dynamics of the plant M nu' + D nu = tau
  // under the velocity law, with the control evaluated at the stage states.
  const Mat3 M = diag3(28.8, 48.0, 3.27);
  const Mat3 D = diag3(5.76, 9.6, 0.654);
  VelGains g;
  g.xi_max = Vec3::Constant(1e12);  // keep the clamp out of the picture
  const Vec3 nu_d(0.15, -0.1, 0.2);

  using State = Eigen::Matrix<double, 6, 1>;
  const auto deriv = [&](const State& y) {
    const Vec3 nu = y.head<3>();
    const Vec3 xi = y.tail<3>();
    const Vec3 tau = velocity_control(nu, nu_d, Vec3::Zero(), g, xi, M, D, 1e-3).tau;
    State dy;
    dy.head<3>() = M.inverse() * (tau - D * nu);
    dy.tail<3>() = nu - nu_d;
    return dy;
  };

  State y = State::Zero();
  y.head<3>() = Vec3(0.4, 0.3, -0.5);
  const double dt = 1e-3;
  double v_prev = velocity_lyapunov(y.head<3>() - nu_d, y.tail<3>(), g, M);
  for (int k = 0; k < 40000; ++k) {
    const State k1 = deriv(y);
    const State k2 = deriv(y + 0.5 * dt * k1);
    const State k3 = deriv(y + 0.5 * dt * k2);
    const State k4 = deriv(y + dt * k3);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double v = velocity_lyapunov(y.head<3>() - nu_d, y.tail<3>(), g, M);
    CHECK(v <= v_prev + 1e-9);
    v_prev = v;
  }
  CHECK((y.head<3>() - nu_d).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("body reference matches a numeric derivative") {
  RefFilterParams p;
  RefFilterState s;
  const Vec3 target(1.0, 0.5, 0.8);
  const double dt = 1e-4;
  for (int k = 0; k < 20000; ++k) s = ref_filter_step(s, p, target, dt);

  const double psi = s.eta_d()(2);
  const BodyReference ref = body_reference(s, psi);
  CHECK((ref.nu_d - rot_z(psi).transpose() * s.eta_d_dot()).cwiseAbs().maxCoeff() < 1e-12);

  // Finite difference of R(psi_d(t))' eta_d_dot(t) along the filter flow.
  const RefFilterState s2 = ref_filter_step(s, p, target, dt);
  const Vec3 nu_now = rot_z(s.eta_d()(2)).transpose() * s.eta_d_dot();
  const Vec3 nu_next = rot_z(s2.eta_d()(2)).transpose() * s2.eta_d_dot();
  const Vec3 fd = (nu_next - nu_now) / dt;
  CHECK((ref.nu_d_dot - fd).cwiseAbs().maxCoeff() < 1e-3);
}

TEST_CASE("multiplexer forwards the active candidate and flags switches") {
  ControlMux mux(ControlMode::pose);
  const Vec3 tp(1.0, 2.0, 3.0), tv(4.0, 5.0, 6.0), te(7.0, 8.0, 9.0);

  MuxOutput out = mux.select(ControlMode::pose, tp, tv, te);
  CHECK(out.tau == tp);
  CHECK_FALSE(out.velocity_reset);

  out = mux.select(ControlMode::velocity, tp, tv, te);
  CHECK(out.tau == tv);
  CHECK(out.velocity_reset);

  out = mux.select(ControlMode::velocity, tp, tv, te);
  CHECK(out.tau == tv);
  CHECK_FALSE(out.velocity_reset);

  out = mux.select(ControlMode::external, std::nullopt, std::nullopt, te);
  CHECK(out.tau == te);  // forwarded verbatim
  CHECK(out.velocity_reset);

  CHECK_THROWS_AS(mux.select(ControlMode::pose, std::nullopt, tv, te), ConfigError);
}

TEST_CASE("multiplexer output equals exactly one candidate") {
  ControlMux mux(ControlMode::pose);
  const Vec3 tp(1.0, 0.0, 0.0), tv(0.0, 1.0, 0.0), te(0.0, 0.0, 1.0);
  const MuxOutput out = mux.select(ControlMode::velocity, tp, tv, te);
  int matches = 0;
  for (const Vec3& c : {tp, tv, te}) {
    if (out.tau == c) ++matches;
  }
  CHECK(matches == 1);
}

TEST_CASE("mode name round trip") {
  for (const ControlMode m : {ControlMode::pose, ControlMode::velocity, ControlMode::external}) {
    CHECK(control_mode_from_string(to_string(m)) == m);
  }
  CHECK_FALSE(control_mode_from_string("warp").has_value());
}
