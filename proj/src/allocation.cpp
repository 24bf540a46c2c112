#include "dpsim/allocation.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace dpsim {

ThrusterLayout ThrusterLayout::default_layout() {
  ThrusterLayout l;
  l.thrusters = {
      {Thruster::Type::azimuth, -0.4, -0.1, 0.0, 2.0, 10.0},
      {Thruster::Type::azimuth, -0.4, +0.1, 0.0, 2.0, 10.0},
      {Thruster::Type::fixed, +0.45, 0.0, kPi / 2.0, 2.0, 10.0},  // bow tunnel
  };
  return l;
}

int ThrusterLayout::dof_count() const {
  int n = 0;
  for (const auto& t : thrusters) n += t.type == Thruster::Type::azimuth ? 2 : 1;
  return n;
}

void ThrusterLayout::validate() const {
  if (thrusters.empty()) throw ConfigError("thruster layout is empty");
  for (const auto& t : thrusters) {
    if (!(t.f_max > 0.0)) throw ConfigError("thruster force limit must be positive");
    if (!(t.f_rate > 0.0)) throw ConfigError("thruster rate limit must be positive");
  }
}

Eigen::Matrix<double, 3, Eigen::Dynamic> config_matrix(const ThrusterLayout& layout) {
  layout.validate();
  Eigen::Matrix<double, 3, Eigen::Dynamic> B(3, layout.dof_count());

  int col = 0;
  for (const auto& t : layout.thrusters) {
    if (t.type == Thruster::Type::fixed) {
      const double c = std::cos(t.angle), s = std::sin(t.angle);
      B.col(col++) = Vec3(c, s, t.lx * s - t.ly * c);
    } else {
      B.col(col++) = Vec3(1.0, 0.0, -t.ly);  // Fx column
      B.col(col++) = Vec3(0.0, 1.0, t.lx);   // Fy column
    }
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  if (svd.rank() < 3) {
    throw ConfigError("thruster configuration is underactuated (rank(B) < 3)");
  }
  return B;
}

Allocator::Allocator(const ThrusterLayout& layout) : layout_(layout), B_(config_matrix(layout)) {
  const Mat3 BBt = B_ * B_.transpose();
  B_pinv_ = B_.transpose() * BBt.inverse();

  const int n = static_cast<int>(B_.cols());
  f_max_.resize(n);
  f_rate_.resize(n);
  int col = 0;
  for (const auto& t : layout_.thrusters) {
    const int reps = t.type == Thruster::Type::azimuth ? 2 : 1;
    for (int k = 0; k < reps; ++k, ++col) {
      f_max_(col) = t.f_max;
      f_rate_(col) = t.f_rate;
    }
  }
  u_prev_ = Eigen::VectorXd::Zero(n);
}

void Allocator::reset(const Eigen::VectorXd& u_prev) {
  if (u_prev.size() != u_prev_.size()) throw ConfigError("allocator reset size mismatch");
  u_prev_ = u_prev;
}

AllocationResult Allocator::allocate(const Vec3& tau_cmd, double dt) {
  if (!(dt > 0.0)) throw ConfigError("allocation requires dt > 0");

  Eigen::VectorXd u = B_pinv_ * tau_cmd;

  // Saturation, then rate limit against the previous command.
  u = u.cwiseMax(-f_max_).cwiseMin(f_max_);
  const Eigen::VectorXd step = f_rate_ * dt;
  u = u.cwiseMax(u_prev_ - step).cwiseMin(u_prev_ + step);

  u_prev_ = u;

  AllocationResult res;
  res.u = u;
  res.tau_real = B_ * u;

  int col = 0;
  for (const auto& t : layout_.thrusters) {
    if (t.type == Thruster::Type::azimuth) {
      res.azimuth_angle.push_back(std::atan2(u(col + 1), u(col)));
      col += 2;
    } else {
      col += 1;
    }
  }
  return res;
}

Vec3 Allocator::capacity() const {
  Vec3 cap = Vec3::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    for (int i = 0; i < B_.cols(); ++i) cap(axis) += std::abs(B_(axis, i)) * f_max_(i);
  }
  return cap;
}

}  // namespace dpsim
