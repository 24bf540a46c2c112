#pragma once

#include <string>
#include <vector>

#include "dpsim/types.hpp"

namespace dpsim {

struct Thruster {
  enum class Type { fixed, azimuth };

  Type type = Type::fixed;
  double lx = 0.0;      // m, body frame
  double ly = 0.0;      // m
  double angle = 0.0;   // rad, fixed thrusters only
  double f_max = 2.0;   // N
  double f_rate = 10.0; // N/s
};

struct ThrusterLayout {
  std::vector<Thruster> thrusters;

  // Generic twin-azimuth model vessel with a bow tunnel.
  static ThrusterLayout default_layout();

  // Columns of the configuration matrix (azimuths contribute two).
  int dof_count() const;
  void validate() const;
};

// Configuration matrix B mapping per-thruster forces to [X, Y, N]. A fixed
// thruster contributes [cos b, sin b, lx sin b - ly cos b]'; an azimuth
// thruster contributes decomposed Fx and Fy columns. Throws ConfigError
// when rank(B) < 3.
Eigen::Matrix<double, 3, Eigen::Dynamic> config_matrix(const ThrusterLayout& layout);

struct AllocationResult {
  Eigen::VectorXd u;        // per-column thruster commands, N
  Vec3 tau_real;            // realized load B*u
  std::vector<double> azimuth_angle;  // rad, one per azimuth thruster
};

// Pseudo-inverse allocator with saturation and rate limiting. Carries the
// previous command between calls; the minimum-norm solution is clamped to
// force limits first, then rate limits against the previous command.
class Allocator {
 public:
  explicit Allocator(const ThrusterLayout& layout);

  const ThrusterLayout& layout() const { return layout_; }
  const Eigen::Matrix<double, 3, Eigen::Dynamic>& B() const { return B_; }
  const Eigen::VectorXd& previous() const { return u_prev_; }
  void reset(const Eigen::VectorXd& u_prev);

  AllocationResult allocate(const Vec3& tau_cmd, double dt);

  // Largest magnitude of each load component reachable within force limits.
  Vec3 capacity() const;

 private:
  ThrusterLayout layout_;
  Eigen::Matrix<double, 3, Eigen::Dynamic> B_;
  Eigen::Matrix<double, Eigen::Dynamic, 3> B_pinv_;
  Eigen::VectorXd f_max_;   // per column
  Eigen::VectorXd f_rate_;  // per column
  Eigen::VectorXd u_prev_;
};

}  // namespace dpsim
