#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dpsim {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat9 = Eigen::Matrix<double, 9, 9>;

inline constexpr double kGravity = 9.81;  // m/s^2
inline constexpr double kPi = 3.14159265358979323846;

// Wrap an angle to (-pi, pi].
inline double wrap_pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a > kPi) a -= 2.0 * kPi;
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Planar rotation about the z axis acting on [x, y, heading] triples.
inline Mat3 rot_z(double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  Mat3 r;
  r << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  return r;
}

// Invalid parameters, scenario schema violations, inconsistent setup.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Euler-angle kinematics approached the pitch singularity.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Integration produced a non-finite state; carries the failure point.
struct DivergenceError : std::runtime_error {
  double t;
  Vec6 eta;
  Vec6 nu;
  DivergenceError(const std::string& what, double t_, const Vec6& eta_, const Vec6& nu_)
      : std::runtime_error(what), t(t_), eta(eta_), nu(nu_) {}
};

// Deterministic stream splitter for deriving per-subsystem seeds.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dpsim
