#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dpsim/vessel.hpp"

namespace dpsim {

// Optical motion-capture measurement model: planar pose samples at a fixed
// rate with per-axis Gaussian noise and Bernoulli dropouts.
struct MoCapModel {
  double sigma_pos = 0.0033;           // m; 3-sigma ~ 1 cm
  double sigma_yaw = deg2rad(0.17);    // rad; 3-sigma ~ 0.5 deg
  double rate = 100.0;                 // Hz
  double dropout = 0.0;                // probability per sample
  std::uint64_t seed = 0;

  void validate() const;
};

struct PoseMeasurement {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double psi = 0.0;
  bool valid = true;  // false marks a dropout slot
};

// Stateful sampler: emits a measurement whenever simulation time crosses the
// next sample instant. Dropouts come back with valid=false so the log keeps
// its time base. No RNG draws happen when noise and dropout are zero.
class MoCapSensor {
 public:
  explicit MoCapSensor(const MoCapModel& model);

  // Returns a record when t has reached the next sample instant.
  std::optional<PoseMeasurement> sample(const VesselState& truth, double t);

 private:
  MoCapModel model_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_;
  std::uniform_real_distribution<double> unit_;
  std::uint64_t next_index_ = 0;
};

struct PoseEstimate {
  Vec3 eta;      // [x, y, psi]
  Vec3 eta_dot;  // world-frame pose rates
};

// Held-pose observer with low-pass filtered finite-difference velocity.
// Stands in for a full state estimator: the pose estimate is the latest
// valid measurement, the velocity estimate is a first-order filtered,
// wrap-aware difference of consecutive poses.
class Observer {
 public:
  explicit Observer(double time_constant = 0.2);

  void update(const PoseMeasurement& m);  // dropout records are ignored
  std::optional<PoseEstimate> estimate() const;
  void reset();

 private:
  double tau_;
  bool ready_ = false;
  double t_last_ = 0.0;
  Vec3 pose_ = Vec3::Zero();
  Vec3 vel_ = Vec3::Zero();
};

// Measurement log I/O (columns t, x_m, y_m, psi_m, valid). Invalid rows
// carry nan fields. Round-trips through read_measurement_csv.
void write_measurement_csv(const std::string& path, const std::vector<PoseMeasurement>& rows);
std::vector<PoseMeasurement> read_measurement_csv(const std::string& path);

// Run the observer over a recorded stream; one estimate per valid-or-not
// input record (held through dropouts, empty until the first valid sample).
std::vector<std::optional<PoseEstimate>> replay_observer(
    const std::vector<PoseMeasurement>& stream, double time_constant);

}  // namespace dpsim
