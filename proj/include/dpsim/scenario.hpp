#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpsim/allocation.hpp"
#include "dpsim/gnc.hpp"
#include "dpsim/seastate.hpp"
#include "dpsim/sensing.hpp"
#include "dpsim/vessel.hpp"

namespace dpsim {

enum class FeedbackMode { truth, mocap };

// Canonical 4-corner stationkeeping sequence: pure surge, pure sway, yaw
// rotation, combined return, back to start. Six poses including the
// origin; consecutive poses differ in exactly one coordinate group.
std::vector<Vec3> four_corner_mission(double box, double yaw);

// Hold condition a setpoint must satisfy continuously before the mission
// advances to the next one.
struct HoldCondition {
  double pos_tol = 0.02;           // m
  double yaw_tol = deg2rad(1.0);   // rad
  double speed_tol = 0.01;         // m/s, planar
  double hold_time = 2.0;          // s
};

struct WaveConfig {
  bool enabled = false;
  SpectrumParams spectrum;
  Vec3 gain = Vec3::Zero();        // load per unit slope proxy, [N N N*m]
  std::string elevation_out;       // optional elevation CSV
};

// Which trace position/yaw errors are measured against.
enum class MetricsReference { filter, setpoint };

// Complete description of one mission run.
struct Scenario {
  std::string name = "scenario";

  VesselParams vessel;
  ThrusterLayout layout = ThrusterLayout::default_layout();

  double dt = 0.01;
  double duration = 300.0;
  int control_period = 1;
  std::uint64_t seed = 1;
  FeedbackMode feedback = FeedbackMode::truth;

  // Controller stack.
  RefFilterParams ref_filter;
  PoseGains pose_gains;
  VelGains vel_gains;  // xi_max resolved from thrust capacity when left at default
  ControlMode initial_mode = ControlMode::pose;
  std::vector<std::pair<double, ControlMode>> mode_schedule;  // (t, mode), sorted
  Vec3 velocity_setpoint = Vec3::Zero();
  Vec3 external_tau = Vec3::Zero();

  // Pose mission.
  std::vector<Vec3> setpoints;  // [x, y, psi]
  HoldCondition hold;

  // Sensing.
  MoCapModel mocap;
  double observer_time_constant = 0.2;

  WaveConfig waves;

  MetricsReference metrics_reference = MetricsReference::filter;

  std::string trajectory_out = "trajectory.csv";
  std::string metrics_out = "metrics.json";

  void validate() const;  // throws ConfigError with the offending field
};

// Vessel parameters + thruster layout from a flat key-value file.
struct VesselFile {
  VesselParams params;
  ThrusterLayout layout;
};
VesselFile load_vessel_file(const std::string& path);

// Scenario from a flat key-value file; `vessel = <path>` is resolved
// relative to the scenario file's directory.
Scenario load_scenario(const std::string& path);

// Built-in 4-corner benchmark scenario (calm water). noisy=true switches
// feedback to the mocap pipeline at the default noise model.
Scenario default_four_corner(double box, double yaw, bool noisy, std::uint64_t seed);

}  // namespace dpsim
