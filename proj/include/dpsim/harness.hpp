#pragma once

#include <string>
#include <vector>

#include "dpsim/scenario.hpp"

namespace dpsim {

// One logged simulation step: plant state, realized loads, reference and
// controller internals, per-thruster commands.
struct LogRow {
  double t = 0.0;
  VesselState state;
  Vec3 tau = Vec3::Zero();        // realized 3-DOF load from the allocator
  Vec3 eta_d = Vec3::Zero();      // reference-filter pose
  Vec3 eta_d_dot = Vec3::Zero();  // reference-filter velocity
  Vec3 nu_err = Vec3::Zero();     // velocity-loop tracking error (velocity mode)
  Vec3 xi = Vec3::Zero();         // integral state
  double lyapunov = 0.0;          // velocity-loop V (velocity mode)
  Eigen::VectorXd u;              // thruster commands
  std::vector<double> azimuth;    // azimuth angles
  int setpoint_index = 0;
  Vec3 setpoint = Vec3::Zero();
};

struct MetricsReport {
  double position_rmse = 0.0;   // m
  double yaw_rmse_deg = 0.0;    // deg
  double velocity_rmse = 0.0;   // m/s
  double window_start = 0.0;    // s
  double window_end = 0.0;      // s
  std::size_t sample_count = 0;
  bool mission_completed = false;
  double mission_time = 0.0;    // s, to completion (or window_end if not)
  std::vector<double> segment_settle_time;     // per mission segment
  std::vector<double> segment_position_rmse;   // per mission segment
};

struct RunResult {
  std::vector<LogRow> rows;
  MetricsReport metrics;
  std::vector<PoseMeasurement> measurements;  // mocap log (also in truth mode)
  std::vector<double> segment_start_times;    // advance instants, incl. completion
  bool mission_completed = false;
  double completion_time = 0.0;
};

// Execute the closed loop: sensing -> observer -> reference filter ->
// controllers -> multiplexer -> allocator -> plant, with the mission
// supervisor advancing setpoints on the true state. Throws ConfigError for
// invalid scenarios and DivergenceError if integration blows up.
RunResult run_scenario(const Scenario& scenario);

// RMSE metrics over [window_start, window_end] (inclusive of samples with
// window_start <= t <= window_end). Position and yaw errors are measured
// against the logged reference-filter trace by default, or against the raw
// setpoints; velocity error is the planar world-frame velocity difference.
// Throws ConfigError on an empty window.
MetricsReport compute_metrics(const std::vector<LogRow>& rows, double window_start,
                              double window_end,
                              MetricsReference reference = MetricsReference::filter);

void write_trajectory_csv(const std::string& path, const std::vector<LogRow>& rows);
void write_metrics_json(const std::string& path, const MetricsReport& metrics,
                        const Scenario& scenario);

// Convenience: run, then write trajectory, metrics and optional wave CSVs.
RunResult run_scenario_to_files(const Scenario& scenario);

}  // namespace dpsim
