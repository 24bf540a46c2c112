#include "dpsim/sensing.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace dpsim {

void MoCapModel::validate() const {
  if (sigma_pos < 0.0 || sigma_yaw < 0.0) throw ConfigError("mocap noise must be nonnegative");
  if (!(rate > 0.0)) throw ConfigError("mocap rate must be positive");
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("mocap dropout must be in [0, 1)");
}

MoCapSensor::MoCapSensor(const MoCapModel& model)
    : model_(model), rng_(model.seed), gauss_(0.0, 1.0), unit_(0.0, 1.0) {
  model_.validate();
}

std::optional<PoseMeasurement> MoCapSensor::sample(const VesselState& truth, double t) {
  const double period = 1.0 / model_.rate;
  const double due = static_cast<double>(next_index_) * period;
  if (t + 1e-9 < due) return std::nullopt;
  ++next_index_;

  PoseMeasurement m;
  m.t = t;

  if (model_.dropout > 0.0 && unit_(rng_) < model_.dropout) {
    m.valid = false;
    m.x = m.y = m.psi = std::numeric_limits<double>::quiet_NaN();
    return m;
  }

  m.x = truth.eta(0);
  m.y = truth.eta(1);
  m.psi = truth.eta(5);
  if (model_.sigma_pos > 0.0) {
    m.x += model_.sigma_pos * gauss_(rng_);
    m.y += model_.sigma_pos * gauss_(rng_);
  }
  if (model_.sigma_yaw > 0.0) {
    m.psi = wrap_pi(m.psi + model_.sigma_yaw * gauss_(rng_));
  }
  return m;
}

Observer::Observer(double time_constant) : tau_(time_constant) {
  if (!(tau_ > 0.0)) throw ConfigError("observer time constant must be positive");
}

void Observer::update(const PoseMeasurement& m) {
  if (!m.valid) return;

  const Vec3 pose(m.x, m.y, m.psi);
  if (!ready_) {
    pose_ = pose;
    vel_.setZero();
    t_last_ = m.t;
    ready_ = true;
    return;
  }

  const double dt = m.t - t_last_;
  if (dt > 0.0) {
    Vec3 raw = (pose - pose_) / dt;
    raw(2) = wrap_pi(pose(2) - pose_(2)) / dt;
    const double alpha = dt / (tau_ + dt);
    vel_ += alpha * (raw - vel_);
  }
  pose_ = pose;
  t_last_ = m.t;
}

std::optional<PoseEstimate> Observer::estimate() const {
  if (!ready_) return std::nullopt;
  return PoseEstimate{pose_, vel_};
}

void Observer::reset() {
  ready_ = false;
  pose_.setZero();
  vel_.setZero();
  t_last_ = 0.0;
}

void write_measurement_csv(const std::string& path, const std::vector<PoseMeasurement>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open measurement file for writing: " + path);
  out << "t,x_m,y_m,psi_m,valid\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", r.t, r.x, r.y, r.psi,
                  r.valid ? 1 : 0);
    out << buf;
  }
}

std::vector<PoseMeasurement> read_measurement_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open measurement file: " + path);

  std::vector<PoseMeasurement> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    PoseMeasurement m;
    double* targets[4] = {&m.t, &m.x, &m.y, &m.psi};
    for (double* target : targets) {
      if (!std::getline(ss, field, ',')) throw ConfigError("malformed measurement row: " + line);
      *target = std::strtod(field.c_str(), nullptr);
    }
    if (!std::getline(ss, field, ',')) throw ConfigError("malformed measurement row: " + line);
    m.valid = field.find('1') != std::string::npos;
    rows.push_back(m);
  }
  return rows;
}

std::vector<std::optional<PoseEstimate>> replay_observer(
    const std::vector<PoseMeasurement>& stream, double time_constant) {
  Observer obs(time_constant);
  std::vector<std::optional<PoseEstimate>> out;
  out.reserve(stream.size());
  for (const auto& m : stream) {
    obs.update(m);
    out.push_back(obs.estimate());
  }
  return out;
}

}  // namespace dpsim
