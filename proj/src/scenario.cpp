#include "dpsim/scenario.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "dpsim/config.hpp"

namespace dpsim {

std::vector<Vec3> four_corner_mission(double box, double yaw) {
  if (!(box >= 0.0)) throw ConfigError("four-corner box size must be nonnegative");
  return {
      Vec3(0.0, 0.0, 0.0),
      Vec3(box, 0.0, 0.0),
      Vec3(box, -box, 0.0),
      Vec3(box, -box, -yaw),
      Vec3(0.0, 0.0, -yaw),
      Vec3(0.0, 0.0, 0.0),
  };
}

void Scenario::validate() const {
  if (!(dt > 0.0)) throw ConfigError("scenario: dt must be positive");
  if (duration < 0.0) throw ConfigError("scenario: duration must be nonnegative");
  if (control_period < 1) throw ConfigError("scenario: control_period must be >= 1");
  ref_filter.validate();
  pose_gains.validate();
  vel_gains.validate();
  layout.validate();
  mocap.validate();
  if (!(observer_time_constant > 0.0)) {
    throw ConfigError("scenario: observer time constant must be positive");
  }
  if (initial_mode == ControlMode::pose && setpoints.empty()) {
    throw ConfigError("scenario: pose missions need a non-empty setpoint sequence");
  }
  if (waves.enabled) waves.spectrum.validate();
  if (!(hold.pos_tol > 0.0) || !(hold.yaw_tol > 0.0) || !(hold.speed_tol > 0.0) ||
      !(hold.hold_time >= 0.0)) {
    throw ConfigError("scenario: hold tolerances must be positive");
  }
  for (std::size_t i = 1; i < mode_schedule.size(); ++i) {
    if (mode_schedule[i].first < mode_schedule[i - 1].first) {
      throw ConfigError("scenario: mode_schedule times must be nondecreasing");
    }
  }
  // dt * max(omega) < 0.1 is enforced per filter step; fail early here for
  // missions that actually run the filter.
  if (!setpoints.empty() && dt * control_period * ref_filter.omega.maxCoeff() >= 0.1) {
    throw ConfigError("scenario: control timestep too large for reference-filter bandwidth");
  }
}

namespace {

Vec6 to_vec6(const std::vector<double>& v) {
  Vec6 out;
  for (int i = 0; i < 6; ++i) out(i) = v[static_cast<std::size_t>(i)];
  return out;
}

Vec3 to_vec3(const std::vector<double>& v) {
  return Vec3(v[0], v[1], v[2]);
}

Mat3 gain_matrix(const KeyValueFile& kv, const std::string& key, const Mat3& fallback) {
  if (!kv.has(key)) return fallback;
  const auto vals = kv.get_vector(key, 0);
  if (vals.size() == 3) return Vec3(vals[0], vals[1], vals[2]).asDiagonal();
  if (vals.size() == 9) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = vals[static_cast<std::size_t>(3 * r + c)];
    return m;
  }
  throw ConfigError(kv.origin() + ": key '" + key + "' expects 3 (diagonal) or 9 values");
}

const std::set<std::string> kVesselKeys = {
    "length", "beam", "draft", "rho", "added_mass_factor", "damping", "gm_t", "gm_l",
    "current", "damping_time_constant", "damping_ratio"};

const std::set<std::string> kScenarioKeys = {
    "name", "vessel", "dt", "duration", "control_period", "seed", "feedback",
    "mode", "mode_schedule", "mission", "box", "yaw_deg",
    "hold.pos_tol", "hold.yaw_tol_deg", "hold.speed_tol", "hold.time",
    "reffilter.omega", "reffilter.delta",
    "pose.kp", "pose.kd", "vel.kp", "vel.ki", "vel.xi_max",
    "velocity_setpoint", "external_tau",
    "mocap.rate", "mocap.sigma_pos", "mocap.sigma_yaw_deg", "mocap.dropout",
    "observer.tau",
    "waves.enable", "waves.hs", "waves.tp", "waves.gamma", "waves.n",
    "waves.omega_min", "waves.omega_max", "waves.gain", "waves.elevation_out",
    "metrics.reference", "out.trajectory", "out.metrics"};

}  // namespace

VesselFile load_vessel_file(const std::string& path) {
  const KeyValueFile kv = KeyValueFile::load(path);
  kv.require_known(kVesselKeys, {"thruster."});

  VesselFile vf;
  VesselParams& p = vf.params;
  p.length = kv.get_double("length", p.length);
  p.beam = kv.get_double("beam", p.beam);
  p.draft = kv.get_double("draft", p.draft);
  p.rho = kv.get_double("rho", p.rho);
  if (kv.has("added_mass_factor")) {
    p.added_mass_factor = to_vec6(kv.get_vector("added_mass_factor", 6));
  }
  if (kv.has("damping")) p.damping = to_vec6(kv.get_vector("damping", 6));
  if (kv.has("gm_t")) p.gm_t = kv.get_double("gm_t");
  if (kv.has("gm_l")) p.gm_l = kv.get_double("gm_l");
  if (kv.has("current")) p.current = to_vec6(kv.get_vector("current", 6));
  p.damping_time_constant = kv.get_double("damping_time_constant", p.damping_time_constant);
  p.damping_ratio = kv.get_double("damping_ratio", p.damping_ratio);

  std::vector<std::string> thruster_keys;
  for (const auto& k : kv.keys()) {
    if (k.rfind("thruster.", 0) == 0) thruster_keys.push_back(k);
  }
  std::sort(thruster_keys.begin(), thruster_keys.end(), [](const auto& a, const auto& b) {
    return std::stoi(a.substr(9)) < std::stoi(b.substr(9));
  });

  if (!thruster_keys.empty()) {
    vf.layout.thrusters.clear();
    for (const auto& k : thruster_keys) {
      // fixed lx ly angle_deg fmax frate  |  azimuth lx ly fmax frate
      const auto& toks = kv.get_tokens(k);
      Thruster t;
      if (toks.empty()) throw ConfigError(path + ": key '" + k + "': empty thruster entry");
      const auto num = [&](std::size_t i) {
        if (i >= toks.size()) {
          throw ConfigError(path + ": key '" + k + "': too few thruster fields");
        }
        char* end = nullptr;
        const double v = std::strtod(toks[i].c_str(), &end);
        if (end == toks[i].c_str() || *end != '\0') {
          throw ConfigError(path + ": key '" + k + "': not a number: '" + toks[i] + "'");
        }
        return v;
      };
      if (toks[0] == "fixed") {
        if (toks.size() != 6) {
          throw ConfigError(path + ": key '" + k + "': fixed thruster expects lx ly angle_deg fmax frate");
        }
        t.type = Thruster::Type::fixed;
        t.lx = num(1);
        t.ly = num(2);
        t.angle = deg2rad(num(3));
        t.f_max = num(4);
        t.f_rate = num(5);
      } else if (toks[0] == "azimuth") {
        if (toks.size() != 5) {
          throw ConfigError(path + ": key '" + k + "': azimuth thruster expects lx ly fmax frate");
        }
        t.type = Thruster::Type::azimuth;
        t.lx = num(1);
        t.ly = num(2);
        t.f_max = num(3);
        t.f_rate = num(4);
      } else {
        throw ConfigError(path + ": key '" + k + "': thruster type must be 'fixed' or 'azimuth'");
      }
      vf.layout.thrusters.push_back(t);
    }
  } else {
    vf.layout = ThrusterLayout::default_layout();
  }
  return vf;
}

Scenario load_scenario(const std::string& path) {
  const KeyValueFile kv = KeyValueFile::load(path);
  kv.require_known(kScenarioKeys, {"setpoint."});

  Scenario sc;
  sc.name = kv.get_string("name", "scenario");

  if (kv.has("vessel")) {
    const auto base = std::filesystem::path(path).parent_path();
    const auto vessel_path = base / kv.get_string("vessel");
    const VesselFile vf = load_vessel_file(vessel_path.string());
    sc.vessel = vf.params;
    sc.layout = vf.layout;
  }

  sc.dt = kv.get_double("dt", sc.dt);
  sc.duration = kv.get_double("duration", sc.duration);
  sc.control_period = kv.get_int("control_period", sc.control_period);
  sc.seed = static_cast<std::uint64_t>(kv.get_double("seed", 1.0));

  const std::string fb = kv.get_string("feedback", "truth");
  if (fb == "truth") sc.feedback = FeedbackMode::truth;
  else if (fb == "mocap") sc.feedback = FeedbackMode::mocap;
  else throw ConfigError(kv.origin() + ": feedback must be 'truth' or 'mocap'");

  const std::string mode = kv.get_string("mode", "pose");
  const auto parsed_mode = control_mode_from_string(mode);
  if (!parsed_mode) throw ConfigError(kv.origin() + ": unknown control mode '" + mode + "'");
  sc.initial_mode = *parsed_mode;

  if (kv.has("mode_schedule")) {
    // whitespace-separated "t:mode" pairs, e.g. `0:pose 60:velocity`
    for (const auto& tok : kv.get_tokens("mode_schedule")) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw ConfigError(kv.origin() + ": mode_schedule entries must be 't:mode', got '" + tok + "'");
      }
      char* end = nullptr;
      const double t = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + colon) {
        throw ConfigError(kv.origin() + ": mode_schedule: bad time in '" + tok + "'");
      }
      const auto m = control_mode_from_string(tok.substr(colon + 1));
      if (!m) throw ConfigError(kv.origin() + ": mode_schedule: unknown mode in '" + tok + "'");
      sc.mode_schedule.emplace_back(t, *m);
    }
  }

  if (kv.has("reffilter.omega")) sc.ref_filter.omega = to_vec3(kv.get_vector("reffilter.omega", 3));
  if (kv.has("reffilter.delta")) sc.ref_filter.delta = to_vec3(kv.get_vector("reffilter.delta", 3));
  sc.pose_gains.kp = gain_matrix(kv, "pose.kp", sc.pose_gains.kp);
  sc.pose_gains.kd = gain_matrix(kv, "pose.kd", sc.pose_gains.kd);
  if (kv.has("vel.kp")) sc.vel_gains.kp = to_vec3(kv.get_vector("vel.kp", 3));
  if (kv.has("vel.ki")) sc.vel_gains.ki = to_vec3(kv.get_vector("vel.ki", 3));
  if (kv.has("vel.xi_max")) sc.vel_gains.xi_max = to_vec3(kv.get_vector("vel.xi_max", 3));
  if (kv.has("velocity_setpoint")) sc.velocity_setpoint = to_vec3(kv.get_vector("velocity_setpoint", 3));
  if (kv.has("external_tau")) sc.external_tau = to_vec3(kv.get_vector("external_tau", 3));

  sc.hold.pos_tol = kv.get_double("hold.pos_tol", sc.hold.pos_tol);
  if (kv.has("hold.yaw_tol_deg")) sc.hold.yaw_tol = deg2rad(kv.get_double("hold.yaw_tol_deg"));
  sc.hold.speed_tol = kv.get_double("hold.speed_tol", sc.hold.speed_tol);
  sc.hold.hold_time = kv.get_double("hold.time", sc.hold.hold_time);

  const std::string mission = kv.get_string("mission", "setpoints");
  if (mission == "four_corner") {
    const double box = kv.get_double("box", 1.0);
    const double yaw = deg2rad(kv.get_double("yaw_deg", 45.0));
    sc.setpoints = four_corner_mission(box, yaw);
  } else if (mission == "setpoints") {
    for (int i = 0;; ++i) {
      const std::string key = "setpoint." + std::to_string(i);
      if (!kv.has(key)) break;
      const auto v = kv.get_vector(key, 3);
      sc.setpoints.push_back(Vec3(v[0], v[1], deg2rad(v[2])));
    }
  } else {
    throw ConfigError(kv.origin() + ": mission must be 'four_corner' or 'setpoints'");
  }

  sc.mocap.rate = kv.get_double("mocap.rate", sc.mocap.rate);
  sc.mocap.sigma_pos = kv.get_double("mocap.sigma_pos", sc.mocap.sigma_pos);
  if (kv.has("mocap.sigma_yaw_deg")) sc.mocap.sigma_yaw = deg2rad(kv.get_double("mocap.sigma_yaw_deg"));
  sc.mocap.dropout = kv.get_double("mocap.dropout", sc.mocap.dropout);
  sc.observer_time_constant = kv.get_double("observer.tau", sc.observer_time_constant);

  sc.waves.enabled = kv.get_bool("waves.enable", false);
  sc.waves.spectrum.hs = kv.get_double("waves.hs", sc.waves.spectrum.hs);
  sc.waves.spectrum.tp = kv.get_double("waves.tp", sc.waves.spectrum.tp);
  sc.waves.spectrum.gamma = kv.get_double("waves.gamma", sc.waves.spectrum.gamma);
  sc.waves.spectrum.n = kv.get_int("waves.n", sc.waves.spectrum.n);
  sc.waves.spectrum.omega_min = kv.get_double("waves.omega_min", sc.waves.spectrum.omega_min);
  sc.waves.spectrum.omega_max = kv.get_double("waves.omega_max", sc.waves.spectrum.omega_max);
  if (kv.has("waves.gain")) sc.waves.gain = to_vec3(kv.get_vector("waves.gain", 3));
  sc.waves.elevation_out = kv.get_string("waves.elevation_out", "");

  const std::string mref = kv.get_string("metrics.reference", "filter");
  if (mref == "filter") sc.metrics_reference = MetricsReference::filter;
  else if (mref == "setpoint") sc.metrics_reference = MetricsReference::setpoint;
  else throw ConfigError(kv.origin() + ": metrics.reference must be 'filter' or 'setpoint'");

  sc.trajectory_out = kv.get_string("out.trajectory", sc.trajectory_out);
  sc.metrics_out = kv.get_string("out.metrics", sc.metrics_out);

  sc.validate();
  return sc;
}

Scenario default_four_corner(double box, double yaw, bool noisy, std::uint64_t seed) {
  Scenario sc;
  sc.name = noisy ? "four_corner_mocap" : "four_corner";
  sc.setpoints = four_corner_mission(box, yaw);
  sc.seed = seed;
  sc.feedback = noisy ? FeedbackMode::mocap : FeedbackMode::truth;
  if (noisy) {
    sc.mocap.sigma_pos = 0.01 / 3.0;
    sc.mocap.sigma_yaw = deg2rad(0.5 / 3.0);
  }
  sc.validate();
  return sc;
}

}  // namespace dpsim
