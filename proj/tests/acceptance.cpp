// Acceptance suite: exercises every top-level requirement end to end and
// prints one PASS/FAIL line per criterion. Exit code is the failure count.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dpsim/harness.hpp"
#include "dpsim/integrator.hpp"

using namespace dpsim;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// --- criterion 1: 4-corner benchmark, calm water, ground-truth feedback ---

Outcome c1_four_corner(RunResult& out_run, Scenario& out_scenario) {
  out_scenario = default_four_corner(1.0, deg2rad(45.0), false, 1);
  out_run = run_scenario(out_scenario);
  const MetricsReport& m = out_run.metrics;

  Outcome o;
  o.pass = out_run.mission_completed && out_run.completion_time <= 300.0 &&
           m.position_rmse <= 0.1 && m.yaw_rmse_deg <= 1.0 && m.velocity_rmse <= 0.05;
  o.detail = fmt("pos %.4f m (<=0.1), yaw %.4f deg (<=1.0), vel %.4f m/s (<=0.05), done at %.1f s",
                 m.position_rmse, m.yaw_rmse_deg, m.velocity_rmse, out_run.completion_time);
  return o;
}

// --- criterion 2: RK4 convergence order on the damped-surge closed form ---

Outcome c2_rk4_order() {
  VesselParams p;
  p.length = p.beam = p.draft = 1.0;
  p.rho = 1000.0;
  p.added_mass_factor.setZero();
  Vec6 d = Vec6::Zero();
  d(0) = 2000.0;  // lambda = 2 /s
  p.damping = d;
  ModelMatrices mm = build_matrices(p);
  mm.G.setZero();

  const double u0 = 0.5, lambda = 2.0;
  const double exact = u0 * std::exp(-lambda);
  std::vector<double> lh, le;
  for (const double h : {0.04, 0.02, 0.01, 0.005}) {
    SimConfig cfg;
    cfg.dt = h;
    cfg.duration = 1.0;
    cfg.initial.nu(0) = u0;
    const Trajectory traj = run_sim(
        cfg, [](double, const VesselState&) { return Vec6::Zero(); }, mm, Vec6::Zero());
    lh.push_back(std::log(h));
    le.push_back(std::log(std::abs(traj.state.back().nu(0) - exact)));
  }
  const double n = static_cast<double>(lh.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lh.size(); ++i) {
    sx += lh[i];
    sy += le[i];
    sxx += lh[i] * lh[i];
    sxy += lh[i] * le[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  Outcome o;
  o.pass = slope >= 3.9;
  o.detail = fmt("observed order %.3f (>= 3.9)", slope);
  return o;
}

// --- criterion 3: Lyapunov decrease of the velocity loop ---

Outcome c3_lyapunov() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> um(1.0, 60.0), ud(0.1, 12.0), ukp(0.5, 3.0),
      uki(0.1, 1.0), unu(-0.5, 0.5);

  double worst = -1e300;
  for (int draw = 0; draw < 10; ++draw) {
    const Mat3 M = Vec3(um(rng), um(rng), um(rng)).asDiagonal();
    const Mat3 D = Vec3(ud(rng), ud(rng), ud(rng)).asDiagonal();
    VelGains g;
    g.kp = Vec3(ukp(rng), ukp(rng), ukp(rng));
    g.ki = Vec3(uki(rng), uki(rng), uki(rng));
    g.xi_max = Vec3::Constant(1e12);
    const Vec3 nu_d(unu(rng), unu(rng), unu(rng));

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
    y.head<3>() = Vec3(unu(rng), unu(rng), unu(rng)) * 2.0;
    const double dt = 1e-3;
    double v_prev = velocity_lyapunov(y.head<3>() - nu_d, y.tail<3>(), g, M);
    for (int k = 0; k < 20000; ++k) {
      const State k1 = deriv(y);
      const State k2 = deriv(y + 0.5 * dt * k1);
      const State k3 = deriv(y + 0.5 * dt * k2);
      const State k4 = deriv(y + dt * k3);
      y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const double v = velocity_lyapunov(y.head<3>() - nu_d, y.tail<3>(), g, M);
      worst = std::max(worst, v - v_prev);
      v_prev = v;
    }
  }

  Outcome o;
  o.pass = worst <= 1e-9;
  o.detail = fmt("max per-step V increase %.3g (<= 1e-9) over 10 draws", worst);
  return o;
}

// --- criterion 4: reference-filter equilibrium and pole locations ---

Outcome c4_filter() {
  RefFilterParams p;
  const Vec3 eta_r(0.7, -1.1, 0.3);
  Vec9 x = Vec9::Zero();
  x.segment<3>(0) = eta_r;
  const double residual =
      (ref_filter_A(p) * x + ref_filter_B(p) * eta_r).cwiseAbs().maxCoeff();

  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> uo(0.05, 4.0), ud(0.05, 3.0);
  double max_real = -1e300;
  for (int k = 0; k < 100; ++k) {
    RefFilterParams q;
    for (int i = 0; i < 3; ++i) {
      q.omega(i) = uo(rng);
      q.delta(i) = ud(rng);
    }
    const Eigen::EigenSolver<Mat9> es(ref_filter_A(q));
    max_real = std::max(max_real, es.eigenvalues().real().maxCoeff());
  }

  Outcome o;
  o.pass = residual <= 1e-12 && max_real < 0.0;
  o.detail = fmt("equilibrium residual %.3g (<= 1e-12), max pole real part %.3g (< 0)", residual,
                 max_real);
  return o;
}

// --- criterion 5: spectral fidelity ---

Outcome c5_spectra() {
  Outcome o;

  // JONSWAP at gamma = 1 reduces to Pierson-Moskowitz.
  double max_rel = 0.0;
  {
    SpectrumParams pj, pm;
    pj.gamma = 1.0;
    pm.gamma = 1.0;
    const double wp = pj.omega_p();
    for (int i = 0; i < 5000; ++i) {
      const double w = 0.1 * wp + 8.0 * wp * i / 4999.0;
      const double a = spectrum_density(pj, w);
      const double wpb = 2.0 * kPi / pj.tp;
      const double base = 0.3125 * pj.hs * pj.hs * std::pow(wpb, 4.0) * std::pow(w, -5.0) *
                          std::exp(-1.25 * std::pow(wpb / w, 4.0));
      if (base > 0.0) max_rel = std::max(max_rel, std::abs(a - base) / base);
    }
  }

  // Hs recovery across the 9-point grid.
  double worst_hs_err = 0.0;
  for (const double hs : {0.02, 0.05, 0.1}) {
    for (const double tp : {1.0, 1.5, 2.0}) {
      SpectrumParams p;
      p.hs = hs;
      p.tp = tp;
      const double wp = p.omega_p();
      const double m0 = spectral_moment0_serial(p, 0.2 * wp, 6.0 * wp, 2000);
      worst_hs_err = std::max(worst_hs_err, std::abs(4.0 * std::sqrt(m0) - hs) / hs);
    }
  }

  // Realized series variance against the zeroth moment.
  SpectrumParams p;
  const WaveRealization real = realize(p, 21);
  const double dt = 0.05;
  const auto n = static_cast<std::size_t>(1800.0 / dt);
  const auto series = elevation_series(real, 0.0, dt, n);
  double mean = 0.0;
  for (const double e : series) mean += e;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const double e : series) var += (e - mean) * (e - mean);
  var /= static_cast<double>(n);
  const double wp = p.omega_p();
  const double m0 = spectral_moment0_serial(p, 0.2 * wp, 6.0 * wp, 2000);
  const double var_err = std::abs(var - m0) / m0;

  o.pass = max_rel <= 1e-12 && worst_hs_err <= 0.02 && var_err <= 0.10;
  o.detail = fmt("PM reduction rel err %.2g (<=1e-12), Hs err %.3f%% (<=2%%), var err %.2f%% (<=10%%)",
                 max_rel, 100.0 * worst_hs_err, 100.0 * var_err);
  return o;
}

// --- criterion 6: heave-restoring natural frequency ---

Outcome c6_heave() {
  VesselParams p;
  p.damping = Vec6::Zero();
  const ModelMatrices mm = build_matrices(p);
  const double omega_n = std::sqrt(mm.G(2) / mm.M()(2));

  SimConfig cfg;
  cfg.dt = 0.002;
  cfg.duration = 10.0;
  cfg.initial.eta(2) = 0.01;
  const Trajectory traj = run_sim(
      cfg, [](double, const VesselState&) { return Vec6::Zero(); }, mm, Vec6::Zero());

  std::vector<double> crossings;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double a = traj.state[k - 1].eta(2), b = traj.state[k].eta(2);
    if (a <= 0.0 && b > 0.0) crossings.push_back(traj.t[k - 1] + cfg.dt * (-a) / (b - a));
  }
  Outcome o;
  if (crossings.size() < 3) {
    o.pass = false;
    o.detail = "too few oscillation cycles observed";
    return o;
  }
  const double period =
      (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  const double omega_meas = 2.0 * kPi / period;
  o.pass = std::abs(omega_meas - omega_n) / omega_n <= 0.01;
  o.detail = fmt("measured %.4f rad/s vs analytic %.4f rad/s (err %.3f%%)", omega_meas, omega_n,
                 100.0 * std::abs(omega_meas - omega_n) / omega_n);
  return o;
}

// --- criterion 7: allocation optimality and limit compliance ---

Outcome c7_allocation(const RunResult& fc_run, const Scenario& fc_scenario) {
  Outcome o;

  // Minimum-norm dominance over null-space perturbations.
  Allocator alloc(ThrusterLayout::default_layout());
  const auto B = alloc.B();
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  const Eigen::MatrixXd N = lu.kernel();
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> small(-0.3, 0.3);
  bool min_norm_ok = true;
  for (int k = 0; k < 1000 && min_norm_ok; ++k) {
    Allocator fresh(ThrusterLayout::default_layout());
    const Vec3 tau(small(rng), small(rng), 0.2 * small(rng));
    const AllocationResult res = fresh.allocate(tau, 100.0);
    Eigen::VectorXd z(N.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = gauss(rng);
    min_norm_ok = res.u.norm() <= (res.u + N * z).norm() + 1e-12;
  }

  // Saturation and rate limits on every logged step of the 4-corner run.
  const double dt_ctrl = fc_scenario.dt * fc_scenario.control_period;
  double worst_sat = 0.0, worst_rate = 0.0;
  for (std::size_t k = 0; k < fc_run.rows.size(); ++k) {
    const auto& u = fc_run.rows[k].u;
    int col = 0;
    for (const auto& t : fc_scenario.layout.thrusters) {
      const int reps = t.type == Thruster::Type::azimuth ? 2 : 1;
      for (int r = 0; r < reps; ++r, ++col) {
        worst_sat = std::max(worst_sat, std::abs(u(col)) - t.f_max);
        if (k > 0) {
          const double du = std::abs(u(col) - fc_run.rows[k - 1].u(col));
          worst_rate = std::max(worst_rate, du - t.f_rate * dt_ctrl);
        }
      }
    }
  }

  o.pass = min_norm_ok && worst_sat <= 1e-12 && worst_rate <= 1e-12;
  o.detail = fmt("min-norm ok: %s; max sat excess %.2g, max rate excess %.2g (<= 1e-12)",
                 min_norm_ok ? "yes" : "NO", worst_sat, worst_rate);
  return o;
}

// --- criterion 8: byte-identical reruns ---

Outcome c8_determinism() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "dpsim_acceptance";
  fs::create_directories(dir);

  Scenario sc = default_four_corner(1.0, deg2rad(45.0), true, 7);
  sc.duration = 120.0;

  sc.trajectory_out = (dir / "r1.csv").string();
  sc.metrics_out = (dir / "r1.json").string();
  run_scenario_to_files(sc);

  sc.trajectory_out = (dir / "r2.csv").string();
  sc.metrics_out = (dir / "r2.json").string();
  run_scenario_to_files(sc);

  const bool csv_same = slurp((dir / "r1.csv").string()) == slurp((dir / "r2.csv").string());
  const bool json_same = slurp((dir / "r1.json").string()) == slurp((dir / "r2.json").string());
  fs::remove_all(dir);

  Outcome o;
  o.pass = csv_same && json_same;
  o.detail = fmt("trajectory bytes identical: %s, metrics bytes identical: %s",
                 csv_same ? "yes" : "NO", json_same ? "yes" : "NO");
  return o;
}

// --- criterion 9: robustness to tracking-spec measurement noise ---

Outcome c9_noisy() {
  const Scenario sc = default_four_corner(1.0, deg2rad(45.0), true, 1);
  const RunResult run = run_scenario(sc);
  Outcome o;
  o.pass = run.mission_completed && run.metrics.position_rmse <= 0.15;
  o.detail = fmt("pos RMSE %.4f m (<= 0.15), mission %s at %.1f s", run.metrics.position_rmse,
                 run.mission_completed ? "completed" : "NOT completed", run.completion_time);
  return o;
}

struct Entry {
  int id;
  const char* label;
  double budget_s;  // wall-clock limit, 0 = none
  Outcome outcome;
  double elapsed_s = 0.0;
};

}  // namespace

int main() {
  RunResult fc_run;
  Scenario fc_scenario;

  std::vector<Entry> entries;
  const auto timed = [&entries](int id, const char* label, double budget,
                                const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    Entry entry{id, label, budget, o,
                std::chrono::duration<double>(Clock::now() - t0).count()};
    if (budget > 0.0 && entry.elapsed_s > budget) {
      entry.outcome.pass = false;
      entry.outcome.detail += fmt("; runtime %.1fs exceeded %.0fs budget", entry.elapsed_s, budget);
    }
    entries.push_back(entry);
  };

  timed(1, "4-corner benchmark RMSE (calm water, ground-truth feedback)", 60.0,
        [&] { return c1_four_corner(fc_run, fc_scenario); });
  timed(2, "RK4 empirical convergence order", 5.0, c2_rk4_order);
  timed(3, "velocity-loop Lyapunov decrease", 10.0, c3_lyapunov);
  timed(4, "reference-filter equilibrium and stability", 0.0, c4_filter);
  timed(5, "wave-spectrum fidelity", 0.0, c5_spectra);
  timed(6, "heave restoring natural frequency", 0.0, c6_heave);
  timed(7, "allocation minimum-norm and limit compliance", 0.0,
        [&] { return c7_allocation(fc_run, fc_scenario); });
  timed(8, "byte-identical reruns", 0.0, c8_determinism);
  timed(9, "mission robustness under measurement noise", 0.0, c9_noisy);

  int failures = 0;
  for (const auto& e : entries) {
    if (!e.outcome.pass) ++failures;
    std::printf("[%s] criterion %d: %s — %s (%.2fs)\n", e.outcome.pass ? "PASS" : "FAIL", e.id,
                e.label, e.outcome.detail.c_str(), e.elapsed_s);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures,
              entries.size());
  return failures;
}
