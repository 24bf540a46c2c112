#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpsim/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitTimeout = 3;

void print_metrics(const dpsim::MetricsReport& m) {
  std::printf("position RMSE  %.4f m\n", m.position_rmse);
  std::printf("yaw RMSE       %.4f deg\n", m.yaw_rmse_deg);
  std::printf("velocity RMSE  %.4f m/s\n", m.velocity_rmse);
  std::printf("mission        %s (t = %.2f s)\n", m.mission_completed ? "completed" : "NOT completed",
              m.mission_time);
}

int execute(const dpsim::Scenario& sc) {
  const dpsim::RunResult res = dpsim::run_scenario_to_files(sc);
  std::printf("wrote %s and %s\n", sc.trajectory_out.c_str(), sc.metrics_out.c_str());
  print_metrics(res.metrics);
  if (!sc.setpoints.empty() && !res.mission_completed) return kExitTimeout;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vessel simulation and control mission runner"};
  app.require_subcommand(1);

  // run <scenario-file>
  std::string scenario_path;
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "scenario config file")->required();
  run->add_option("--seed", seed_override, "override the scenario seed")
      ->each([&has_seed](const std::string&) { has_seed = true; });

  // four-corner [--box L] [--yaw deg] [--noise]
  double box = 1.0, yaw_deg = 45.0;
  bool noise = false;
  std::uint64_t fc_seed = 1;
  std::string out_dir = ".";
  auto* fc = app.add_subcommand("four-corner", "Run the built-in 4-corner benchmark");
  fc->add_option("--box", box, "box size, m");
  fc->add_option("--yaw", yaw_deg, "yaw step, deg");
  fc->add_flag("--noise", noise, "use the noisy motion-capture feedback");
  fc->add_option("--seed", fc_seed, "RNG seed");
  fc->add_option("--out-dir", out_dir, "output directory");

  // spectrum --hs --tp --gamma --out
  double hs = 0.05, tp = 1.5, gamma = 3.3;
  int sp_n = 400;
  std::string sp_out, elev_out;
  double elev_duration = 60.0, elev_rate = 100.0;
  std::uint64_t sp_seed = 1;
  auto* sp = app.add_subcommand("spectrum", "Tabulate a wave spectrum, optionally a realization");
  sp->add_option("--hs", hs, "significant wave height, m");
  sp->add_option("--tp", tp, "peak period, s");
  sp->add_option("--gamma", gamma, "peak-enhancement factor");
  sp->add_option("--n", sp_n, "table points");
  sp->add_option("--out", sp_out, "spectrum CSV (omega,S)")->required();
  sp->add_option("--elevation", elev_out, "also write an elevation series CSV (t,eta_w)");
  sp->add_option("--duration", elev_duration, "elevation series length, s");
  sp->add_option("--rate", elev_rate, "elevation sample rate, Hz");
  sp->add_option("--seed", sp_seed, "RNG seed for the realization");

  // validate <scenario-file>
  std::string validate_path;
  auto* val = app.add_subcommand("validate", "Check a scenario file against the schema");
  val->add_option("scenario", validate_path, "scenario config file")->required();

  // replay <measurements.csv> --out estimates.csv
  std::string replay_in, replay_out;
  double replay_tau = 0.2;
  auto* rp = app.add_subcommand("replay", "Run the observer over a recorded measurement CSV");
  rp->add_option("measurements", replay_in, "measurement CSV (t,x_m,y_m,psi_m,valid)")->required();
  rp->add_option("--out", replay_out, "estimate CSV")->required();
  rp->add_option("--tau", replay_tau, "velocity filter time constant, s");

  // batch <scenario files...>
  std::vector<std::string> batch_paths;
  auto* batch = app.add_subcommand("batch", "Run several scenarios (parallel, isolated outputs)");
  batch->add_option("scenarios", batch_paths, "scenario config files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      dpsim::Scenario sc = dpsim::load_scenario(scenario_path);
      if (has_seed) sc.seed = seed_override;
      return execute(sc);
    }

    if (*fc) {
      dpsim::Scenario sc =
          dpsim::default_four_corner(box, dpsim::deg2rad(yaw_deg), noise, fc_seed);
      const auto dir = std::filesystem::path(out_dir);
      std::filesystem::create_directories(dir);
      sc.trajectory_out = (dir / (sc.name + "_trajectory.csv")).string();
      sc.metrics_out = (dir / (sc.name + "_metrics.json")).string();
      return execute(sc);
    }

    if (*sp) {
      dpsim::SpectrumParams params;
      params.hs = hs;
      params.tp = tp;
      params.gamma = gamma;
      params.validate();
      const dpsim::SpectrumParams resolved = params.resolved();

      std::ofstream out(sp_out);
      if (!out) throw dpsim::ConfigError("cannot open output file: " + sp_out);
      out << "omega,S\n";
      char buf[96];
      for (int i = 0; i < sp_n; ++i) {
        const double w = resolved.omega_min +
                         (resolved.omega_max - resolved.omega_min) * i / double(sp_n - 1);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", w, dpsim::spectrum_density(params, w));
        out << buf;
      }
      const double m0 =
          dpsim::spectral_moment0(params, 0.2 * params.omega_p(), 6.0 * params.omega_p(), 2000);
      std::printf("m0 = %.6g m^2, 4*sqrt(m0) = %.6g m (input Hs = %g m)\n", m0, 4.0 * std::sqrt(m0),
                  hs);

      if (!elev_out.empty()) {
        const auto real = dpsim::realize(params, sp_seed);
        const auto n = static_cast<std::size_t>(elev_duration * elev_rate) + 1;
        const auto series = dpsim::elevation_series(real, 0.0, 1.0 / elev_rate, n);
        std::ofstream eout(elev_out);
        if (!eout) throw dpsim::ConfigError("cannot open output file: " + elev_out);
        eout << "t,eta_w\n";
        for (std::size_t k = 0; k < n; ++k) {
          std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", k / elev_rate, series[k]);
          eout << buf;
        }
      }
      return kExitOk;
    }

    if (*val) {
      dpsim::load_scenario(validate_path);
      std::printf("%s: OK\n", validate_path.c_str());
      return kExitOk;
    }

    if (*rp) {
      const auto stream = dpsim::read_measurement_csv(replay_in);
      const auto estimates = dpsim::replay_observer(stream, replay_tau);
      std::ofstream out(replay_out);
      if (!out) throw dpsim::ConfigError("cannot open output file: " + replay_out);
      out << "t,x_hat,y_hat,psi_hat,vx_hat,vy_hat,r_hat\n";
      char buf[200];
      for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (!estimates[i]) continue;
        const auto& e = *estimates[i];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      stream[i].t, e.eta(0), e.eta(1), e.eta(2), e.eta_dot(0), e.eta_dot(1),
                      e.eta_dot(2));
        out << buf;
      }
      return kExitOk;
    }

    if (*batch) {
      std::vector<dpsim::Scenario> scenarios;
      for (const auto& p : batch_paths) scenarios.push_back(dpsim::load_scenario(p));
      std::vector<int> codes(scenarios.size(), kExitOk);
      const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
          const auto res = dpsim::run_scenario_to_files(scenarios[static_cast<std::size_t>(i)]);
          if (!scenarios[static_cast<std::size_t>(i)].setpoints.empty() && !res.mission_completed) {
            codes[static_cast<std::size_t>(i)] = kExitTimeout;
          }
        } catch (const dpsim::DivergenceError&) {
          codes[static_cast<std::size_t>(i)] = kExitDiverged;
        } catch (const std::exception&) {
          codes[static_cast<std::size_t>(i)] = kExitConfig;
        }
      }
      int worst = kExitOk;
      for (std::size_t i = 0; i < scenarios.size(); ++i) {
        std::printf("%s: %s\n", batch_paths[i].c_str(), codes[i] == kExitOk ? "ok" : "FAILED");
        worst = std::max(worst, codes[i]);
      }
      return worst;
    }
  } catch (const dpsim::DivergenceError& e) {
    std::fprintf(stderr, "divergence at t = %g s: %s\n", e.t, e.what());
    return kExitDiverged;
  } catch (const dpsim::SingularityError& e) {
    std::fprintf(stderr, "divergence: %s\n", e.what());
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
