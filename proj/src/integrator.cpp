#include "dpsim/integrator.hpp"

#include <cmath>

namespace dpsim {

namespace {

struct Stacked {
  Vec6 eta_dot;
  Vec6 nu_dot;
};

Stacked deriv(double t, const VesselState& s, const LoadFn& load_fn, const ModelMatrices& mats,
              const Vec6& nu_c) {
  const StateDeriv d = eom_rhs(s, load_fn(t, s), mats, nu_c);
  return {d.eta_dot, d.nu_dot};
}

VesselState advance(const VesselState& s, const Stacked& k, double h) {
  VesselState out;
  out.eta = s.eta + h * k.eta_dot;
  out.nu = s.nu + h * k.nu_dot;
  return out;
}

}  // namespace

VesselState rk4_step(const VesselState& state, const LoadFn& load_fn, double t, double dt,
                     const ModelMatrices& mats, const Vec6& nu_c) {
  if (!(dt > 0.0)) throw ConfigError("rk4_step requires dt > 0");

  const Stacked k1 = deriv(t, state, load_fn, mats, nu_c);
  const Stacked k2 = deriv(t + 0.5 * dt, advance(state, k1, 0.5 * dt), load_fn, mats, nu_c);
  const Stacked k3 = deriv(t + 0.5 * dt, advance(state, k2, 0.5 * dt), load_fn, mats, nu_c);
  const Stacked k4 = deriv(t + dt, advance(state, k3, dt), load_fn, mats, nu_c);

  VesselState next;
  next.eta = state.eta +
             (dt / 6.0) * (k1.eta_dot + 2.0 * k2.eta_dot + 2.0 * k3.eta_dot + k4.eta_dot);
  next.nu =
      state.nu + (dt / 6.0) * (k1.nu_dot + 2.0 * k2.nu_dot + 2.0 * k3.nu_dot + k4.nu_dot);

  if (!next.finite()) {
    throw DivergenceError("integration diverged", t, state.eta, state.nu);
  }
  next.wrap_angles();
  return next;
}

Trajectory run_sim(const SimConfig& config, const LoadFn& controller, const ModelMatrices& mats,
                   const Vec6& nu_c) {
  if (!(config.dt > 0.0)) throw ConfigError("simulation timestep must be positive");
  if (config.duration < 0.0) throw ConfigError("simulation duration must be nonnegative");
  if (config.control_period < 1) throw ConfigError("control period must be >= 1 step");

  const auto n_steps = static_cast<std::size_t>(std::ceil(config.duration / config.dt - 1e-12));

  Trajectory traj;
  traj.t.reserve(n_steps + 1);
  traj.state.reserve(n_steps + 1);
  traj.tau.reserve(n_steps + 1);

  VesselState state = config.initial;
  Vec6 tau_held = Vec6::Zero();

  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    if (k % static_cast<std::size_t>(config.control_period) == 0) {
      tau_held = controller(t, state);
    }
    traj.t.push_back(t);
    traj.state.push_back(state);
    traj.tau.push_back(tau_held);

    if (k < n_steps) {
      // Zero-order hold: the same tau drives all four RK4 stages.
      const Vec6 tau = tau_held;
      state = rk4_step(
          state, [&tau](double, const VesselState&) { return tau; }, t, config.dt, mats, nu_c);
    }
  }
  return traj;
}

}  // namespace dpsim
