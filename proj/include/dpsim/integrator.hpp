#pragma once

#include <functional>
#include <vector>

#include "dpsim/vessel.hpp"

namespace dpsim {

struct SimConfig {
  double dt = 0.01;       // s
  double duration = 10.0; // s
  VesselState initial;
  int control_period = 1;  // controller updates every N integration steps
};

// Generalized load on the plant at time t in state s.
using LoadFn = std::function<Vec6(double t, const VesselState& s)>;

// One classical RK4 step of the stacked (eta, nu) state. load_fn is
// evaluated at the four stage points; angles are re-wrapped afterwards.
// Throws DivergenceError when any stage derivative is non-finite.
VesselState rk4_step(const VesselState& state, const LoadFn& load_fn, double t, double dt,
                     const ModelMatrices& mats, const Vec6& nu_c);

struct Trajectory {
  std::vector<double> t;
  std::vector<VesselState> state;
  std::vector<Vec6> tau;  // load applied over the step starting at t[k]

  std::size_t size() const { return t.size(); }
};

// Fixed-step simulation loop. The controller is evaluated at step
// boundaries (every control_period steps) and its output is held constant
// across the RK4 substages of each step. Produces exactly
// ceil(duration/dt) + 1 samples.
Trajectory run_sim(const SimConfig& config, const LoadFn& controller,
                   const ModelMatrices& mats, const Vec6& nu_c);

}  // namespace dpsim
