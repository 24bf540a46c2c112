#pragma once

#include <cstdint>
#include <vector>

#include "dpsim/types.hpp"

namespace dpsim {

// Single-peaked wave spectrum. gamma = 1 reduces JONSWAP to
// Pierson-Moskowitz. The frequency grid bounds the harmonic realization.
struct SpectrumParams {
  double hs = 0.05;     // significant wave height, m
  double tp = 1.5;      // peak period, s
  double gamma = 3.3;   // peak-enhancement factor, >= 1
  double omega_min = 0.0;  // rad/s; derived from tp when <= 0
  double omega_max = 0.0;  // rad/s; derived from tp when <= 0
  int n = 200;          // grid points

  double omega_p() const { return 2.0 * kPi / tp; }

  // Fill unset grid bounds with [0.2, 5] * omega_p.
  SpectrumParams resolved() const;
  void validate() const;  // throws ConfigError
};

// Spectral density S(omega), m^2*s. Pierson-Moskowitz base with JONSWAP
// peak enhancement; A_gamma = 1 - 0.287 ln(gamma) keeps Hs across gamma.
// Throws std::domain_error for omega <= 0.
double spectrum_density(const SpectrumParams& params, double omega);

// Harmonic-superposition sea surface: amplitudes from the spectrum on a
// uniform grid, phases from the seeded generator.
struct WaveRealization {
  std::vector<double> amplitude;  // m
  std::vector<double> frequency;  // rad/s
  std::vector<double> phase;      // rad, in [0, 2pi)
  std::uint64_t seed = 0;
};

WaveRealization realize(const SpectrumParams& params, std::uint64_t seed);

// Surface elevation sum(a_i cos(w_i t + phi_i)) at one instant.
double elevation(const WaveRealization& real, double t);

// Elevation sampled on a uniform time grid. The default entry point runs
// the sample loop under OpenMP; the _serial variant is the reference kept
// for testing and must match bit-for-bit.
std::vector<double> elevation_series(const WaveRealization& real, double t0, double dt,
                                     std::size_t count);
std::vector<double> elevation_series_serial(const WaveRealization& real, double t0, double dt,
                                            std::size_t count);

// Zeroth spectral moment by trapezoidal quadrature on [omega_lo, omega_hi].
// OpenMP reduction; the _serial variant is the reference (summation order
// differs, agreement is to relative tolerance rather than bitwise).
double spectral_moment0(const SpectrumParams& params, double omega_lo, double omega_hi, int n);
double spectral_moment0_serial(const SpectrumParams& params, double omega_lo, double omega_hi,
                               int n);

// First-order disturbance load on surge/sway/yaw: per-axis gain times a
// wave-slope proxy s(t) = sum(a_i k_i sin(w_i t + phi_i)) with deep-water
// k_i = w_i^2 / g. A stand-in for transfer-function based excitation.
Vec3 wave_load(const WaveRealization& real, const Vec3& gain, double t);

}  // namespace dpsim
