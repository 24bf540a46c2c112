#include "dpsim/seastate.hpp"

#include <cmath>
#include <random>

namespace dpsim {

SpectrumParams SpectrumParams::resolved() const {
  SpectrumParams p = *this;
  if (p.omega_min <= 0.0) p.omega_min = 0.2 * omega_p();
  if (p.omega_max <= 0.0) p.omega_max = 5.0 * omega_p();
  return p;
}

void SpectrumParams::validate() const {
  if (!(hs > 0.0)) throw ConfigError("significant wave height must be positive");
  if (!(tp > 0.0)) throw ConfigError("peak period must be positive");
  if (!(gamma >= 1.0)) throw ConfigError("peakedness gamma must be >= 1");
  const SpectrumParams p = resolved();
  if (!(p.omega_min > 0.0) || !(p.omega_max > p.omega_min)) {
    throw ConfigError("frequency grid must satisfy 0 < omega_min < omega_max");
  }
  if (n < 2) throw ConfigError("frequency grid needs at least 2 points");
}

double spectrum_density(const SpectrumParams& params, double omega) {
  if (!(omega > 0.0)) throw std::domain_error("spectrum_density requires omega > 0");

  const double wp = params.omega_p();
  const double r = wp / omega;
  const double r4 = r * r * r * r;
  const double pm =
      (5.0 / 16.0) * params.hs * params.hs * wp * wp * wp * wp * std::pow(omega, -5.0) *
      std::exp(-1.25 * r4);
  if (params.gamma == 1.0) return pm;

  const double sigma = omega <= wp ? 0.07 : 0.09;
  const double dw = (omega - wp) / (sigma * wp);
  const double b = std::exp(-0.5 * dw * dw);
  const double a_gamma = 1.0 - 0.287 * std::log(params.gamma);
  return a_gamma * pm * std::pow(params.gamma, b);
}

WaveRealization realize(const SpectrumParams& params, std::uint64_t seed) {
  params.validate();
  const SpectrumParams p = params.resolved();

  const int n = p.n;
  const double dw = (p.omega_max - p.omega_min) / static_cast<double>(n - 1);

  WaveRealization real;
  real.seed = seed;
  real.amplitude.resize(n);
  real.frequency.resize(n);
  real.phase.resize(n);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * kPi);

  for (int i = 0; i < n; ++i) {
    const double w = p.omega_min + dw * static_cast<double>(i);
    real.frequency[i] = w;
    real.amplitude[i] = std::sqrt(2.0 * spectrum_density(p, w) * dw);
    real.phase[i] = uniform(rng);
  }
  return real;
}

double elevation(const WaveRealization& real, double t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < real.amplitude.size(); ++i) {
    sum += real.amplitude[i] * std::cos(real.frequency[i] * t + real.phase[i]);
  }
  return sum;
}

std::vector<double> elevation_series_serial(const WaveRealization& real, double t0, double dt,
                                            std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = elevation(real, t0 + dt * static_cast<double>(k));
  }
  return out;
}

std::vector<double> elevation_series(const WaveRealization& real, double t0, double dt,
                                     std::size_t count) {
  std::vector<double> out(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] = elevation(real, t0 + dt * static_cast<double>(k));
  }
  return out;
}

double spectral_moment0_serial(const SpectrumParams& params, double omega_lo, double omega_hi,
                               int n) {
  if (n < 2) throw ConfigError("quadrature needs at least 2 points");
  const double h = (omega_hi - omega_lo) / static_cast<double>(n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = omega_lo + h * static_cast<double>(i);
    const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += weight * spectrum_density(params, w);
  }
  return sum * h;
}

double spectral_moment0(const SpectrumParams& params, double omega_lo, double omega_hi, int n) {
  if (n < 2) throw ConfigError("quadrature needs at least 2 points");
  const double h = (omega_hi - omega_lo) / static_cast<double>(n - 1);
  double sum = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sum)
  for (int i = 0; i < n; ++i) {
    const double w = omega_lo + h * static_cast<double>(i);
    const double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += weight * spectrum_density(params, w);
  }
  return sum * h;
}

Vec3 wave_load(const WaveRealization& real, const Vec3& gain, double t) {
  if (gain.isZero()) return Vec3::Zero();
  double slope = 0.0;
  for (std::size_t i = 0; i < real.amplitude.size(); ++i) {
    const double w = real.frequency[i];
    const double k = w * w / kGravity;
    slope += real.amplitude[i] * k * std::sin(w * t + real.phase[i]);
  }
  return gain * slope;
}

}  // namespace dpsim
