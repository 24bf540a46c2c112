// Compares the serial reference kernels against the OpenMP builds of the
// sea-state grid operations: elevation-series synthesis and spectral-moment
// quadrature. The parallel elevation series must match bit-for-bit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dpsim/seastate.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t samples = 200000;
  int components = 512;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--samples") == 0) samples = std::strtoull(argv[i + 1], nullptr, 10);
    if (std::strcmp(argv[i], "--components") == 0) components = std::atoi(argv[i + 1]);
  }

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled\n");
#endif

  dpsim::SpectrumParams params;
  params.n = components;
  const auto real = dpsim::realize(params, 42);

  std::printf("elevation series: %zu samples x %d components\n", samples, components);
  auto t0 = Clock::now();
  const auto serial = dpsim::elevation_series_serial(real, 0.0, 0.01, samples);
  const double t_serial = ms_since(t0);

  t0 = Clock::now();
  const auto parallel = dpsim::elevation_series(real, 0.0, 0.01, samples);
  const double t_parallel = ms_since(t0);

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i] == parallel[i];
  }
  std::printf("  serial   %10.2f ms\n", t_serial);
  std::printf("  parallel %10.2f ms   speedup %.2fx   bitwise match: %s\n", t_parallel,
              t_serial / t_parallel, identical ? "yes" : "NO");

  const double lo = 0.2 * params.omega_p(), hi = 6.0 * params.omega_p();
  const int quad_n = 2000000;
  std::printf("spectral moment m0: %d-point trapezoid\n", quad_n);
  t0 = Clock::now();
  const double m0_serial = dpsim::spectral_moment0_serial(params, lo, hi, quad_n);
  const double tq_serial = ms_since(t0);

  t0 = Clock::now();
  const double m0_parallel = dpsim::spectral_moment0(params, lo, hi, quad_n);
  const double tq_parallel = ms_since(t0);

  const double rel = std::abs(m0_parallel - m0_serial) / m0_serial;
  std::printf("  serial   %10.2f ms   m0 = %.12g\n", tq_serial, m0_serial);
  std::printf("  parallel %10.2f ms   m0 = %.12g   speedup %.2fx   rel diff %.2e\n", tq_parallel,
              m0_parallel, tq_serial / tq_parallel, rel);

  if (!identical || rel > 1e-12) {
    std::printf("MISMATCH between serial and parallel kernels\n");
    return 1;
  }
  return 0;
}
