#ifndef NVOC_TESTS_SUPPORT_HPP
#define NVOC_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>

#include "nvoc/pulse.hpp"

namespace nvoc::testing {

/// Random pulse with every coefficient uniform in [-1, 1], rescaled to peak at `peak_mhz`.
inline PulseCoefficients random_pulse(std::mt19937_64& rng, double peak_mhz, int harmonics = 10,
                                      double duration_us = 1.85) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorXd ax(harmonics), ay(harmonics);
  for (int j = 0; j < harmonics; ++j) ax(j) = u(rng);
  for (int j = 0; j < harmonics; ++j) ay(j) = u(rng);
  const PulseCoefficients raw(ax, ay, duration_us);
  return raw.scaled(peak_mhz / max_rabi(raw));
}

/// Generalized Rabi formula for a flat pulse of Rabi frequency R lasting 1 / (2R).
inline double rabi_formula(double rabi_mhz, double detuning_mhz) {
  const double r2 = rabi_mhz * rabi_mhz;
  const double g = std::sqrt(r2 + detuning_mhz * detuning_mhz);
  const double s = std::sin(pi * g / (2.0 * rabi_mhz));
  return r2 / (g * g) * s * s;
}

}  // namespace nvoc::testing

#endif  // NVOC_TESTS_SUPPORT_HPP
