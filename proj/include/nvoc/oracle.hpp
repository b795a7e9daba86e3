#ifndef NVOC_ORACLE_HPP
#define NVOC_ORACLE_HPP

#include <functional>

#include "nvoc/hamiltonian.hpp"
#include "nvoc/propagator.hpp"

namespace nvoc {

/// Rotating-frame drive given directly in the time domain.
struct TimeDomainDrive {
  std::function<Envelope(double)> envelope;
  double duration_us = 0.0;
  double bandwidth_mhz = 0.0;   ///< highest frequency present in I, Q
  double peak_rabi_mhz = 0.0;   ///< bound on sqrt(I^2 + Q^2) / 2 pi
};

TimeDomainDrive time_domain_drive(const PulseCoefficients& pulse);

/// Largest step accepted by oracle_propagator: min(t/1000, 1/(100 * scale))
/// where scale = max |transition detuning| + bandwidth + peak Rabi frequency.
double oracle_max_step(const TimeDomainDrive& drive, const EnsembleMember& member, const HyperfineConfig& config);

/// Time-ordered product of exp(-i H(t_mid) h) over equal steps h <= dt, with
/// H assembled from the 2K spin matrices. Second-order accurate. Independent
/// of the Floquet machinery and used to verify it.
Propagator oracle_propagator(const TimeDomainDrive& drive, const EnsembleMember& member,
                             const HyperfineConfig& config, double dt);

}  // namespace nvoc

#endif  // NVOC_ORACLE_HPP
