#ifndef NVOC_FIDELITY_HPP
#define NVOC_FIDELITY_HPP

#include "nvoc/floquet.hpp"
#include "nvoc/oracle.hpp"

namespace nvoc {

/// (1/K) sum_k P(|0>_k -> |-1>_k), transition k detuned by Delta + w_k delta_l.
/// Each nuclear spin projection is weighted equally.
double multi_level_average_fidelity(const PulseCoefficients& pulse, double detuning_mhz, double amplitude,
                                    const HyperfineConfig& config, const FloquetOptions& options = {});

/// Time-stepped variant for drives without a Floquet representation
/// (multi-tone flat pulses). `dt <= 0` selects oracle_max_step.
double multi_level_average_fidelity(const TimeDomainDrive& drive, double detuning_mhz, double amplitude,
                                    const HyperfineConfig& config, double dt = 0.0);

}  // namespace nvoc

#endif  // NVOC_FIDELITY_HPP
