#include "nvoc/fidelity.hpp"

namespace nvoc {

double multi_level_average_fidelity(const PulseCoefficients& pulse, double detuning_mhz, double amplitude,
                                    const HyperfineConfig& config, const FloquetOptions& options) {
  const EnsembleMember member{detuning_mhz, amplitude, 1.0};
  if (options.truncation > 0 && !options.verify) {
    double sum = 0.0;
    for (int k = 0; k < config.level_count; ++k) {
      sum += floquet_transfer(pulse, detuning_mhz + config.offset_mhz(k), amplitude, options.truncation, false)
                 .fidelity;
    }
    return sum / config.level_count;
  }
  return mean_block_transfer(floquet_propagator(pulse, member, config, options), config);
}

double multi_level_average_fidelity(const TimeDomainDrive& drive, double detuning_mhz, double amplitude,
                                    const HyperfineConfig& config, double dt) {
  const HyperfineConfig single = HyperfineConfig::single();
  double sum = 0.0;
  for (int k = 0; k < config.level_count; ++k) {
    const EnsembleMember member{detuning_mhz + config.offset_mhz(k), amplitude, 1.0};
    const double step = dt > 0.0 ? dt : oracle_max_step(drive, member, single);
    sum += mean_block_transfer(oracle_propagator(drive, member, single, step), single);
  }
  return sum / config.level_count;
}

}  // namespace nvoc
