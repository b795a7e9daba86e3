#include "nvoc/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace nvoc {

TimeDomainDrive time_domain_drive(const PulseCoefficients& pulse) {
  TimeDomainDrive drive;
  drive.envelope = [pulse](double t) { return envelope(pulse, t); };
  drive.duration_us = pulse.duration();
  drive.bandwidth_mhz = to_frequency(pulse.harmonics() * pulse.fundamental());
  drive.peak_rabi_mhz = to_frequency(2.0 * (pulse.ax().cwiseAbs().sum() + pulse.ay().cwiseAbs().sum()));
  return drive;
}

double oracle_max_step(const TimeDomainDrive& drive, const EnsembleMember& member, const HyperfineConfig& config) {
  double detuning = 0.0;
  for (int k = 0; k < config.level_count; ++k) {
    detuning = std::max(detuning, std::abs(member.detuning_mhz + config.offset_mhz(k)));
  }
  const double scale = detuning + drive.bandwidth_mhz + std::abs(member.amplitude) * drive.peak_rabi_mhz;
  const double limit = drive.duration_us / 1000.0;
  return scale > 0.0 ? std::min(limit, 1.0 / (100.0 * scale)) : limit;
}

Propagator oracle_propagator(const TimeDomainDrive& drive, const EnsembleMember& member,
                             const HyperfineConfig& config, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt", "time step must be positive");
  if (!(drive.duration_us > 0.0)) throw ValidationError("duration", "must be positive");
  if (!drive.envelope) throw ValidationError("drive", "envelope is empty");
  config.validate();

  const SpinMatrixSet spins = build_spin_matrices(config);
  const int dim = config.dimension();
  MatrixXc drift = MatrixXc::Zero(dim, dim);
  MatrixXc sx = MatrixXc::Zero(dim, dim), sy = MatrixXc::Zero(dim, dim);
  for (int k = 0; k < config.level_count; ++k) {
    drift += 0.5 * to_angular(member.detuning_mhz + config.offset_mhz(k)) * spins.z[k];
    sx += spins.x[k];
    sy += spins.y[k];
  }

  const auto steps = static_cast<long>(std::ceil(drive.duration_us / dt - 1e-9));
  const double h = drive.duration_us / static_cast<double>(steps);
  MatrixXc u = MatrixXc::Identity(dim, dim);
  for (long s = 0; s < steps; ++s) {
    const Envelope e = drive.envelope((static_cast<double>(s) + 0.5) * h);
    const MatrixXc ham = drift + 0.5 * member.amplitude * (e.i * sx + e.q * sy);
    if (dim == 2) {
      u = hermitian_exp(ham, h) * u;
    } else {
      // block-diagonal in transitions; exponentiate each 2x2 block
      MatrixXc step = MatrixXc::Zero(dim, dim);
      for (int k = 0; k < config.level_count; ++k) {
        step.block(2 * k, 2 * k, 2, 2) = hermitian_exp(ham.block(2 * k, 2 * k, 2, 2), h);
      }
      u = step * u;
    }
  }
  return {std::move(u), drive.duration_us};
}

}  // namespace nvoc
