#include "nvoc/hamiltonian.hpp"

#include <cmath>

namespace nvoc {

FourierComponents::FourierComponents(int max_harmonic, int dimension)
    : max_harmonic_(max_harmonic),
      dimension_(dimension),
      terms_(static_cast<std::size_t>(2 * max_harmonic + 1), MatrixXc::Zero(dimension, dimension)) {}

MatrixXc FourierComponents::evaluate(double omega, double t) const {
  MatrixXc h = MatrixXc::Zero(dimension_, dimension_);
  for (int n = -max_harmonic_; n <= max_harmonic_; ++n) {
    h += std::exp(Complex(0.0, n * omega * t)) * (*this)[n];
  }
  return h;
}

namespace {

constexpr Complex inv_2i{0.0, -0.5};  // 1 / (2i)

void add_drive_terms(FourierComponents& h, const PulseCoefficients& pulse, double amplitude, const MatrixXc& sx,
                     const MatrixXc& sy) {
  for (int j = 1; j <= pulse.harmonics(); ++j) {
    const MatrixXc term = amplitude * (pulse.ax()(j - 1) * sx + pulse.ay()(j - 1) * sy);
    h[j] += inv_2i * term;
    h[-j] -= inv_2i * term;
  }
}

}  // namespace

FourierComponents hamiltonian_fourier_components(const PulseCoefficients& pulse, const EnsembleMember& member,
                                                 const HyperfineConfig& config) {
  const SpinMatrixSet spins = build_spin_matrices(config);
  FourierComponents h(pulse.harmonics(), config.dimension());
  for (int k = 0; k < config.level_count; ++k) {
    h[0] += 0.5 * to_angular(member.detuning_mhz + config.offset_mhz(k)) * spins.z[k];
    add_drive_terms(h, pulse, member.amplitude, spins.x[k], spins.y[k]);
  }
  return h;
}

FourierComponents transition_fourier_components(const PulseCoefficients& pulse, double detuning_mhz,
                                                double amplitude) {
  FourierComponents h(pulse.harmonics(), 2);
  h[0] = 0.5 * to_angular(detuning_mhz) * pauli_z();
  add_drive_terms(h, pulse, amplitude, pauli_x(), pauli_y());
  return h;
}

MatrixXc transition_hamiltonian(double detuning_mhz, double amplitude, const Envelope& drive) {
  return 0.5 * to_angular(detuning_mhz) * pauli_z() + 0.5 * amplitude * (drive.i * pauli_x() + drive.q * pauli_y());
}

}  // namespace nvoc
