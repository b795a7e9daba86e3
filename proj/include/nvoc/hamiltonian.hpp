#ifndef NVOC_HAMILTONIAN_HPP
#define NVOC_HAMILTONIAN_HPP

#include <vector>

#include "nvoc/pulse.hpp"
#include "nvoc/spin.hpp"

namespace nvoc {

/// One defect of the representative ensemble.
struct EnsembleMember {
  double detuning_mhz = 0.0;  ///< central hyperfine transition minus carrier
  double amplitude = 1.0;     ///< relative control amplitude alpha
  double weight = 1.0;
};

/// Fourier components H_n, n in [-N, N], of a 2 t_p periodic Hamiltonian,
/// H(t) = sum_n H_n exp(i n W t). Components outside the stored range are zero.
class FourierComponents {
 public:
  FourierComponents(int max_harmonic, int dimension);

  int max_harmonic() const { return max_harmonic_; }
  int dimension() const { return dimension_; }

  const MatrixXc& operator[](int n) const { return terms_.at(static_cast<std::size_t>(n + max_harmonic_)); }
  MatrixXc& operator[](int n) { return terms_.at(static_cast<std::size_t>(n + max_harmonic_)); }
  bool contains(int n) const { return n >= -max_harmonic_ && n <= max_harmonic_; }

  /// H(t) reconstructed from the components.
  MatrixXc evaluate(double omega, double t) const;

 private:
  int max_harmonic_;
  int dimension_;
  std::vector<MatrixXc> terms_;
};

/// Rotating-frame components over the full 2K space:
///   H_0    = sum_k 2 pi (Delta + w_k delta_l) / 2 * sigma_z,k
///   H_{+j} = +(alpha / 2i) sum_k (a_jx sigma_x,k + a_jy sigma_y,k)
///   H_{-j} = -(alpha / 2i) sum_k (a_jx sigma_x,k + a_jy sigma_y,k)
FourierComponents hamiltonian_fourier_components(const PulseCoefficients& pulse, const EnsembleMember& member,
                                                 const HyperfineConfig& config);

/// Same construction restricted to a single two-level transition detuned by `detuning_mhz`.
FourierComponents transition_fourier_components(const PulseCoefficients& pulse, double detuning_mhz,
                                                double amplitude);

/// Rotating-frame Hamiltonian of a single transition for an instantaneous (I, Q) envelope.
MatrixXc transition_hamiltonian(double detuning_mhz, double amplitude, const Envelope& drive);

}  // namespace nvoc

#endif  // NVOC_HAMILTONIAN_HPP
