#ifndef NVOC_ENSEMBLE_HPP
#define NVOC_ENSEMBLE_HPP

#include <vector>

#include "nvoc/hamiltonian.hpp"

namespace nvoc {

/// Weighted (detuning, amplitude) grid standing in for an inhomogeneous
/// ensemble. Members are stored detuning-major: index = i_detuning * n_amplitude + i_amplitude.
struct RepresentativeEnsemble {
  std::vector<EnsembleMember> members;
  int detuning_count = 0;
  int amplitude_count = 0;
  double detuning_range_mhz = 0.0;   ///< grid spans [-range, +range]
  double amplitude_fraction = 0.0;   ///< grid spans [1 - f, 1 + f]

  double total_weight() const;
};

/// Uniform grids over both ranges. Weights follow a Gaussian in detuning
/// with FWHM equal to `detuning_range_mhz` (half the full span), flat in
/// amplitude, normalized to sum to one.
RepresentativeEnsemble sample_representative_ensemble(double detuning_range_mhz, double amplitude_fraction,
                                                      int detuning_count, int amplitude_count);

/// Single member with weight one.
RepresentativeEnsemble single_member_ensemble(double detuning_mhz = 0.0, double amplitude = 1.0);

}  // namespace nvoc

#endif  // NVOC_ENSEMBLE_HPP
