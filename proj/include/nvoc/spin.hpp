#ifndef NVOC_SPIN_HPP
#define NVOC_SPIN_HPP

#include <vector>

#include "nvoc/types.hpp"

namespace nvoc {

/// Hyperfine structure of the driven electron-spin transition.
///
/// The K transitions sit at offsets `weights[k] * splitting_mhz` from the
/// central transition. Nitrogen-14 gives K = 3 with offsets {-1, 0, +1},
/// nitrogen-15 gives K = 2 with offsets {-1/2, +1/2}.
struct HyperfineConfig {
  int level_count = 1;
  double splitting_mhz = 0.0;
  std::vector<double> weights{0.0};

  /// Canonical offsets for K in {1, 2, 3}; throws ValidationError otherwise.
  static HyperfineConfig make(int level_count, double splitting_mhz);
  static HyperfineConfig single() { return make(1, 0.0); }
  static HyperfineConfig nitrogen14(double splitting_mhz = 2.16) { return make(3, splitting_mhz); }
  static HyperfineConfig nitrogen15(double splitting_mhz = 3.03) { return make(2, splitting_mhz); }

  void validate() const;
  int dimension() const { return 2 * level_count; }
  double offset_mhz(int k) const { return weights.at(static_cast<std::size_t>(k)) * splitting_mhz; }
};

/// Pauli triples embedded in the 2K-dimensional space, one per transition.
/// Transition k occupies basis states (2k, 2k+1) = (|0>_k, |-1>_k).
struct SpinMatrixSet {
  std::vector<MatrixXc> x;
  std::vector<MatrixXc> y;
  std::vector<MatrixXc> z;

  int transitions() const { return static_cast<int>(z.size()); }
  int dimension() const { return z.empty() ? 0 : static_cast<int>(z.front().rows()); }
};

SpinMatrixSet build_spin_matrices(const HyperfineConfig& config);

MatrixXc pauli_x();
MatrixXc pauli_y();
MatrixXc pauli_z();

}  // namespace nvoc

#endif  // NVOC_SPIN_HPP
