#ifndef NVOC_PROPAGATOR_HPP
#define NVOC_PROPAGATOR_HPP

#include "nvoc/spin.hpp"
#include "nvoc/types.hpp"

namespace nvoc {

/// Unitary evolution over [0, duration] in the rotating frame.
struct Propagator {
  MatrixXc u;
  double duration_us = 0.0;
};

/// exp(-i H t) for Hermitian H. Closed form for 2x2, eigendecomposition otherwise.
MatrixXc hermitian_exp(const MatrixXc& h, double t);

/// |<psi_f| U |psi_i>|^2. Throws ValidationError for wrong dimension or
/// states whose norm deviates from 1 by more than 1e-9.
double state_transfer_fidelity(const Propagator& prop, const VectorXc& psi_i, const VectorXc& psi_f);

/// |0>_k and |-1>_k embedded in the 2K space.
VectorXc bright_state(const HyperfineConfig& config, int transition);
VectorXc dark_state(const HyperfineConfig& config, int transition);

/// Mean over transitions of the |0>_k -> |-1>_k transfer probability.
double mean_block_transfer(const Propagator& prop, const HyperfineConfig& config);

}  // namespace nvoc

#endif  // NVOC_PROPAGATOR_HPP
