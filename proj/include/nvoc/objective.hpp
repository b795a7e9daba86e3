#ifndef NVOC_OBJECTIVE_HPP
#define NVOC_OBJECTIVE_HPP

#include <vector>

#include "nvoc/ensemble.hpp"
#include "nvoc/floquet.hpp"

namespace nvoc {

/// Floquet cutoff used by the ensemble evaluations. With `truncation == 0`
/// the cutoff is certified per call: M starts at N_f + 10 and grows by
/// `truncation_step` until no probe transition changes its transfer
/// probability by more than `tolerance` between M and M + truncation_step.
struct EvaluationOptions {
  int truncation = 0;
  double tolerance = 1e-8;
  int truncation_step = 10;
  int max_truncation = 400;
  int threads = 1;
};

/// Probe transitions: every hyperfine line of the four corner members and the
/// member closest to the grid center, which bracket the drive strength and the
/// detuning seen by the rest of the grid.
int certify_truncation(const PulseCoefficients& pulse, const RepresentativeEnsemble& ensemble,
                       const HyperfineConfig& hyperfine, const EvaluationOptions& options = {});

struct EnsembleFidelity {
  double value = 0.0;                    ///< weighted F_st
  std::vector<double> member_fidelities; ///< K-averaged, same order as ensemble.members
  int truncation = 0;
};

/// F_st = sum_i w_i * multi_level_average_fidelity(pulse, Delta_i, alpha_i).
/// The reduction runs in member order regardless of thread count.
EnsembleFidelity ensemble_objective(const PulseCoefficients& pulse, const RepresentativeEnsemble& ensemble,
                                    const HyperfineConfig& hyperfine, const EvaluationOptions& options = {});

struct ObjectiveGradient {
  double transfer = 0.0;        ///< F_st
  double penalty = 0.0;         ///< F_pen
  VectorXd transfer_gradient;   ///< dF_st / da, flattened (a_x then a_y)
  VectorXd gradient;            ///< d(F_st + F_pen) / da
  int truncation = 0;

  double total() const { return transfer + penalty; }
};

ObjectiveGradient objective_gradient(const PulseCoefficients& pulse, const RepresentativeEnsemble& ensemble,
                                     const HyperfineConfig& hyperfine, double penalty_constant,
                                     const EvaluationOptions& options = {});

}  // namespace nvoc

#endif  // NVOC_OBJECTIVE_HPP
