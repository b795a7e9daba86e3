#ifndef NVOC_OPTIMIZER_HPP
#define NVOC_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "nvoc/line_search.hpp"
#include "nvoc/objective.hpp"

namespace nvoc {

struct EnsembleSpec {
  double detuning_range_mhz = 1.0;
  double amplitude_fraction = 0.1;
  int detuning_points = 12;
  int amplitude_points = 12;

  RepresentativeEnsemble sample() const;
};

struct OptimizerConfig {
  double rabi_limit_mhz = 1.4;
  double duration_us = 1.85;
  double carrier_mhz = 0.0;
  int harmonics = 10;
  int steps = 150;
  double fixed_beta = 0.007;
  int fixed_beta_steps = 51;
  double penalty_initial = 1.0;
  double penalty_step = 0.05;
  double init_overshoot = 2.8;
  /// Optimizer coordinates are a / amplitude_unit; beta, p and the traced
  /// F_pen refer to them. 2 pi puts them in MHz of Rabi frequency.
  double amplitude_unit = two_pi;
  std::uint64_t seed = 1;
  HyperfineConfig hyperfine = HyperfineConfig::nitrogen14();
  EnsembleSpec ensemble;

  /// Floquet cutoff during optimization. 0 re-certifies it every
  /// `truncation_recheck` steps at `truncation_tolerance`.
  int floquet_truncation = 0;
  double truncation_tolerance = 1e-5;
  int truncation_recheck = 10;
  double line_search_tolerance = 1e-2;
  double convergence_threshold = 1e-3;  ///< |dF_st| per step still counted as moving
  int threads = 1;

  void validate() const;
};

/// One row per iterate. Row n > 0 describes the pulse after update n, taken
/// with penalty constant `penalty_constant`; `objective_before` is F_tot of the
/// previous iterate under that same constant, so a line-search step satisfies
/// transfer + penalty >= objective_before.
struct TraceRow {
  int step = 0;
  double transfer = 0.0;          ///< F_st
  double penalty = 0.0;           ///< F_pen
  double penalty_constant = 0.0;  ///< p
  double max_rabi_mhz = 0.0;
  double beta = 0.0;
  double objective_before = 0.0;
  int truncation = 0;
  bool line_search = false;
  bool no_improvement = false;    ///< line search found no improving step

  double total() const { return transfer + penalty; }
};

struct OptimizationTrace {
  std::vector<TraceRow> rows;
  bool converged = true;
};

struct OptimizationResult {
  PulseCoefficients pulse;
  OptimizationTrace trace;
  int returned_step = 0;  ///< iterate returned as `pulse`
};

/// Uniform draws from [-1, 1] (mt19937_64 seeded with `seed`), rescaled so the
/// pulse peaks at overshoot * R_lim.
PulseCoefficients init_amplitudes(std::uint64_t seed, double rabi_limit_mhz, int harmonics, double duration_us,
                                  double overshoot = 2.8, double carrier_mhz = 0.0);

/// p + dp above the limit, max(0, p - dp) otherwise.
double update_penalty(double p, double max_rabi_mhz, double rabi_limit_mhz, double dp);

/// Golden-section search for beta maximizing F_tot(a + beta d) at fixed p and truncation.
LineSearchResult line_search(const PulseCoefficients& pulse, const VectorXd& direction,
                             const RepresentativeEnsemble& ensemble, const HyperfineConfig& hyperfine,
                             double penalty_constant, double value_at_zero, const EvaluationOptions& evaluation,
                             const LineSearchOptions& options);

/// Fixed-step gradient ascent for `fixed_beta_steps`, line-search ascent
/// afterwards, penalty constant updated after every step. Returns the final
/// iterate; if F_st is still moving by more than `convergence_threshold` at
/// the end, the trace is flagged unconverged and the best iterate within
/// 2% of R_lim is returned instead.
OptimizationResult optimize(const OptimizerConfig& config,
                            const std::function<void(const TraceRow&)>& on_step = {});

}  // namespace nvoc

#endif  // NVOC_OPTIMIZER_HPP
