#include "nvoc/optimizer.hpp"

#include <cmath>
#include <random>

namespace nvoc {

RepresentativeEnsemble EnsembleSpec::sample() const {
  return sample_representative_ensemble(detuning_range_mhz, amplitude_fraction, detuning_points, amplitude_points);
}

void OptimizerConfig::validate() const {
  if (!(rabi_limit_mhz > 0.0)) throw ValidationError("rabi_limit", "must be positive");
  if (!(duration_us > 0.0)) throw ValidationError("duration", "must be positive");
  if (harmonics < 1) throw ValidationError("harmonics", "need at least one harmonic");
  if (steps < 0) throw ValidationError("steps", "must be non-negative");
  if (fixed_beta_steps < 0 || fixed_beta_steps > steps) {
    throw ValidationError("fixed_beta_steps", "must lie in [0, steps]");
  }
  if (!(fixed_beta > 0.0)) throw ValidationError("fixed_beta", "must be positive");
  if (penalty_initial < 0.0) throw ValidationError("penalty_initial", "must be non-negative");
  if (penalty_step < 0.0) throw ValidationError("penalty_step", "must be non-negative");
  if (!(init_overshoot > 1.0)) throw ValidationError("init_overshoot", "must exceed 1");
  if (!(amplitude_unit > 0.0)) throw ValidationError("amplitude_unit", "must be positive");
  if (floquet_truncation != 0 && floquet_truncation < harmonics) {
    throw ValidationError("floquet_truncation", "must be 0 (automatic) or at least N_f");
  }
  if (!(truncation_tolerance > 0.0)) throw ValidationError("truncation_tolerance", "must be positive");
  if (truncation_recheck < 1) throw ValidationError("truncation_recheck", "must be positive");
  if (!(line_search_tolerance > 0.0)) throw ValidationError("line_search_tolerance", "must be positive");
  if (threads < 1) throw ValidationError("threads", "must be positive");
  hyperfine.validate();
}

PulseCoefficients init_amplitudes(std::uint64_t seed, double rabi_limit_mhz, int harmonics, double duration_us,
                                  double overshoot, double carrier_mhz) {
  if (!(rabi_limit_mhz > 0.0)) throw ValidationError("rabi_limit", "must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  VectorXd ax(harmonics), ay(harmonics);
  for (int j = 0; j < harmonics; ++j) ax(j) = uniform(rng);
  for (int j = 0; j < harmonics; ++j) ay(j) = uniform(rng);
  const PulseCoefficients raw(ax, ay, duration_us, carrier_mhz);
  const double peak = max_rabi(raw);
  if (!(peak > 0.0)) throw NumericalError("initial draw produced a zero pulse");
  return raw.scaled(overshoot * rabi_limit_mhz / peak);
}

double update_penalty(double p, double max_rabi_mhz, double rabi_limit_mhz, double dp) {
  if (p < 0.0) throw ValidationError("penalty", "penalty constant must be non-negative");
  return max_rabi_mhz > rabi_limit_mhz ? p + dp : std::max(0.0, p - dp);
}

LineSearchResult line_search(const PulseCoefficients& pulse, const VectorXd& direction,
                             const RepresentativeEnsemble& ensemble, const HyperfineConfig& hyperfine,
                             double penalty_constant, double value_at_zero, const EvaluationOptions& evaluation,
                             const LineSearchOptions& options) {
  if (direction.squaredNorm() == 0.0) {
    LineSearchResult none;
    none.value = value_at_zero;
    return none;
  }
  return golden_section_search(
      [&](double beta) {
        const PulseCoefficients trial = pulse.stepped(direction, beta);
        return ensemble_objective(trial, ensemble, hyperfine, evaluation).value + penalty(trial, penalty_constant);
      },
      value_at_zero, options);
}

OptimizationResult optimize(const OptimizerConfig& config, const std::function<void(const TraceRow&)>& on_step) {
  config.validate();
  const RepresentativeEnsemble ensemble = config.ensemble.sample();

  PulseCoefficients pulse = init_amplitudes(config.seed, config.rabi_limit_mhz, config.harmonics,
                                            config.duration_us, config.init_overshoot, config.carrier_mhz);
  EvaluationOptions evaluation;
  evaluation.threads = config.threads;
  evaluation.tolerance = config.truncation_tolerance;
  auto pin_truncation = [&](const PulseCoefficients& current) {
    EvaluationOptions probe = evaluation;
    probe.truncation = 0;
    evaluation.truncation = config.floquet_truncation > 0
                                ? config.floquet_truncation
                                : certify_truncation(current, ensemble, config.hyperfine, probe);
  };
  pin_truncation(pulse);

  // Ascent in x = a / u: F_pen(x) = F_pen(a) / u^2 and a step beta in x is beta u^2 in a.
  const double unit2 = config.amplitude_unit * config.amplitude_unit;
  double p = config.penalty_initial;
  OptimizationTrace trace;
  std::vector<PulseCoefficients> iterates{pulse};

  ObjectiveGradient current = objective_gradient(pulse, ensemble, config.hyperfine, p / unit2, evaluation);
  {
    TraceRow row;
    row.transfer = current.transfer;
    row.penalty = current.penalty;
    row.penalty_constant = p;
    row.max_rabi_mhz = max_rabi(pulse);
    row.objective_before = current.total();
    row.truncation = current.truncation;
    trace.rows.push_back(row);
    if (on_step) on_step(row);
  }

  LineSearchOptions search;
  search.initial_bracket = 10.0 * config.fixed_beta * unit2;
  search.tolerance = config.line_search_tolerance;

  for (int step = 1; step <= config.steps; ++step) {
    TraceRow row;
    row.step = step;
    row.penalty_constant = p;
    row.objective_before = current.total();
    row.truncation = evaluation.truncation;
    double step_a = config.fixed_beta * unit2;
    if (step <= config.fixed_beta_steps) {
      row.beta = config.fixed_beta;
    } else {
      row.line_search = true;
      const LineSearchResult ls = line_search(pulse, current.gradient, ensemble, config.hyperfine, p / unit2,
                                              current.total(), evaluation, search);
      step_a = ls.beta;
      row.beta = ls.beta / unit2;
      row.no_improvement = !ls.improved;
    }
    pulse = pulse.stepped(current.gradient, step_a);
    row.max_rabi_mhz = max_rabi(pulse);
    iterates.push_back(pulse);

    // The step was taken under p; record F_tot under that same p, then move p.
    ObjectiveGradient taken = objective_gradient(pulse, ensemble, config.hyperfine, p / unit2, evaluation);
    row.transfer = taken.transfer;
    row.penalty = taken.penalty;
    trace.rows.push_back(row);
    if (on_step) on_step(row);

    p = update_penalty(p, row.max_rabi_mhz, config.rabi_limit_mhz, config.penalty_step);
    if (step < config.steps && config.floquet_truncation == 0 && step % config.truncation_recheck == 0) {
      pin_truncation(pulse);
    }
    if (step < config.steps) {
      if (p == row.penalty_constant && evaluation.truncation == taken.truncation) {
        current = std::move(taken);
      } else {
        current = objective_gradient(pulse, ensemble, config.hyperfine, p / unit2, evaluation);
      }
    }
  }

  OptimizationResult result{pulse, trace, config.steps};
  if (trace.rows.size() >= 2) {
    const double last_change = std::abs(trace.rows.back().transfer - trace.rows[trace.rows.size() - 2].transfer);
    result.trace.converged = last_change <= config.convergence_threshold;
  }
  if (!result.trace.converged) {
    int best = -1;
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
      const TraceRow& r = trace.rows[i];
      if (r.max_rabi_mhz > 1.02 * config.rabi_limit_mhz) continue;
      if (best < 0 || r.transfer > trace.rows[static_cast<std::size_t>(best)].transfer) best = static_cast<int>(i);
    }
    if (best >= 0) {
      result.returned_step = best;
      result.pulse = iterates[static_cast<std::size_t>(best)];
    }
  }
  return result;
}

}  // namespace nvoc
