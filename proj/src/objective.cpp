#include "nvoc/objective.hpp"

#include <algorithm>
#include <cmath>

#include "nvoc/parallel.hpp"

namespace nvoc {

namespace {

struct Transition {
  double detuning_mhz;
  double amplitude;
};

double max_detuning(const RepresentativeEnsemble& ensemble, const HyperfineConfig& hyperfine) {
  double reach = 0.0;
  for (int k = 0; k < hyperfine.level_count; ++k) reach = std::max(reach, std::abs(hyperfine.offset_mhz(k)));
  double d = 0.0;
  for (const auto& m : ensemble.members) d = std::max(d, std::abs(m.detuning_mhz));
  return d + reach;
}

double max_amplitude(const RepresentativeEnsemble& ensemble) {
  double a = 0.0;
  for (const auto& m : ensemble.members) a = std::max(a, m.amplitude);
  return a;
}

void check_inputs(const RepresentativeEnsemble& ensemble, const HyperfineConfig& hyperfine) {
  hyperfine.validate();
  if (ensemble.members.empty()) throw ValidationError("ensemble", "no members");
  for (const auto& m : ensemble.members) {
    if (m.weight < 0.0) throw ValidationError("weight", "ensemble weights must be non-negative");
    if (m.amplitude < 0.0) throw ValidationError("amplitude", "relative amplitude must be non-negative");
  }
}

std::vector<Transition> probe_transitions(const RepresentativeEnsemble& ensemble, const HyperfineConfig& hyperfine) {
  std::vector<const EnsembleMember*> picks;
  auto by = [&](auto key) {
    return &*std::max_element(ensemble.members.begin(), ensemble.members.end(),
                              [&](const EnsembleMember& a, const EnsembleMember& b) { return key(a) < key(b); });
  };
  picks.push_back(by([](const EnsembleMember& m) { return m.detuning_mhz + m.amplitude; }));
  picks.push_back(by([](const EnsembleMember& m) { return m.detuning_mhz - m.amplitude; }));
  picks.push_back(by([](const EnsembleMember& m) { return -m.detuning_mhz + m.amplitude; }));
  picks.push_back(by([](const EnsembleMember& m) { return -m.detuning_mhz - m.amplitude; }));
  picks.push_back(by([](const EnsembleMember& m) { return -std::abs(m.detuning_mhz) - std::abs(m.amplitude - 1.0); }));
  std::vector<Transition> out;
  for (const auto* m : picks) {
    for (int k = 0; k < hyperfine.level_count; ++k) {
      out.push_back({m->detuning_mhz + hyperfine.offset_mhz(k), m->amplitude});
    }
  }
  return out;
}

int resolve_truncation(const PulseCoefficients& pulse, const RepresentativeEnsemble& ensemble,
                       const HyperfineConfig& hyperfine, const EvaluationOptions& options) {
  if (options.truncation > 0) {
    if (options.truncation < pulse.harmonics()) throw ValidationError("truncation", "must be at least N_f");
    return options.truncation;
  }
  return certify_truncation(pulse, ensemble, hyperfine, options);
}

}  // namespace

int certify_truncation(const PulseCoefficients& pulse, const RepresentativeEnsemble& ensemble,
                       const HyperfineConfig& hyperfine, const EvaluationOptions& options) {
  check_inputs(ensemble, hyperfine);
  if (options.truncation_step < 1) throw ValidationError("truncation_step", "must be positive");
  const std::vector<Transition> probes = probe_transitions(ensemble, hyperfine);
  const double reach = max_detuning(ensemble, hyperfine);
  const double amp = std::max(max_amplitude(ensemble), 1e-12);

  auto fidelities = [&](int m) {
    const FloquetTransferEvaluator eval(pulse, m, reach, amp);
    std::vector<double> f(probes.size());
    parallel_for(probes.size(), options.threads,
                 [&](std::size_t i) { f[i] = eval(probes[i].detuning_mhz, probes[i].amplitude, false).fidelity; });
    return f;
  };

  int m = default_truncation(pulse);
  std::vector<double> current = fidelities(m);
  while (m + options.truncation_step <= options.max_truncation) {
    const std::vector<double> next = fidelities(m + options.truncation_step);
    double change = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) change = std::max(change, std::abs(next[i] - current[i]));
    if (change < options.tolerance) return m;
    m += options.truncation_step;
    current = next;
  }
  throw NumericalError("Floquet truncation did not converge below max_truncation = " +
                       std::to_string(options.max_truncation));
}

EnsembleFidelity ensemble_objective(const PulseCoefficients& pulse, const RepresentativeEnsemble& ensemble,
                                    const HyperfineConfig& hyperfine, const EvaluationOptions& options) {
  check_inputs(ensemble, hyperfine);
  EnsembleFidelity out;
  out.truncation = resolve_truncation(pulse, ensemble, hyperfine, options);
  const FloquetTransferEvaluator eval(pulse, out.truncation, max_detuning(ensemble, hyperfine),
                                      std::max(max_amplitude(ensemble), 1e-12));
  const int levels = hyperfine.level_count;
  out.member_fidelities.assign(ensemble.members.size(), 0.0);
  parallel_for(ensemble.members.size(), options.threads, [&](std::size_t i) {
    const EnsembleMember& m = ensemble.members[i];
    double sum = 0.0;
    for (int k = 0; k < levels; ++k) sum += eval(m.detuning_mhz + hyperfine.offset_mhz(k), m.amplitude, false).fidelity;
    out.member_fidelities[i] = sum / levels;
  });
  for (std::size_t i = 0; i < ensemble.members.size(); ++i) {
    out.value += ensemble.members[i].weight * out.member_fidelities[i];
  }
  return out;
}

ObjectiveGradient objective_gradient(const PulseCoefficients& pulse, const RepresentativeEnsemble& ensemble,
                                     const HyperfineConfig& hyperfine, double penalty_constant,
                                     const EvaluationOptions& options) {
  check_inputs(ensemble, hyperfine);
  if (penalty_constant < 0.0) throw ValidationError("penalty", "penalty constant must be non-negative");
  ObjectiveGradient out;
  out.truncation = resolve_truncation(pulse, ensemble, hyperfine, options);
  const FloquetTransferEvaluator eval(pulse, out.truncation, max_detuning(ensemble, hyperfine),
                                      std::max(max_amplitude(ensemble), 1e-12));
  const int levels = hyperfine.level_count;
  const Eigen::Index n = 2 * pulse.harmonics();
  std::vector<double> fid(ensemble.members.size(), 0.0);
  std::vector<VectorXd> grad(ensemble.members.size());
  parallel_for(ensemble.members.size(), options.threads, [&](std::size_t i) {
    const EnsembleMember& m = ensemble.members[i];
    VectorXd g = VectorXd::Zero(n);
    double f = 0.0;
    for (int k = 0; k < levels; ++k) {
      const TransitionTransfer t = eval(m.detuning_mhz + hyperfine.offset_mhz(k), m.amplitude, true);
      f += t.fidelity;
      g += t.gradient;
    }
    fid[i] = f / levels;
    grad[i] = g / levels;
  });
  out.transfer_gradient = VectorXd::Zero(n);
  for (std::size_t i = 0; i < ensemble.members.size(); ++i) {
    out.transfer += ensemble.members[i].weight * fid[i];
    out.transfer_gradient += ensemble.members[i].weight * grad[i];
  }
  out.penalty = nvoc::penalty(pulse, penalty_constant);
  out.gradient = out.transfer_gradient + penalty_gradient(pulse, penalty_constant);
  return out;
}

}  // namespace nvoc
