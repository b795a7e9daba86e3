#include "nvoc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <optional>
#include <variant>

#include "nvoc/parallel.hpp"

namespace nvoc {

void FlatDrive::validate() const {
  if (!(rabi_mhz > 0.0)) throw ValidationError("rabi", "must be positive");
  if (!(duration_us > 0.0)) throw ValidationError("duration", "must be positive");
  if (offsets_mhz.empty()) throw ValidationError("tones", "need at least one tone");
  if (phases.size() != offsets_mhz.size()) throw ValidationError("phases", "need one phase per tone");
  if (single_tone() && offsets_mhz[0] != 0.0) throw ValidationError("tones", "a single tone sits at offset 0");
}

FlatDrive flat_pi_pulse(double rabi_mhz, int tones, double splitting_mhz, std::vector<double> phases) {
  if (!(rabi_mhz > 0.0)) throw ValidationError("rabi", "must be positive");
  FlatDrive d;
  d.rabi_mhz = rabi_mhz;
  d.duration_us = 1.0 / (2.0 * rabi_mhz);
  if (tones == 1) {
    d.offsets_mhz = {0.0};
  } else if (tones == 3) {
    if (!(splitting_mhz > 0.0)) throw ValidationError("splitting", "three-tone drive needs a positive splitting");
    d.offsets_mhz = {-splitting_mhz, 0.0, splitting_mhz};
  } else {
    throw ValidationError("tones", "flat drives have 1 or 3 tones");
  }
  d.phases = phases.empty() ? std::vector<double>(d.offsets_mhz.size(), 0.0) : std::move(phases);
  d.validate();
  return d;
}

std::vector<double> random_phases(std::uint64_t seed, int tones) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, two_pi);
  std::vector<double> out(static_cast<std::size_t>(tones));
  for (auto& p : out) p = uniform(rng);
  return out;
}

TimeDomainDrive time_domain_drive(const FlatDrive& drive) {
  drive.validate();
  TimeDomainDrive td;
  td.duration_us = drive.duration_us;
  const double a = to_angular(drive.rabi_mhz);
  const std::vector<double> offsets = drive.offsets_mhz;
  const std::vector<double> phases = drive.phases;
  td.envelope = [a, offsets, phases](double t) {
    Envelope e;
    for (std::size_t n = 0; n < offsets.size(); ++n) {
      const double arg = to_angular(offsets[n]) * t + phases[n];
      e.i += a * std::cos(arg);
      e.q += a * std::sin(arg);
    }
    return e;
  };
  double reach = 0.0;
  for (double f : offsets) reach = std::max(reach, std::abs(f));
  td.bandwidth_mhz = reach;
  td.peak_rabi_mhz = drive.rabi_mhz * static_cast<double>(offsets.size());
  return td;
}

double flat_transfer(const FlatDrive& drive, double detuning_mhz, double amplitude) {
  drive.validate();
  if (drive.single_tone()) {
    const Envelope e{to_angular(drive.rabi_mhz) * std::cos(drive.phases[0]),
                     to_angular(drive.rabi_mhz) * std::sin(drive.phases[0])};
    const MatrixXc u = hermitian_exp(transition_hamiltonian(detuning_mhz, amplitude, e), drive.duration_us);
    return std::norm(u(1, 0));
  }
  const HyperfineConfig single = HyperfineConfig::single();
  const TimeDomainDrive td = time_domain_drive(drive);
  const EnsembleMember member{detuning_mhz, amplitude, 1.0};
  const Propagator p = oracle_propagator(td, member, single, oracle_max_step(td, member, single));
  return std::norm(p.u(1, 0));
}

std::vector<double> linear_axis(double lo, double hi, int count) {
  if (count < 1) throw ValidationError("points", "axis needs at least one point");
  if (count == 1) return {lo};
  if (!(hi > lo)) throw ValidationError("axis", "upper end must exceed lower end");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return out;
}

namespace {

void check_axis(const std::vector<double>& axis, const char* field) {
  if (axis.empty()) throw ValidationError(field, "axis is empty");
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) throw ValidationError(field, "axis must be strictly increasing");
  }
}

// Evaluates single-transition transfer probabilities for a drive over a set of
// (detuning, amplitude) points that all lie within the given envelope.
class TransferFunction {
 public:
  TransferFunction(const Drive& drive, double reach_mhz, double max_amplitude, const RepresentativeEnsemble& probes,
                   const HyperfineConfig& hyperfine, const EvaluationOptions& options)
      : drive_(drive) {
    if (const auto* pulse = std::get_if<PulseCoefficients>(&drive)) {
      truncation_ = options.truncation > 0 ? options.truncation
                                           : certify_truncation(*pulse, probes, hyperfine, options);
      floquet_.emplace(*pulse, truncation_, reach_mhz, std::max(max_amplitude, 1e-12));
    } else {
      std::get<FlatDrive>(drive).validate();
    }
  }

  double operator()(double detuning_mhz, double amplitude) const {
    if (floquet_) return (*floquet_)(detuning_mhz, amplitude, false).fidelity;
    return flat_transfer(std::get<FlatDrive>(drive_), detuning_mhz, amplitude);
  }

  int truncation() const { return truncation_; }

 private:
  const Drive& drive_;
  int truncation_ = 0;
  std::optional<FloquetTransferEvaluator> floquet_;
};

double level_reach(const HyperfineConfig& hyperfine) {
  double reach = 0.0;
  for (int k = 0; k < hyperfine.level_count; ++k) reach = std::max(reach, std::abs(hyperfine.offset_mhz(k)));
  return reach;
}

RepresentativeEnsemble corner_probes(double d_lo, double d_hi, double a_lo, double a_hi) {
  RepresentativeEnsemble e;
  for (double d : {d_lo, 0.5 * (d_lo + d_hi), d_hi}) {
    for (double a : {a_lo, a_hi}) e.members.push_back({d, a, 1.0});
  }
  return e;
}

}  // namespace

FidelityGrid fidelity_map(const Drive& drive, const std::vector<double>& detunings_mhz,
                          const std::vector<double>& amplitudes, MapMode mode, const HyperfineConfig& hyperfine,
                          const EvaluationOptions& options) {
  check_axis(detunings_mhz, "detuning_axis");
  check_axis(amplitudes, "amplitude_axis");
  hyperfine.validate();
  if (amplitudes.front() < 0.0) throw ValidationError("amplitude_axis", "amplitudes must be non-negative");
  const HyperfineConfig levels = mode == MapMode::single_transition ? HyperfineConfig::single() : hyperfine;

  const double reach = std::max(std::abs(detunings_mhz.front()), std::abs(detunings_mhz.back())) + level_reach(levels);
  const RepresentativeEnsemble probes =
      corner_probes(detunings_mhz.front(), detunings_mhz.back(), amplitudes.front(), amplitudes.back());
  const TransferFunction transfer(drive, reach, amplitudes.back(), probes, levels, options);

  FidelityGrid grid;
  grid.detunings_mhz = detunings_mhz;
  grid.amplitudes = amplitudes;
  grid.mode = mode;
  grid.truncation = transfer.truncation();
  grid.values.resize(static_cast<Eigen::Index>(detunings_mhz.size()), static_cast<Eigen::Index>(amplitudes.size()));
  const std::size_t na = amplitudes.size();
  parallel_for(detunings_mhz.size() * na, options.threads, [&](std::size_t idx) {
    const std::size_t i = idx / na, j = idx % na;
    double sum = 0.0;
    for (int k = 0; k < levels.level_count; ++k) sum += transfer(detunings_mhz[i] + levels.offset_mhz(k), amplitudes[j]);
    grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sum / levels.level_count;
  });
  return grid;
}

OdmrCurve simulate_odmr(const Drive& drive, const RepresentativeEnsemble& ensemble, const HyperfineConfig& hyperfine,
                        const std::vector<double>& offsets_mhz, const EvaluationOptions& options) {
  check_axis(offsets_mhz, "sweep");
  hyperfine.validate();
  if (ensemble.members.empty()) throw ValidationError("ensemble", "no members");
  double d_lo = ensemble.members.front().detuning_mhz, d_hi = d_lo, a_lo = ensemble.members.front().amplitude,
         a_hi = a_lo;
  for (const auto& m : ensemble.members) {
    d_lo = std::min(d_lo, m.detuning_mhz);
    d_hi = std::max(d_hi, m.detuning_mhz);
    a_lo = std::min(a_lo, m.amplitude);
    a_hi = std::max(a_hi, m.amplitude);
  }
  d_lo -= offsets_mhz.back();
  d_hi -= offsets_mhz.front();
  const double reach = std::max(std::abs(d_lo), std::abs(d_hi)) + level_reach(hyperfine);
  const TransferFunction transfer(drive, reach, a_hi, corner_probes(d_lo, d_hi, a_lo, a_hi), hyperfine, options);

  OdmrCurve curve;
  curve.offsets_mhz = offsets_mhz;
  curve.contrast.assign(offsets_mhz.size(), 0.0);
  const std::size_t nm = ensemble.members.size();
  std::vector<double> member_values(offsets_mhz.size() * nm);
  parallel_for(member_values.size(), options.threads, [&](std::size_t idx) {
    const double f = offsets_mhz[idx / nm];
    const EnsembleMember& m = ensemble.members[idx % nm];
    double sum = 0.0;
    for (int k = 0; k < hyperfine.level_count; ++k) {
      sum += transfer(m.detuning_mhz - f + hyperfine.offset_mhz(k), m.amplitude);
    }
    member_values[idx] = sum / hyperfine.level_count;
  });
  for (std::size_t s = 0; s < offsets_mhz.size(); ++s) {
    for (std::size_t i = 0; i < nm; ++i) curve.contrast[s] += ensemble.members[i].weight * member_values[s * nm + i];
  }
  curve.slope = offsets_mhz.size() >= 3 ? numerical_slope(offsets_mhz, curve.contrast)
                                        : std::vector<double>(offsets_mhz.size(), 0.0);
  return curve;
}

std::vector<double> numerical_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("curve", "axis and values differ in length");
  if (x.size() < 3) throw ValidationError("curve", "need at least 3 points");
  const std::size_t n = x.size();
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    d[i] = (h1 * h1 * y[i + 1] - h2 * h2 * y[i - 1] + (h2 * h2 - h1 * h1) * y[i]) / (h1 * h2 * (h1 + h2));
  }
  {
    const double h1 = x[1] - x[0], h2 = x[2] - x[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * y[0] + (h1 + h2) / (h1 * h2) * y[1] - h1 / (h2 * (h1 + h2)) * y[2];
  }
  {
    const double h1 = x[n - 2] - x[n - 3], h2 = x[n - 1] - x[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * y[n - 3] - (h1 + h2) / (h1 * h2) * y[n - 2] +
               (2.0 * h2 + h1) / (h2 * (h1 + h2)) * y[n - 1];
  }
  return d;
}

SlopeExtremum contrast_slope(const OdmrCurve& curve) {
  const std::vector<double> slope = curve.slope.size() == curve.offsets_mhz.size() && curve.slope.size() >= 3
                                        ? curve.slope
                                        : numerical_slope(curve.offsets_mhz, curve.contrast);
  if (curve.offsets_mhz.size() < 3) throw ValidationError("curve", "need at least 3 points");
  SlopeExtremum out;
  for (std::size_t i = 0; i < slope.size(); ++i) {
    if (std::abs(slope[i]) > out.max_abs_slope) {
      out.max_abs_slope = std::abs(slope[i]);
      out.offset_mhz = curve.offsets_mhz[i];
    }
  }
  return out;
}

void SensitivityInputs::validate() const {
  if (!(slope_per_hz > 0.0)) throw ValidationError("slope", "must be positive");
  if (!(readout_time_s > 0.0)) throw ValidationError("readout_time", "must be positive");
  if (!(reinit_time_s > 0.0)) throw ValidationError("reinit_time", "must be positive");
  if (!(decay_constant_s > 0.0)) throw ValidationError("decay_constant", "must be positive");
  if (!(photon_rate_per_s > 0.0)) throw ValidationError("photon_rate", "must be positive");
  if (!(gyromagnetic_hz_per_t > 0.0)) throw ValidationError("gyromagnetic_ratio", "must be positive");
}

double information_factor(double readout_time_s, double decay_constant_s) {
  return decay_constant_s * -std::expm1(-readout_time_s / decay_constant_s) / readout_time_s;
}

double sensitivity(const SensitivityInputs& in) {
  in.validate();
  return std::sqrt(2.0 * in.readout_time_s * in.reinit_time_s) /
         (in.gyromagnetic_hz_per_t * in.slope_per_hz * in.decay_constant_s *
          -std::expm1(-in.readout_time_s / in.decay_constant_s) * std::sqrt(in.photon_rate_per_s));
}

double photon_rate(double power_w, double wavelength_m) {
  if (!(power_w > 0.0) || !(wavelength_m > 0.0)) throw ValidationError("power", "power and wavelength must be positive");
  constexpr double planck = 6.62607015e-34;
  constexpr double light_speed = 299792458.0;
  return power_w * wavelength_m / (planck * light_speed);
}

}  // namespace nvoc
