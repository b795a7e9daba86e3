#ifndef NVOC_ANALYSIS_HPP
#define NVOC_ANALYSIS_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "nvoc/objective.hpp"
#include "nvoc/oracle.hpp"

namespace nvoc {

/// Constant-amplitude drive made of one or more tones. In the frame rotating
/// at the carrier the envelope is
///   I + iQ = 2 pi R sum_n exp(i (2 pi f_n t + phi_n)),
/// so a tone at offset f_n is resonant with a transition detuned by f_n and
/// drives it at Rabi frequency R.
struct FlatDrive {
  double rabi_mhz = 0.0;
  double duration_us = 0.0;
  std::vector<double> offsets_mhz{0.0};
  std::vector<double> phases{0.0};

  void validate() const;
  bool single_tone() const { return offsets_mhz.size() == 1; }
};

/// pi pulse (duration 1 / 2R) with tones {0} or {-splitting, 0, +splitting}.
/// Empty `phases` means all zero.
FlatDrive flat_pi_pulse(double rabi_mhz, int tones, double splitting_mhz = 0.0, std::vector<double> phases = {});

/// Phases drawn uniformly from [0, 2 pi) with mt19937_64(seed).
std::vector<double> random_phases(std::uint64_t seed, int tones);

TimeDomainDrive time_domain_drive(const FlatDrive& drive);

/// |0> -> |-1> probability of one transition under a flat drive. Single-tone
/// drives use the exact constant-Hamiltonian exponential, multi-tone drives the
/// time-stepping oracle.
double flat_transfer(const FlatDrive& drive, double detuning_mhz, double amplitude);

using Drive = std::variant<PulseCoefficients, FlatDrive>;

enum class MapMode { single_transition, level_averaged };

struct FidelityGrid {
  std::vector<double> detunings_mhz;
  std::vector<double> amplitudes;
  MatrixXd values;  ///< values(i_detuning, i_amplitude)
  MapMode mode = MapMode::level_averaged;
  int truncation = 0;  ///< Floquet cutoff used (0 for flat drives)
};

/// Axis helper: `count` evenly spaced values over [lo, hi].
std::vector<double> linear_axis(double lo, double hi, int count);

FidelityGrid fidelity_map(const Drive& drive, const std::vector<double>& detunings_mhz,
                          const std::vector<double>& amplitudes, MapMode mode, const HyperfineConfig& hyperfine,
                          const EvaluationOptions& options = {});

struct OdmrCurve {
  std::vector<double> offsets_mhz;  ///< drive frequency relative to the central transition
  std::vector<double> contrast;     ///< fidelity-proportional, unit scale
  std::vector<double> slope;        ///< d contrast / d offset, per MHz
};

/// Sweeps the drive frequency: at offset f every member detuning becomes
/// Delta_i - f and contrast(f) is the weighted level-averaged ensemble fidelity.
OdmrCurve simulate_odmr(const Drive& drive, const RepresentativeEnsemble& ensemble, const HyperfineConfig& hyperfine,
                        const std::vector<double>& offsets_mhz, const EvaluationOptions& options = {});

/// Second-order finite differences (one-sided at the ends), any spacing.
std::vector<double> numerical_slope(const std::vector<double>& x, const std::vector<double>& y);

struct SlopeExtremum {
  double max_abs_slope = 0.0;
  double offset_mhz = 0.0;
};

SlopeExtremum contrast_slope(const OdmrCurve& curve);

struct SensitivityInputs {
  double slope_per_hz = 0.0;        ///< C'
  double readout_time_s = 0.0;      ///< t_R
  double reinit_time_s = 0.0;       ///< t_I
  double decay_constant_s = 0.0;    ///< tau_R
  double photon_rate_per_s = 0.0;   ///< R_0
  double gyromagnetic_hz_per_t = 2.8025e10;

  void validate() const;
};

/// eta = sqrt(2 t_R t_I) / (gamma_e C' tau_R (1 - exp(-t_R / tau_R)) sqrt(R_0)), in T / sqrt(Hz).
double sensitivity(const SensitivityInputs& inputs);

/// Mean information per photon over the readout, tau_R (1 - exp(-t_R / tau_R)) / t_R.
double information_factor(double readout_time_s, double decay_constant_s);

/// Photon rate of an optical power at a wavelength.
double photon_rate(double power_w, double wavelength_m);

}  // namespace nvoc

#endif  // NVOC_ANALYSIS_HPP
