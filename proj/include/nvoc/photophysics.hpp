#ifndef NVOC_PHOTOPHYSICS_HPP
#define NVOC_PHOTOPHYSICS_HPP

#include <array>
#include <vector>

#include "nvoc/types.hpp"

namespace nvoc {

/// Five-level NV photophysics: ground ms=0, ground ms=-1, their spin-conserving
/// excited states and one effective singlet (shelving) level. Rates in 1/s,
/// times in s.
enum Level : int { ground0 = 0, ground1 = 1, excited0 = 2, excited1 = 3, singlet = 4 };
inline constexpr int level_count = 5;

using Populations = Eigen::Matrix<double, level_count, 1>;
using RateMatrix = Eigen::Matrix<double, level_count, level_count>;

struct RateConstants {
  double radiative = 65.9e6;          ///< e -> g, spin conserving
  double excited0_to_singlet = 11.1e6;
  double excited1_to_singlet = 91.8e6;
  double singlet_to_ground0 = 4.87e6;
  double singlet_to_ground1 = 2.04e6;
  double t1 = 7.1e-3;                 ///< ground-state spin relaxation; exchange rate 1 / (2 T1)
};

struct RadialGrid {
  std::vector<double> radii;    ///< annulus centers in units of r0
  std::vector<double> weights;  ///< area fractions, sum to one
};

/// `count` annuli of equal width over [0, extent * r0], weighted by area.
RadialGrid radial_grid(int count = 50, double extent = 1.5);

/// Fraction of a uniform-density disc of radius r_outer lying within r_inner.
double disc_fraction(double r_inner, double r_outer);

/// I0 exp(-2 r^2 / r0^2).
double beam_intensity(double r, double r0, double i0);

struct RateModelConfig {
  RateConstants rates;
  double center_pump_rate = 0.0;  ///< g -> e pump rate at r = 0, 1/s
  double pump_scale = 1.0;        ///< multiplies the pump everywhere (intensity robustness sweeps)
  RadialGrid grid = radial_grid();

  void validate() const;
  /// Pump rate at radius r (units of r0).
  double pump_rate(double r) const;
};

/// Generator Q of dp/dt = Q p for a given pump rate; columns sum to zero.
RateMatrix rate_matrix(const RateConstants& rates, double pump_rate);

/// Emission rate k_r (p_e0 + p_e1) of one center, photons per second.
double fluorescence(const RateConstants& rates, const Populations& p);

struct RateModelState {
  Populations populations = Populations::Zero();
  double time = 0.0;

  static RateModelState polarized();  ///< everything in ground ms=0
  static RateModelState mixed();      ///< ground population split evenly
};

struct RateTrajectory {
  std::vector<RateModelState> states;  ///< every `record_every` steps plus the final state
};

/// Fixed-step RK4. Rejects dt above 0.1 / (fastest rate).
RateTrajectory rate_evolve(const RateModelState& state, const RateConstants& rates, double pump_rate, double duration,
                           double dt, int record_every = 1);

/// exp(Q t) p, the exact solution of the linear rate equations.
RateModelState rate_propagate(const RateModelState& state, const RateConstants& rates, double pump_rate,
                              double duration);

/// Swaps the two ground-state populations; everything else is untouched.
RateModelState apply_ideal_pi(const RateModelState& state);

/// Null vector of Q (continuous pumping).
Populations steady_state(const RateConstants& rates, double pump_rate);

struct ExponentialFit {
  double time_constant = 0.0;
  double amplitude = 0.0;
  double r_squared = 0.0;
  bool good = false;  ///< r_squared >= 0.99
};

/// Fits y(t) = y_inf - A exp(-t / tau) with y_inf given (log-linear least
/// squares on the positive deficit); R^2 is computed in linear space.
ExponentialFit fit_recovery(const std::vector<double>& t, const std::vector<double>& y, double y_inf);

/// Recovery of the ms=0 ground population of a center at radius r, starting
/// from full inversion into ms=-1 with the laser on.
ExponentialFit reinit_time(double r, const RateModelConfig& config);

struct PulseTrainSpec {
  double laser_s = 3e-3;           ///< t_l
  double gap_s = 1.85e-6;          ///< dark time holding the microwave pulse
  int cycles = 110;
  double window_start_s = 0.3e-3;  ///< contrast window inside the laser pulse
  double window_end_s = 2.7e-3;
  bool pi_pulse = true;
  int samples = 300;               ///< fluorescence samples per laser pulse
  double contrast_norm_s = 2.4e-3; ///< contrast divides the window integral by this, not the clipped window

  void validate() const;
  /// Default 0.3-2.7 ms window cut off at the end of the pulse; empty when t_l <= 0.3 ms.
  static PulseTrainSpec for_laser(double laser_s);
};

struct CycleRecord {
  std::vector<double> fluorescence;  ///< aggregate, normalized to the bright level, per sample
  std::vector<double> reference;     ///< same cycle with the pi pulse skipped
  double contrast = 0.0;
  double plateau = 0.0;              ///< last fluorescence sample
};

struct PulseTrainResult {
  std::vector<double> times;         ///< sample times within a laser pulse
  std::vector<CycleRecord> cycles;
  MatrixXd ground0;                  ///< ms=0 population per (annulus, cycle) at the end of the laser pulse
};

/// Aggregate fluorescence of a fully polarized ensemble at the start of the
/// laser pulse; all fluorescence values are reported relative to it.
double bright_fluorescence(const RateModelConfig& config);

/// Cycles starting from the CW laser steady state: dark gap (pi pulse at its
/// start), then the laser pulse. Contrast per cycle is
///   int_window (F_ref - F_pi) dt / (window length of the full-length pulse),
/// in units of the bright level, with F_ref the same cycle without the pi pulse.
PulseTrainResult pulse_train(const PulseTrainSpec& spec, const RateModelConfig& config);

/// Contrast and end-of-pulse fluorescence once the cycle has reached its
/// periodic steady state (fixed point of the linear cycle map).
CycleRecord steady_cycle(const PulseTrainSpec& spec, const RateModelConfig& config);

struct LaserSweepPoint {
  double laser_s = 0.0;
  double contrast = 0.0;
  double plateau = 0.0;
};

std::vector<LaserSweepPoint> contrast_vs_laser_duration(const std::vector<double>& laser_s,
                                                        const RateModelConfig& config);

/// Contrast with the ensemble fully reinitialized before every pulse (t_l -> infinity).
double asymptotic_contrast(const RateModelConfig& config);

/// Recovery of the aggregate contrast signal F_ref - F_pi after one pi pulse
/// applied to the continuously pumped ensemble, fitted over [start, end].
ExponentialFit aggregate_recovery(const RateModelConfig& config, double start_s = 0.3e-3, double end_s = 2.7e-3);

/// Center pump rate for which aggregate_recovery gives `target_s`.
/// Bisection in log(rate); returns the calibrated config.
RateModelConfig calibrate_pump(RateModelConfig config, double target_s = 1.4e-3);

}  // namespace nvoc

#endif  // NVOC_PHOTOPHYSICS_HPP
