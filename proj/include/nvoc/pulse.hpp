#ifndef NVOC_PULSE_HPP
#define NVOC_PULSE_HPP

#include "nvoc/types.hpp"

namespace nvoc {

/// Smooth control pulse in a truncated sine basis.
///
///   I(t) = sum_j 2 a_jx sin(j W t),   Q(t) = sum_j 2 a_jy sin(j W t),   W = pi / t_p
///
/// Amplitudes are angular (rad/us). The basis period is 2 t_p, so the pulse
/// occupies the first half period. The carrier is bookkeeping only: all
/// dynamics are evaluated in the frame rotating at the carrier.
class PulseCoefficients {
 public:
  PulseCoefficients(VectorXd ax, VectorXd ay, double duration_us, double carrier_mhz = 0.0);

  static PulseCoefficients zeros(int harmonics, double duration_us, double carrier_mhz = 0.0);
  /// Inverse of flattened(): first half a_x, second half a_y.
  static PulseCoefficients from_flat(const VectorXd& flat, double duration_us, double carrier_mhz = 0.0);

  int harmonics() const { return static_cast<int>(ax_.size()); }
  double duration() const { return duration_us_; }
  double carrier_mhz() const { return carrier_mhz_; }
  double fundamental() const { return pi / duration_us_; }

  const VectorXd& ax() const { return ax_; }
  const VectorXd& ay() const { return ay_; }

  VectorXd flattened() const;
  PulseCoefficients scaled(double factor) const;
  PulseCoefficients stepped(const VectorXd& direction, double beta) const;

  bool operator==(const PulseCoefficients&) const = default;

 private:
  VectorXd ax_;
  VectorXd ay_;
  double duration_us_;
  double carrier_mhz_;
};

struct Envelope {
  double i = 0.0;
  double q = 0.0;
};

Envelope envelope(const PulseCoefficients& pulse, double t_us);

/// Peak instantaneous Rabi frequency sqrt(I^2 + Q^2) / 2 pi in MHz, sampled on
/// 64 N_f + 1 points across [0, t_p].
double max_rabi(const PulseCoefficients& pulse);

/// -p t_p sum a_jk^2
double penalty(const PulseCoefficients& pulse, double p);
VectorXd penalty_gradient(const PulseCoefficients& pulse, double p);

}  // namespace nvoc

#endif  // NVOC_PULSE_HPP
