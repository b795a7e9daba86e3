#include "nvoc/pulse.hpp"

#include <algorithm>
#include <cmath>

namespace nvoc {

PulseCoefficients::PulseCoefficients(VectorXd ax, VectorXd ay, double duration_us, double carrier_mhz)
    : ax_(std::move(ax)), ay_(std::move(ay)), duration_us_(duration_us), carrier_mhz_(carrier_mhz) {
  if (ax_.size() < 1) throw ValidationError("harmonics", "at least one frequency component is required");
  if (ax_.size() != ay_.size()) throw ValidationError("harmonics", "a_x and a_y lengths differ");
  if (!(duration_us_ > 0.0) || !std::isfinite(duration_us_)) {
    throw ValidationError("duration", "must be positive and finite");
  }
  if (!ax_.allFinite() || !ay_.allFinite()) throw ValidationError("amplitudes", "must be finite");
}

PulseCoefficients PulseCoefficients::zeros(int harmonics, double duration_us, double carrier_mhz) {
  if (harmonics < 1) throw ValidationError("harmonics", "at least one frequency component is required");
  return {VectorXd::Zero(harmonics), VectorXd::Zero(harmonics), duration_us, carrier_mhz};
}

PulseCoefficients PulseCoefficients::from_flat(const VectorXd& flat, double duration_us, double carrier_mhz) {
  if (flat.size() < 2 || flat.size() % 2 != 0) {
    throw ValidationError("amplitudes", "flat coefficient vector must have even length >= 2");
  }
  const auto n = flat.size() / 2;
  return {flat.head(n), flat.tail(n), duration_us, carrier_mhz};
}

VectorXd PulseCoefficients::flattened() const {
  VectorXd v(2 * ax_.size());
  v << ax_, ay_;
  return v;
}

PulseCoefficients PulseCoefficients::scaled(double factor) const {
  return {ax_ * factor, ay_ * factor, duration_us_, carrier_mhz_};
}

PulseCoefficients PulseCoefficients::stepped(const VectorXd& direction, double beta) const {
  return from_flat(flattened() + beta * direction, duration_us_, carrier_mhz_);
}

Envelope envelope(const PulseCoefficients& pulse, double t_us) {
  Envelope e;
  const double w = pulse.fundamental();
  for (int j = 0; j < pulse.harmonics(); ++j) {
    const double s = 2.0 * std::sin((j + 1) * w * t_us);
    e.i += pulse.ax()(j) * s;
    e.q += pulse.ay()(j) * s;
  }
  return e;
}

double max_rabi(const PulseCoefficients& pulse) {
  const int samples = 64 * pulse.harmonics();
  double peak = 0.0;
  for (int s = 0; s <= samples; ++s) {
    const Envelope e = envelope(pulse, pulse.duration() * s / samples);
    peak = std::max(peak, std::hypot(e.i, e.q));
  }
  return to_frequency(peak);
}

double penalty(const PulseCoefficients& pulse, double p) {
  return -p * pulse.duration() * (pulse.ax().squaredNorm() + pulse.ay().squaredNorm());
}

VectorXd penalty_gradient(const PulseCoefficients& pulse, double p) {
  return -2.0 * p * pulse.duration() * pulse.flattened();
}

}  // namespace nvoc
