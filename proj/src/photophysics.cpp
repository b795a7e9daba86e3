#include "nvoc/photophysics.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace nvoc {

RadialGrid radial_grid(int count, double extent) {
  if (count < 1) throw ValidationError("annuli", "need at least one annulus");
  if (!(extent > 0.0)) throw ValidationError("extent", "must be positive");
  RadialGrid g;
  const double width = extent / count;
  for (int i = 0; i < count; ++i) {
    const double inner = i * width, outer = (i + 1) * width;
    g.radii.push_back(0.5 * (inner + outer));
    g.weights.push_back((outer * outer - inner * inner) / (extent * extent));
  }
  return g;
}

double disc_fraction(double r_inner, double r_outer) {
  if (!(r_outer > 0.0) || r_inner < 0.0) throw ValidationError("radius", "radii must be non-negative");
  const double r = std::min(r_inner, r_outer);
  return (r * r) / (r_outer * r_outer);
}

double beam_intensity(double r, double r0, double i0) {
  if (r < 0.0) throw ValidationError("radius", "must be non-negative");
  if (!(r0 > 0.0)) throw ValidationError("waist", "must be positive");
  return i0 * std::exp(-2.0 * r * r / (r0 * r0));
}

void RateModelConfig::validate() const {
  const RateConstants& k = rates;
  for (double v : {k.radiative, k.excited0_to_singlet, k.excited1_to_singlet, k.singlet_to_ground0,
                   k.singlet_to_ground1}) {
    if (!(v >= 0.0)) throw ValidationError("rates", "rates must be non-negative");
  }
  if (!(k.t1 > 0.0)) throw ValidationError("t1", "must be positive");
  if (!(center_pump_rate >= 0.0)) throw ValidationError("center_pump_rate", "must be non-negative");
  if (!(pump_scale >= 0.0)) throw ValidationError("pump_scale", "must be non-negative");
  if (grid.radii.empty() || grid.radii.size() != grid.weights.size()) {
    throw ValidationError("grid", "radii and weights must be non-empty and equally long");
  }
  double sum = 0.0;
  for (double w : grid.weights) {
    if (w < 0.0) throw ValidationError("grid", "weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("grid", "weights must sum to one");
}

double RateModelConfig::pump_rate(double r) const { return pump_scale * beam_intensity(r, 1.0, center_pump_rate); }

RateMatrix rate_matrix(const RateConstants& k, double pump) {
  RateMatrix q = RateMatrix::Zero();
  auto link = [&](int from, int to, double rate) {
    q(to, from) += rate;
    q(from, from) -= rate;
  };
  link(ground0, excited0, pump);
  link(ground1, excited1, pump);
  link(excited0, ground0, k.radiative);
  link(excited1, ground1, k.radiative);
  link(excited0, singlet, k.excited0_to_singlet);
  link(excited1, singlet, k.excited1_to_singlet);
  link(singlet, ground0, k.singlet_to_ground0);
  link(singlet, ground1, k.singlet_to_ground1);
  link(ground0, ground1, 0.5 / k.t1);
  link(ground1, ground0, 0.5 / k.t1);
  return q;
}

double fluorescence(const RateConstants& rates, const Populations& p) {
  return rates.radiative * (p(excited0) + p(excited1));
}

RateModelState RateModelState::polarized() {
  RateModelState s;
  s.populations(ground0) = 1.0;
  return s;
}

RateModelState RateModelState::mixed() {
  RateModelState s;
  s.populations(ground0) = 0.5;
  s.populations(ground1) = 0.5;
  return s;
}

RateTrajectory rate_evolve(const RateModelState& state, const RateConstants& rates, double pump_rate, double duration,
                           double dt, int record_every) {
  if (!(dt > 0.0)) throw ValidationError("dt", "must be positive");
  if (duration < 0.0) throw ValidationError("duration", "must be non-negative");
  if (record_every < 1) throw ValidationError("record_every", "must be positive");
  const RateMatrix q = rate_matrix(rates, pump_rate);
  const double fastest = (-q.diagonal()).maxCoeff();
  if (dt > 0.1 / fastest) throw ValidationError("dt", "step does not resolve the fastest rate (dt <= 0.1 / max rate)");

  const long steps = std::max(1L, static_cast<long>(std::ceil(duration / dt)));
  const double h = duration / steps;
  RateTrajectory out;
  RateModelState s = state;
  out.states.push_back(s);
  for (long n = 1; n <= steps; ++n) {
    const Populations k1 = q * s.populations;
    const Populations k2 = q * (s.populations + 0.5 * h * k1);
    const Populations k3 = q * (s.populations + 0.5 * h * k2);
    const Populations k4 = q * (s.populations + h * k3);
    s.populations += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s.time = state.time + n * h;
    if (n % record_every == 0 || n == steps) out.states.push_back(s);
  }
  return out;
}

namespace {

RateMatrix propagator(const RateConstants& rates, double pump, double duration) {
  const RateMatrix q = rate_matrix(rates, pump) * duration;
  return q.exp();
}

// exp over `duration` together with the integral of the trajectory:
// returns (E, S) with p(t) = E p(0) and int_0^t p = S p(0).
std::pair<RateMatrix, RateMatrix> propagator_with_integral(const RateConstants& rates, double pump,
                                                           double duration) {
  Eigen::Matrix<double, 2 * level_count, 2 * level_count> a =
      Eigen::Matrix<double, 2 * level_count, 2 * level_count>::Zero();
  a.topLeftCorner<level_count, level_count>() = rate_matrix(rates, pump) * duration;
  a.bottomLeftCorner<level_count, level_count>() = RateMatrix::Identity() * duration;
  const Eigen::Matrix<double, 2 * level_count, 2 * level_count> e = a.exp();
  return {e.topLeftCorner<level_count, level_count>(), e.bottomLeftCorner<level_count, level_count>()};
}

RateMatrix pi_matrix() {
  RateMatrix p = RateMatrix::Identity();
  p(ground0, ground0) = 0.0;
  p(ground1, ground1) = 0.0;
  p(ground0, ground1) = 1.0;
  p(ground1, ground0) = 1.0;
  return p;
}

// Everything one annulus needs to run laser cycles.
struct AnnulusCycle {
  RateMatrix gap;           // dark evolution
  RateMatrix sample;        // one sample interval with the laser on
  RateMatrix to_window;     // laser start -> window start
  RateMatrix window;        // window start -> window end
  RateMatrix window_sum;    // integral over the window
  RateMatrix laser;         // full laser pulse
};

AnnulusCycle annulus_cycle(const RateModelConfig& config, double pump, const PulseTrainSpec& spec) {
  AnnulusCycle c;
  c.gap = propagator(config.rates, 0.0, spec.gap_s);
  c.sample = propagator(config.rates, pump, spec.laser_s / spec.samples);
  c.to_window = propagator(config.rates, pump, spec.window_start_s);
  std::tie(c.window, c.window_sum) =
      propagator_with_integral(config.rates, pump, spec.window_end_s - spec.window_start_s);
  c.laser = propagator(config.rates, pump, spec.laser_s);
  return c;
}

struct LaserPulse {
  std::vector<double> fluorescence;  // per sample, not normalized
  double window_integral = 0.0;
  Populations end;
};

LaserPulse run_laser(const AnnulusCycle& c, const RateConstants& rates, const Populations& start, int samples) {
  LaserPulse out;
  out.fluorescence.reserve(static_cast<std::size_t>(samples + 1));
  Populations p = start;
  out.fluorescence.push_back(fluorescence(rates, p));
  for (int i = 0; i < samples; ++i) {
    p = c.sample * p;
    out.fluorescence.push_back(fluorescence(rates, p));
  }
  out.window_integral = fluorescence(rates, c.window_sum * (c.to_window * start));
  out.end = c.laser * start;
  return out;
}

// Aggregates one cycle of every annulus given the pre-microwave states.
CycleRecord aggregate_cycle(const RateModelConfig& config, const PulseTrainSpec& spec,
                            const std::vector<AnnulusCycle>& annuli, const std::vector<Populations>& before,
                            double bright, std::vector<Populations>* next) {
  const RateMatrix pi = pi_matrix();
  CycleRecord rec;
  rec.fluorescence.assign(static_cast<std::size_t>(spec.samples + 1), 0.0);
  rec.reference.assign(static_cast<std::size_t>(spec.samples + 1), 0.0);
  double ref_integral = 0.0, pi_integral = 0.0;
  for (std::size_t a = 0; a < annuli.size(); ++a) {
    const double w = config.grid.weights[a];
    const Populations flipped = spec.pi_pulse ? Populations(pi * before[a]) : before[a];
    const LaserPulse with_pi = run_laser(annuli[a], config.rates, annuli[a].gap * flipped, spec.samples);
    const LaserPulse reference = run_laser(annuli[a], config.rates, annuli[a].gap * before[a], spec.samples);
    for (std::size_t i = 0; i < rec.fluorescence.size(); ++i) {
      rec.fluorescence[i] += w * with_pi.fluorescence[i] / bright;
      rec.reference[i] += w * reference.fluorescence[i] / bright;
    }
    pi_integral += w * with_pi.window_integral;
    ref_integral += w * reference.window_integral;
    if (next) (*next)[a] = with_pi.end;
  }
  rec.contrast = (ref_integral - pi_integral) / (bright * spec.contrast_norm_s);
  rec.plateau = rec.fluorescence.back();
  return rec;
}

std::vector<AnnulusCycle> all_annuli(const RateModelConfig& config, const PulseTrainSpec& spec) {
  std::vector<AnnulusCycle> out;
  out.reserve(config.grid.radii.size());
  for (double r : config.grid.radii) out.push_back(annulus_cycle(config, config.pump_rate(r), spec));
  return out;
}

// Periodic state of the affine-free cycle map s -> A s, normalized to unit sum.
Populations fixed_point(const RateMatrix& a) {
  RateMatrix m = a - RateMatrix::Identity();
  m.row(0).setOnes();
  Populations rhs = Populations::Zero();
  rhs(0) = 1.0;
  return m.fullPivLu().solve(rhs);
}

}  // namespace

RateModelState rate_propagate(const RateModelState& state, const RateConstants& rates, double pump_rate,
                              double duration) {
  if (duration < 0.0) throw ValidationError("duration", "must be non-negative");
  RateModelState out;
  out.populations = propagator(rates, pump_rate, duration) * state.populations;
  out.time = state.time + duration;
  return out;
}

RateModelState apply_ideal_pi(const RateModelState& state) {
  RateModelState out = state;
  std::swap(out.populations(ground0), out.populations(ground1));
  return out;
}

Populations steady_state(const RateConstants& rates, double pump_rate) {
  return fixed_point(RateMatrix::Identity() + rate_matrix(rates, pump_rate) / (1.0 + (-rate_matrix(rates, pump_rate).diagonal()).maxCoeff()));
}

ExponentialFit fit_recovery(const std::vector<double>& t, const std::vector<double>& y, double y_inf) {
  if (t.size() != y.size() || t.size() < 3) throw ValidationError("fit", "need at least 3 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = y_inf - y[i];
    if (!(d > 0.0)) continue;
    const double ly = std::log(d);
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
    ++n;
  }
  ExponentialFit fit;
  if (n < 3) return fit;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  if (!(slope < 0.0)) return fit;
  fit.time_constant = -1.0 / slope;
  fit.amplitude = std::exp(intercept);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double model = y_inf - fit.amplitude * std::exp(-t[i] / fit.time_constant);
    ss_res += (y[i] - model) * (y[i] - model);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  fit.good = fit.r_squared >= 0.99;
  return fit;
}

ExponentialFit reinit_time(double r, const RateModelConfig& config) {
  config.validate();
  if (r < 0.0) throw ValidationError("radius", "must be non-negative");
  const double pump = config.pump_rate(r);
  const RateMatrix q = rate_matrix(config.rates, pump);
  const Populations target = steady_state(config.rates, pump);
  // Slowest relaxation rate sets the fitting span.
  const Eigen::VectorXcd ev = Eigen::EigenSolver<RateMatrix>(q, false).eigenvalues();
  double slowest = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double rate = -ev(i).real();
    if (rate > 1e-9 * (-q.diagonal()).maxCoeff() && (slowest == 0.0 || rate < slowest)) slowest = rate;
  }
  const double span = 5.0 / slowest;
  const int samples = 200;
  const RateMatrix step = propagator(config.rates, pump, span / samples);
  Populations p = RateMatrix(pi_matrix()) * target;
  std::vector<double> t, y;
  for (int i = 0; i <= samples; ++i) {
    t.push_back(i * span / samples);
    y.push_back(p(ground0));
    p = step * p;
  }
  return fit_recovery(t, y, target(ground0));
}

void PulseTrainSpec::validate() const {
  if (!(laser_s > 0.0)) throw ValidationError("laser", "laser pulse length must be positive");
  if (gap_s < 0.0) throw ValidationError("gap", "must be non-negative");
  if (cycles < 1) throw ValidationError("cycles", "need at least one cycle");
  if (!(window_start_s >= 0.0) || !(window_end_s >= window_start_s) || window_end_s > laser_s) {
    throw ValidationError("window", "contrast window must lie inside the laser pulse");
  }
  if (samples < 1) throw ValidationError("samples", "need at least one sample");
  if (!(contrast_norm_s > 0.0)) throw ValidationError("contrast_norm", "must be positive");
}

PulseTrainSpec PulseTrainSpec::for_laser(double laser_s) {
  PulseTrainSpec s;
  s.laser_s = laser_s;
  s.window_end_s = std::min(2.7e-3, laser_s);
  s.window_start_s = std::min(0.3e-3, s.window_end_s);
  return s;
}

double bright_fluorescence(const RateModelConfig& config) {
  config.validate();
  double total = 0.0;
  for (std::size_t a = 0; a < config.grid.radii.size(); ++a) {
    const double pump = config.pump_rate(config.grid.radii[a]);
    // 1 us settles the excited state (~15 ns) while the ground state barely moves.
    const RateModelState s = rate_propagate(RateModelState::polarized(), config.rates, pump, 1e-6);
    total += config.grid.weights[a] * fluorescence(config.rates, s.populations);
  }
  if (!(total > 0.0)) throw ValidationError("center_pump_rate", "no fluorescence: pump rate is zero");
  return total;
}

PulseTrainResult pulse_train(const PulseTrainSpec& spec, const RateModelConfig& config) {
  spec.validate();
  config.validate();
  const double bright = bright_fluorescence(config);
  const std::vector<AnnulusCycle> annuli = all_annuli(config, spec);
  PulseTrainResult out;
  for (int i = 0; i <= spec.samples; ++i) out.times.push_back(i * spec.laser_s / spec.samples);
  out.ground0.resize(static_cast<Eigen::Index>(annuli.size()), spec.cycles);
  // The train starts after long illumination: every annulus at its CW steady state.
  std::vector<Populations> state(annuli.size());
  for (std::size_t a = 0; a < annuli.size(); ++a) {
    state[a] = steady_state(config.rates, config.pump_rate(config.grid.radii[a]));
  }
  std::vector<Populations> next(annuli.size());
  for (int n = 0; n < spec.cycles; ++n) {
    out.cycles.push_back(aggregate_cycle(config, spec, annuli, state, bright, &next));
    state = next;
    for (std::size_t a = 0; a < annuli.size(); ++a) out.ground0(static_cast<Eigen::Index>(a), n) = state[a](ground0);
  }
  return out;
}

CycleRecord steady_cycle(const PulseTrainSpec& spec, const RateModelConfig& config) {
  spec.validate();
  config.validate();
  const double bright = bright_fluorescence(config);
  const std::vector<AnnulusCycle> annuli = all_annuli(config, spec);
  const RateMatrix pi = spec.pi_pulse ? pi_matrix() : RateMatrix(RateMatrix::Identity());
  std::vector<Populations> before(annuli.size());
  for (std::size_t a = 0; a < annuli.size(); ++a) before[a] = fixed_point(annuli[a].laser * annuli[a].gap * pi);
  return aggregate_cycle(config, spec, annuli, before, bright, nullptr);
}

std::vector<LaserSweepPoint> contrast_vs_laser_duration(const std::vector<double>& laser_s,
                                                        const RateModelConfig& config) {
  if (laser_s.empty()) throw ValidationError("laser", "sweep needs at least one laser pulse length");
  std::vector<LaserSweepPoint> out;
  for (double t : laser_s) {
    const CycleRecord c = steady_cycle(PulseTrainSpec::for_laser(t), config);
    out.push_back({t, c.contrast, c.plateau});
  }
  return out;
}

double asymptotic_contrast(const RateModelConfig& config) {
  config.validate();
  const PulseTrainSpec spec;
  const double bright = bright_fluorescence(config);
  const std::vector<AnnulusCycle> annuli = all_annuli(config, spec);
  std::vector<Populations> before(annuli.size());
  for (std::size_t a = 0; a < annuli.size(); ++a) {
    before[a] = steady_state(config.rates, config.pump_rate(config.grid.radii[a]));
  }
  return aggregate_cycle(config, spec, annuli, before, bright, nullptr).contrast;
}

ExponentialFit aggregate_recovery(const RateModelConfig& config, double start_s, double end_s) {
  config.validate();
  if (!(start_s >= 0.0) || !(end_s > start_s)) throw ValidationError("window", "fit window must be increasing");
  const int samples = 200;
  const RateMatrix pi = pi_matrix();
  std::vector<double> t(samples + 1), f_pi(samples + 1, 0.0);
  for (int i = 0; i <= samples; ++i) t[static_cast<std::size_t>(i)] = start_s + (end_s - start_s) * i / samples;
  double f_ref = 0.0;
  for (std::size_t a = 0; a < config.grid.radii.size(); ++a) {
    const double pump = config.pump_rate(config.grid.radii[a]);
    const double w = config.grid.weights[a];
    const Populations s = steady_state(config.rates, pump);
    f_ref += w * fluorescence(config.rates, s);
    const RateMatrix step = propagator(config.rates, pump, (end_s - start_s) / samples);
    Populations p = propagator(config.rates, pump, start_s) * (pi * s);
    for (int i = 0; i <= samples; ++i) {
      f_pi[static_cast<std::size_t>(i)] += w * fluorescence(config.rates, p);
      p = step * p;
    }
  }
  return fit_recovery(t, f_pi, f_ref);
}

RateModelConfig calibrate_pump(RateModelConfig config, double target_s) {
  if (!(target_s > 0.0)) throw ValidationError("target", "must be positive");
  auto tau = [&](double rate) {
    config.center_pump_rate = rate;
    return aggregate_recovery(config).time_constant;
  };
  // tau falls monotonically with the pump rate.
  double lo = 1.0, hi = 1e8;
  if (tau(hi) > target_s || tau(lo) < target_s) {
    throw NumericalError("pump calibration target outside the reachable time-constant range");
  }
  for (int it = 0; it < 100 && hi / lo > 1.0 + 1e-12; ++it) {
    const double mid = std::sqrt(lo * hi);
    (tau(mid) > target_s ? lo : hi) = mid;
  }
  config.center_pump_rate = std::sqrt(lo * hi);
  return config;
}

}  // namespace nvoc
