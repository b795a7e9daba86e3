#include <doctest.h>

#include <random>

#include "nvoc/photophysics.hpp"

using namespace nvoc;

namespace {

const RateModelConfig& calibrated() {
  static const RateModelConfig c = calibrate_pump(RateModelConfig{});
  return c;
}

const std::vector<double> sweep_s{0.3e-3, 1e-3, 2e-3, 3e-3, 5e-3, 10e-3, 20e-3, 50e-3};

bool non_decreasing(const std::vector<LaserSweepPoint>& pts) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].contrast < pts[i - 1].contrast) return false;
  }
  return true;
}

bool reinit_increasing(const RateModelConfig& c) {
  double prev = 0.0;
  for (double r : c.grid.radii) {
    const ExponentialFit f = reinit_time(r, c);
    if (!(f.time_constant > prev)) return false;
    prev = f.time_constant;
  }
  return true;
}

}  // namespace

TEST_SUITE("photophysics") {

TEST_CASE("beam and disc geometry") {
  CHECK(beam_intensity(0.0, 1.0, 5.0) == 5.0);
  CHECK(beam_intensity(2.0, 2.0, 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(beam_intensity(1.0, 1.0, 1.0) == doctest::Approx(0.135).epsilon(0.01));
  CHECK(disc_fraction(0.5, 1.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(beam_intensity(-1.0, 1.0, 1.0), ValidationError);

  const RadialGrid g = radial_grid(50, 1.5);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.radii.size(); ++i) {
    const double inner = 0.03 * static_cast<double>(i), outer = inner + 0.03;
    CHECK(g.weights[i] == doctest::Approx((outer * outer - inner * inner) / 2.25).epsilon(1e-12));
    sum += g.weights[i];
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("rate matrix conserves probability") {
  const RateMatrix q = rate_matrix(RateConstants{}, 2e3);
  for (int c = 0; c < level_count; ++c) {
    CHECK(std::abs(q.col(c).sum()) < 1e-6 * std::abs(q(c, c)) + 1e-12);
    for (int r = 0; r < level_count; ++r) {
      if (r != c) CHECK(q(r, c) >= 0.0);
    }
  }
}

TEST_CASE("dark evolution relaxes toward the ground mix with T1") {
  const RateConstants k;
  const RateModelState s = rate_propagate(RateModelState::polarized(), k, 0.0, 3e-3);
  // the propagator squares a matrix with ~1e8 /s rates, so ~1e-11 is its floor
  CHECK(std::abs(s.populations(ground0) - (0.5 + 0.5 * std::exp(-3e-3 / k.t1))) < 1e-9);
  CHECK(s.populations(excited0) == 0.0);
  CHECK(s.populations(singlet) == 0.0);
}

TEST_CASE("optical pumping polarizes a mixed ground state") {
  const RateConstants k;
  const RateModelState s = rate_propagate(RateModelState::mixed(), k, 5e3, 20e-3);
  CHECK(s.populations(ground0) > 0.6);
  const Populations ss = steady_state(k, 5e3);
  CHECK(std::abs(ss.sum() - 1.0) < 1e-12);
  CHECK(s.populations(ground0) == doctest::Approx(ss(ground0)).epsilon(1e-3));
  CHECK((rate_matrix(k, 5e3) * ss).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("integrator conserves probability and matches the matrix exponential") {
  const RateConstants k;
  const double pump = calibrated().center_pump_rate;
  const RateTrajectory tr = rate_evolve(RateModelState::mixed(), k, pump, 20e-3, 6e-10, 1000000);
  double worst = 0.0;
  for (const auto& s : tr.states) worst = std::max(worst, std::abs(s.populations.sum() - 1.0));
  CHECK(worst < 1e-9);
  const RateModelState exact = rate_propagate(RateModelState::mixed(), k, pump, 20e-3);
  CHECK((tr.states.back().populations - exact.populations).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(tr.states.back().time == doctest::Approx(20e-3));
  CHECK_THROWS_AS(rate_evolve(RateModelState::mixed(), k, pump, 1e-3, 1e-6), ValidationError);
}

TEST_CASE("ideal pi pulse") {
  const RateModelState flipped = apply_ideal_pi(RateModelState::polarized());
  CHECK(flipped.populations(ground1) == 1.0);
  CHECK(flipped.populations(ground0) == 0.0);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RateModelState s;
  for (int i = 0; i < level_count; ++i) s.populations(i) = u(rng);
  s.populations /= s.populations.sum();
  CHECK(apply_ideal_pi(apply_ideal_pi(s)).populations == s.populations);

  // relabeling the non-ground levels commutes with the pulse
  auto relabel = [](RateModelState x) {
    const double e0 = x.populations(excited0);
    x.populations(excited0) = x.populations(singlet);
    x.populations(singlet) = x.populations(excited1);
    x.populations(excited1) = e0;
    return x;
  };
  CHECK(apply_ideal_pi(relabel(s)).populations == relabel(apply_ideal_pi(s)).populations);
}

TEST_CASE("exponential fit") {
  std::vector<double> t, y, bad;
  for (int i = 0; i <= 50; ++i) {
    t.push_back(i * 1e-4);
    y.push_back(1.0 - 0.4 * std::exp(-t.back() / 1.3e-3));
    bad.push_back(1.0 - 0.5 * std::exp(-t.back() / 1e-4) - 0.5 * std::exp(-t.back() / 2e-2));
  }
  const ExponentialFit f = fit_recovery(t, y, 1.0);
  CHECK(f.time_constant == doctest::Approx(1.3e-3).epsilon(1e-10));
  CHECK(f.amplitude == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(f.good);
  CHECK_FALSE(fit_recovery(t, bad, 1.0).good);
}

TEST_CASE("calibration hits the target recovery constant") {
  const ExponentialFit f = aggregate_recovery(calibrated());
  CHECK(f.time_constant == doctest::Approx(1.4e-3).epsilon(1e-6));
  CHECK(f.good);
  CHECK(calibrated().center_pump_rate > 0.0);
}

TEST_CASE("reinitialization time") {
  const RateModelConfig& c = calibrated();
  CHECK(reinit_increasing(c));
  for (double r : {0.0, 0.5, 1.0}) CHECK(reinit_time(r, c).good);
  RateModelConfig doubled = c;
  doubled.pump_scale = 2.0;
  for (double r : {0.0, 0.7, 1.3}) CHECK(reinit_time(r, doubled).time_constant < reinit_time(r, c).time_constant);
}

TEST_CASE("no microwave pulse gives no contrast") {
  PulseTrainSpec s;
  s.cycles = 1;
  s.pi_pulse = false;
  const PulseTrainResult r = pulse_train(s, calibrated());
  REQUIRE(r.cycles.size() == 1);
  CHECK(r.cycles[0].contrast == 0.0);
}

TEST_CASE("aggregate fluorescence is the weighted sum over annuli") {
  RateModelConfig c = calibrated();
  c.grid = radial_grid(5, 1.5);
  PulseTrainSpec s;
  s.cycles = 3;
  s.samples = 20;
  const PulseTrainResult all = pulse_train(s, c);
  std::vector<double> sum(all.times.size(), 0.0);
  for (std::size_t a = 0; a < c.grid.radii.size(); ++a) {
    RateModelConfig one = c;
    one.grid = RadialGrid{{c.grid.radii[a]}, {1.0}};
    const PulseTrainResult r = pulse_train(s, one);
    const double scale = c.grid.weights[a] * bright_fluorescence(one);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += scale * r.cycles.back().fluorescence[i];
  }
  const double bright = bright_fluorescence(c);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    CHECK(all.cycles.back().fluorescence[i] * bright == doctest::Approx(sum[i]).epsilon(1e-12));
  }
}

TEST_CASE("contrast versus laser duration") {
  const std::vector<LaserSweepPoint> pts = contrast_vs_laser_duration(sweep_s, calibrated());
  CHECK(non_decreasing(pts));
  const double asymptote = asymptotic_contrast(calibrated());
  CHECK(pts[6].contrast == doctest::Approx(asymptote).epsilon(0.02));
  CHECK(pts[3].contrast <= pts[6].contrast);
  CHECK_THROWS_AS(contrast_vs_laser_duration({}, calibrated()), ValidationError);
}

TEST_CASE("steady cycle matches a long train") {
  PulseTrainSpec s;
  s.samples = 30;
  const PulseTrainResult r = pulse_train(s, calibrated());
  const CycleRecord c = steady_cycle(s, calibrated());
  CHECK(r.cycles.back().contrast == doctest::Approx(c.contrast).epsilon(1e-6));
  CHECK(r.cycles.back().plateau == doctest::Approx(c.plateau).epsilon(1e-6));
}

TEST_CASE("inner disc is hysteresis-free at 3 ms") {
  PulseTrainSpec s;
  s.samples = 30;
  RateModelConfig inner = calibrated();
  inner.grid = radial_grid(10, 0.5);
  const PulseTrainResult in = pulse_train(s, inner);
  const double inner_dev = std::abs(in.cycles.front().contrast / in.cycles.back().contrast - 1.0);
  CHECK(inner_dev < 0.1);
  // the edge of the beam is where the memory lives
  const PulseTrainResult whole = pulse_train(s, calibrated());
  CHECK(std::abs(whole.cycles.front().contrast / whole.cycles.back().contrast - 1.0) > inner_dev);
}

TEST_CASE("qualitative properties survive a factor 6 in pump intensity") {
  for (double scale : {6.0, 1.0 / 6.0}) {
    CAPTURE(scale);
    RateModelConfig c = calibrated();
    c.pump_scale = scale;
    CHECK(reinit_increasing(c));
    RateModelConfig doubled = c;
    doubled.pump_scale = 2.0 * scale;
    CHECK(reinit_time(0.5, doubled).time_constant < reinit_time(0.5, c).time_constant);
    const std::vector<LaserSweepPoint> pts = contrast_vs_laser_duration(sweep_s, c);
    CHECK(non_decreasing(pts));
    CHECK(pts.back().contrast == doctest::Approx(asymptotic_contrast(c)).epsilon(0.02));
    const RateModelState s = rate_propagate(RateModelState::mixed(), c.rates, c.pump_rate(0.0), 20e-3);
    CHECK(std::abs(s.populations.sum() - 1.0) < 1e-9);
    PulseTrainSpec off;
    off.cycles = 1;
    off.pi_pulse = false;
    CHECK(pulse_train(off, c).cycles[0].contrast == 0.0);
  }
}

TEST_CASE("configuration checks") {
  RateModelConfig c;
  c.grid.weights[0] += 0.1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  PulseTrainSpec s;
  s.window_end_s = 5e-3;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  RateModelConfig dark;
  CHECK_THROWS_AS(bright_fluorescence(dark), ValidationError);
}

}  // TEST_SUITE
