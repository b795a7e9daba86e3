#include <doctest.h>

#include <algorithm>
#include <random>

#include "nvoc/analysis.hpp"
#include "nvoc/ensemble.hpp"
#include "support.hpp"

using namespace nvoc;

namespace {

std::vector<double> shifted(std::vector<double> v, double by) {
  for (auto& x : v) x += by;
  return v;
}

SensitivityInputs reference_inputs() {
  SensitivityInputs in;
  in.slope_per_hz = 2e-8;
  in.readout_time_s = 3e-3;
  in.reinit_time_s = 3e-3;
  in.decay_constant_s = 1.4e-3;
  in.photon_rate_per_s = 3e13;
  return in;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("flat pi pulses") {
  const FlatDrive one = flat_pi_pulse(1.4, 1);
  CHECK(one.duration_us * 1e3 == doctest::Approx(357.142857).epsilon(1e-8));
  CHECK(one.offsets_mhz == std::vector<double>{0.0});
  const FlatDrive three = flat_pi_pulse(1.4, 3, 2.16);
  CHECK(three.offsets_mhz == std::vector<double>{-2.16, 0.0, 2.16});
  CHECK(three.phases == std::vector<double>{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(flat_pi_pulse(1.4, 2, 2.16), ValidationError);
  CHECK_THROWS_AS(flat_pi_pulse(1.4, 3), ValidationError);
  CHECK_THROWS_AS(flat_pi_pulse(0.0, 1), ValidationError);
  CHECK(random_phases(4, 3) == random_phases(4, 3));
  CHECK_FALSE(random_phases(4, 3) == random_phases(5, 3));
}

TEST_CASE("single-tone flat transfer follows the Rabi formula") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> rabi(0.5, 3.0), det(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double r = rabi(rng), d = det(rng);
    CHECK(std::abs(flat_transfer(flat_pi_pulse(r, 1), d, 1.0) - testing::rabi_formula(r, d)) < 1e-8);
  }
  CHECK(flat_transfer(flat_pi_pulse(1.4, 1), 2.16, 1.0) == doctest::Approx(0.019).epsilon(0.05));
  // relative amplitude scales the Rabi frequency but not the duration
  const FlatDrive d = flat_pi_pulse(1.0, 1);
  const double s = std::sin(pi / 2.0 * 0.8);
  CHECK(flat_transfer(d, 0.0, 0.8) == doctest::Approx(s * s).epsilon(1e-12));
}

TEST_CASE("three-tone drive reduces to the single tone when the side tones are far away") {
  // side tones detuned by 50 MHz barely perturb the central transition
  const FlatDrive three = flat_pi_pulse(1.4, 3, 50.0);
  CHECK(flat_transfer(three, 0.0, 1.0) > 0.98);
}

TEST_CASE("fidelity map values") {
  const std::vector<double> det = linear_axis(-2.0, 2.0, 9), amp = linear_axis(0.8, 1.2, 5);
  const FidelityGrid single = fidelity_map(flat_pi_pulse(1.4, 1), det, amp, MapMode::single_transition,
                                           HyperfineConfig::nitrogen14());
  CHECK(single.values(4, 2) == doctest::Approx(1.0).epsilon(1e-12));
  const FidelityGrid avg = fidelity_map(flat_pi_pulse(1.4, 1), det, amp, MapMode::level_averaged,
                                        HyperfineConfig::nitrogen14());
  CHECK(avg.values(4, 2) == doctest::Approx((1.0 + 2.0 * testing::rabi_formula(1.4, 2.16)) / 3.0).epsilon(1e-10));
  CHECK(avg.values(4, 2) == doctest::Approx(0.346).epsilon(0.01));
  for (Eigen::Index i = 0; i < 9; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      CHECK(single.values(i, j) >= 0.0);
      CHECK(single.values(i, j) <= 1.0);
      CHECK(single.values(i, j) == doctest::Approx(single.values(8 - i, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("level-averaged map is the mean of shifted single-transition maps") {
  std::mt19937_64 rng(9);
  const PulseCoefficients p = testing::random_pulse(rng, 1.4);
  const HyperfineConfig hf = HyperfineConfig::nitrogen14();
  const std::vector<double> det = linear_axis(-1.5, 1.5, 7), amp = linear_axis(0.9, 1.1, 3);
  EvaluationOptions eval;
  eval.truncation = 40;
  for (const Drive& drive : {Drive{p}, Drive{flat_pi_pulse(1.4, 1)}}) {
    const FidelityGrid avg = fidelity_map(drive, det, amp, MapMode::level_averaged, hf, eval);
    MatrixXd mean = MatrixXd::Zero(7, 3);
    for (int k = 0; k < 3; ++k) {
      mean += fidelity_map(drive, shifted(det, hf.offset_mhz(k)), amp, MapMode::single_transition, hf, eval).values;
    }
    mean /= 3.0;
    CHECK((avg.values - mean).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(avg.values.minCoeff() >= 0.0);
    CHECK(avg.values.maxCoeff() <= 1.0);
  }
}

TEST_CASE("three-tone maps with zero and random phases") {
  const HyperfineConfig hf = HyperfineConfig::nitrogen14();
  const std::vector<double> det = linear_axis(-1.0, 1.0, 3), amp = linear_axis(0.9, 1.1, 2);
  const FidelityGrid zero = fidelity_map(flat_pi_pulse(1.4, 3, 2.16), det, amp, MapMode::level_averaged, hf);
  const FidelityGrid random =
      fidelity_map(flat_pi_pulse(1.4, 3, 2.16, random_phases(3, 3)), det, amp, MapMode::level_averaged, hf);
  CHECK(std::abs(zero.values(1, 0) - random.values(1, 0)) <= 1.0);
  CHECK(zero.values.maxCoeff() <= 1.0);
  CHECK(random.values.minCoeff() >= 0.0);
}

TEST_CASE("map rejects bad axes") {
  const HyperfineConfig hf = HyperfineConfig::single();
  CHECK_THROWS_AS(fidelity_map(flat_pi_pulse(1.4, 1), {}, {1.0}, MapMode::single_transition, hf), ValidationError);
  CHECK_THROWS_AS(fidelity_map(flat_pi_pulse(1.4, 1), {0.0}, {-1.0}, MapMode::single_transition, hf),
                  ValidationError);
  CHECK_THROWS_AS(linear_axis(1.0, 0.0, 3), ValidationError);
}

TEST_CASE("ODMR far off resonance") {
  const RepresentativeEnsemble e = sample_representative_ensemble(1.0, 0.1, 4, 3);
  const OdmrCurve far = simulate_odmr(flat_pi_pulse(1.4, 1), e, HyperfineConfig::nitrogen14(), {-200.0, 0.0, 200.0});
  CHECK(far.contrast[0] < 1e-4);
  CHECK(far.contrast[2] < 1e-4);
  CHECK(far.contrast[1] > 0.1);
}

TEST_CASE("ODMR symmetry and permutation invariance") {
  const RepresentativeEnsemble e = sample_representative_ensemble(1.0, 0.1, 4, 3);
  const HyperfineConfig hf = HyperfineConfig::nitrogen14();
  const std::vector<double> offsets = linear_axis(-4.0, 4.0, 33);
  const OdmrCurve c = simulate_odmr(flat_pi_pulse(1.4, 1), e, hf, offsets);
  const std::size_t n = offsets.size();
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(c.contrast[i] == doctest::Approx(c.contrast[n - 1 - i]).epsilon(1e-12));
    CHECK(c.slope[i] == doctest::Approx(-c.slope[n - 1 - i]).epsilon(1e-9));
  }

  RepresentativeEnsemble shuffled = e;
  std::mt19937_64 rng(10);
  std::shuffle(shuffled.members.begin(), shuffled.members.end(), rng);
  const OdmrCurve s = simulate_odmr(flat_pi_pulse(1.4, 1), shuffled, hf, offsets);
  for (std::size_t i = 0; i < n; ++i) CHECK(s.contrast[i] == doctest::Approx(c.contrast[i]).epsilon(1e-14));
}

TEST_CASE("slope extraction") {
  std::vector<double> x = linear_axis(-3.0, 3.0, 61), y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 0.37 * x[i];
  for (double s : numerical_slope(x, y)) CHECK(s == doctest::Approx(0.37).epsilon(1e-12));

  std::fill(y.begin(), y.end(), 0.2);
  for (double s : numerical_slope(x, y)) CHECK(std::abs(s) < 1e-13);
  OdmrCurve flat{x, y, {}};
  CHECK(contrast_slope(flat).max_abs_slope < 1e-13);

  // Gaussian dip: |g'| peaks at f = w / sqrt(8 ln 2) with value d sqrt(8 ln 2 / e) / w
  const double depth = 0.02, fwhm = 0.75;
  x = linear_axis(-3.0, 3.0, 601);
  y.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = -depth * std::exp(-4.0 * std::log(2.0) * x[i] * x[i] / (fwhm * fwhm));
  const SlopeExtremum g = contrast_slope(OdmrCurve{x, y, {}});
  const double oracle = depth * std::sqrt(8.0 * std::log(2.0) / std::exp(1.0)) / fwhm;
  CHECK(g.max_abs_slope == doctest::Approx(oracle).epsilon(0.05));
  CHECK(std::abs(g.offset_mhz) == doctest::Approx(fwhm / std::sqrt(8.0 * std::log(2.0))).epsilon(0.02));

  CHECK_THROWS_AS(numerical_slope({0.0, 1.0}, {0.0, 1.0}), ValidationError);
}

TEST_CASE("sensitivity closed form") {
  const SensitivityInputs in = reference_inputs();
  const double hand = std::sqrt(2.0 * 3e-3 * 3e-3) /
                      (2.8025e10 * 2e-8 * 1.4e-3 * (1.0 - std::exp(-3e-3 / 1.4e-3)) * std::sqrt(3e13));
  CHECK(std::abs(sensitivity(in) / hand - 1.0) < 1e-12);

  SensitivityInputs fast = in;
  fast.readout_time_s = fast.decay_constant_s / 1000.0;
  const double limit = std::sqrt(2.0 * fast.reinit_time_s / fast.readout_time_s) /
                       (fast.gyromagnetic_hz_per_t * fast.slope_per_hz * std::sqrt(fast.photon_rate_per_s));
  CHECK(sensitivity(fast) == doctest::Approx(limit).epsilon(0.01));

  CHECK(information_factor(1.4e-3, 1.4e-3) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(information_factor(1.4e-3, 1.4e-3) == doctest::Approx(0.632).epsilon(1e-3));
}

TEST_CASE("sensitivity monotonicity") {
  const SensitivityInputs base = reference_inputs();
  double prev_slope = 1e300, prev_rate = 1e300, prev_tau = 1e300, prev_reinit = 0.0;
  for (double f : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    SensitivityInputs a = base, b = base, c = base, d = base;
    a.slope_per_hz *= f;
    b.photon_rate_per_s *= f;
    c.decay_constant_s *= f;
    d.reinit_time_s *= f;
    CHECK(sensitivity(a) < prev_slope);
    CHECK(sensitivity(b) < prev_rate);
    CHECK(sensitivity(c) < prev_tau);
    CHECK(sensitivity(d) > prev_reinit);
    prev_slope = sensitivity(a);
    prev_rate = sensitivity(b);
    prev_tau = sensitivity(c);
    prev_reinit = sensitivity(d);
  }
  SensitivityInputs bad = base;
  bad.photon_rate_per_s = 0.0;
  CHECK_THROWS_AS(sensitivity(bad), ValidationError);
}

TEST_CASE("photon rate") {
  CHECK(photon_rate(9.1e-6, 680e-9) == doctest::Approx(9.1e-6 * 680e-9 / (6.62607015e-34 * 299792458.0)));
  CHECK(photon_rate(9.1e-6, 680e-9) == doctest::Approx(3.1e13).epsilon(0.01));
  CHECK_THROWS_AS(photon_rate(0.0, 680e-9), ValidationError);
}

}  // TEST_SUITE
