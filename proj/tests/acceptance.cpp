// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Arguments select criteria (default: all ten).
//
// The optimizer runs go through the CLI into ./acceptance_runs/ and are shared
// between criteria 4, 5, 6, 8 and 9.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "nvoc/analysis.hpp"
#include "nvoc/cli.hpp"
#include "nvoc/config.hpp"
#include "nvoc/fidelity.hpp"
#include "nvoc/floquet.hpp"
#include "nvoc/io.hpp"
#include "nvoc/objective.hpp"
#include "nvoc/optimizer.hpp"
#include "nvoc/oracle.hpp"
#include "nvoc/photophysics.hpp"
#include "support.hpp"

using namespace nvoc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fs::path preset_dir = fs::path(NVOC_SOURCE_DIR) / "presets";
const fs::path run_dir = fs::current_path() / "acceptance_runs";

struct OptimizeRun {
  std::string name;
  std::vector<std::string> overrides;
  fs::path out;
  double seconds = 0.0;
  std::optional<PulseCoefficients> pulse;
  io::Table trace;
  bool converged = false;
  OptimizerConfig config;
};

int optimize_via_cli(const std::vector<std::string>& overrides, const fs::path& out) {
  cli::RunOptions o;
  o.command = "optimize";
  o.config = preset_dir / "n14_hyperfine_default.json";
  o.out = out;
  o.overrides = overrides;
  std::ostringstream log, err;
  const int code = cli::run(o, log, err);
  std::cout << "  [" << out.filename().string() << "] " << log.str() << err.str();
  return code;
}

// Preset run, the same preset with a single transition (hyperfine-blind) and
// the preset at R_lim = 3 MHz. Each runs once per process.
OptimizeRun& optimize_run(const std::string& name) {
  static std::map<std::string, OptimizeRun> runs;
  if (auto it = runs.find(name); it != runs.end()) return it->second;
  OptimizeRun r;
  r.name = name;
  if (name == "blind") r.overrides = {"hyperfine.levels=1", "hyperfine.splitting_mhz=0"};
  if (name == "rabi3") r.overrides = {"pulse.rabi_limit_mhz=3.0"};
  r.out = run_dir / name;
  fs::remove_all(r.out);
  const auto t0 = Clock::now();
  if (optimize_via_cli(r.overrides, r.out) != cli::ok) throw std::runtime_error("optimize " + name + " failed");
  r.seconds = seconds_since(t0);
  r.pulse = io::read_coefficients(r.out / "coefficients.tsv");
  r.trace = io::read_table(r.out / "trace.tsv");
  r.converged = io::read_table(r.out / "coefficients.tsv").meta.at("converged") == "true";
  config::Json doc = config::load(preset_dir / "n14_hyperfine_default.json");
  for (const auto& o : r.overrides) config::apply_override(doc, o);
  r.config = config::optimizer(doc);
  return runs.emplace(name, std::move(r)).first->second;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

double k_averaged_center(const Drive& drive) {
  const FidelityGrid g = fidelity_map(drive, {0.0}, {1.0}, MapMode::level_averaged, HyperfineConfig::nitrogen14());
  return g.values(0, 0);
}

Verdict floquet_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> det(-2.0, 2.0), amp(0.8, 1.2), peak(0.5, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const int k = 1 + i % 3;
    const HyperfineConfig hf = HyperfineConfig::make(k, k == 1 ? 0.0 : 2.16);
    const PulseCoefficients p = testing::random_pulse(rng, peak(rng));
    const EnsembleMember m{det(rng), amp(rng), 1.0};
    const Propagator f = floquet_propagator(p, m, hf);
    const Propagator o = oracle_propagator(time_domain_drive(p), m, hf, 1e-5);
    worst = std::max(worst, operator_norm(f.u - o.u));
  }
  const double t = seconds_since(t0);
  return {worst < 1e-6 && t < 60.0, "max ||U_F - U_oracle|| = " + fmt(worst, 3) + " (< 1e-6), " + fmt(t, 3) + " s (< 60)"};
}

// Worst componentwise relative error of the analytic d(F_st + F_pen)/da against
// central differences with step 1e-6 of the amplitude scale. Components below
// the difference quotient's round-off floor are compared absolutely.
double gradient_error(const PulseCoefficients& pulse, const RepresentativeEnsemble& ensemble,
                      const HyperfineConfig& hf, double p) {
  EvaluationOptions eval;
  eval.truncation = certify_truncation(pulse, ensemble, hf);
  const ObjectiveGradient g = objective_gradient(pulse, ensemble, hf, p, eval);
  const VectorXd a = pulse.flattened();
  const double h = 1e-6 * a.cwiseAbs().maxCoeff();
  const auto total = [&](const VectorXd& x) {
    const PulseCoefficients q = PulseCoefficients::from_flat(x, pulse.duration());
    return ensemble_objective(q, ensemble, hf, eval).value + penalty(q, p);
  };
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    VectorXd up = a, down = a;
    up(i) += h;
    down(i) -= h;
    const double fd = (total(up) - total(down)) / (2.0 * h);
    const double floor = 1e-16 / h * 10.0;
    worst = std::max(worst, std::abs(g.gradient(i) - fd) / std::max(std::abs(fd), floor));
  }
  return worst;
}

Verdict gradient() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> peak(1.0, 4.0);
  const RepresentativeEnsemble e = sample_representative_ensemble(1.0, 0.1, 12, 12);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    worst = std::max(worst, gradient_error(testing::random_pulse(rng, peak(rng)), e, HyperfineConfig::nitrogen14(), 1.0));
  }
  const double t = seconds_since(t0);
  return {worst < 1e-5 && t < 300.0, "max relative error " + fmt(worst, 3) + " (< 1e-5), " + fmt(t, 3) + " s (< 300)"};
}

Verdict rabi_formula() {
  double worst = 0.0;
  for (double r : {0.5, 1.0, 1.4, 2.0, 3.0}) {
    for (double d : {0.0, 0.37, 1.08, 2.16}) {
      const double sim = flat_transfer(flat_pi_pulse(r, 1), d, 1.0);
      worst = std::max(worst, std::abs(sim - testing::rabi_formula(r, d)));
    }
  }
  const double side = flat_transfer(flat_pi_pulse(1.4, 1), 2.16, 1.0);
  // 0.019 is quoted to three decimals
  const bool quoted = std::abs(side - 0.019) < 5e-4;
  return {worst < 1e-8 && quoted,
          "max deviation over 20 (R, Delta) " + fmt(worst, 3) + " (< 1e-8); P(1.4, 2.16) = " + fmt(side, 5) + " (0.019)"};
}

Verdict fidelity_map_center() {
  const auto t0 = Clock::now();
  const OptimizeRun& aware = optimize_run("preset");
  const OptimizeRun& blind = optimize_run("blind");
  const double flat = k_averaged_center(flat_pi_pulse(1.4, 1));
  const double a = k_averaged_center(*aware.pulse);
  const double b = k_averaged_center(*blind.pulse);
  const double t = seconds_since(t0);
  return {a >= 2.0 * flat && a > b && t < 1800.0,
          "K-averaged center: aware " + fmt(a, 4) + ", blind " + fmt(b, 4) + ", flat pi " + fmt(flat, 4) +
              " (aware >= 2 x flat and > blind); optimize " + fmt(aware.seconds, 4) + " s + " + fmt(blind.seconds, 4) +
              " s, total " + fmt(t, 4) + " s (< 1800)"};
}

Verdict grid_convergence() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"preset", "rabi3"}) {
    const OptimizeRun& r = optimize_run(name);
    const HyperfineConfig hf = r.config.hyperfine;
    const EnsembleSpec& s = r.config.ensemble;
    const double f12 = ensemble_objective(*r.pulse, sample_representative_ensemble(s.detuning_range_mhz,
                                                                                  s.amplitude_fraction, 12, 12), hf)
                           .value;
    const double f16 = ensemble_objective(*r.pulse, sample_representative_ensemble(s.detuning_range_mhz,
                                                                                  s.amplitude_fraction, 16, 16), hf)
                           .value;
    pass = pass && std::abs(f12 - f16) < 0.01;
    detail += std::string(detail.empty() ? "" : "; ") + "R_lim " + fmt(r.config.rabi_limit_mhz, 3) + ": F_st(12x12) " +
              fmt(f12, 5) + ", F_st(16x16) " + fmt(f16, 5) + ", |diff| " + fmt(std::abs(f12 - f16), 3) +
              " (< 0.01)" + (r.converged ? "" : ", optimizer flagged unconverged");
  }
  return {pass, detail};
}

Verdict penalty_constraint() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"preset", "blind", "rabi3"}) {
    const OptimizeRun& r = optimize_run(name);
    const double peak = max_rabi(*r.pulse);
    const double limit = r.config.rabi_limit_mhz;
    const auto col = [&](const std::string& c) {
      return static_cast<std::size_t>(std::find(r.trace.columns.begin(), r.trace.columns.end(), c) -
                                      r.trace.columns.begin());
    };
    const std::size_t total = col("F_tot"), before = col("F_tot_before"), ls = col("line_search");
    int rows = 0, drops = 0;
    for (const auto& row : r.trace.rows) {
      if (row.at(ls) != 1.0) continue;
      ++rows;
      if (!(row.at(total) >= row.at(before))) ++drops;
    }
    pass = pass && peak <= 1.02 * limit && drops == 0 && rows > 0;
    detail += std::string(detail.empty() ? "" : "; ") + name + ": max_rabi " + fmt(peak, 5) + " MHz <= " +
              fmt(1.02 * limit, 5) + ", " + std::to_string(drops) + " of " + std::to_string(rows) +
              " line-search rows below F_tot_before";
  }
  return {pass, detail};
}

Verdict photophysics() {
  const auto t0 = Clock::now();
  const config::PhotophysicsSpec spec = config::photophysics(config::load(preset_dir / "photophysics_default.json"));
  const RateModelConfig model = calibrate_pump(spec.model, spec.calibration_target_s);
  const double tau = aggregate_recovery(model).time_constant;
  const bool tau_ok = std::abs(tau - 1.4e-3) <= 0.1 * 1.4e-3;

  const double plateau3 = steady_cycle(PulseTrainSpec::for_laser(3e-3), model).plateau;
  const double plateau20 = steady_cycle(PulseTrainSpec::for_laser(20e-3), model).plateau;
  const double ratio = plateau3 / plateau20;
  const bool plateau_ok = std::abs(ratio - 0.90) <= 0.05;

  const std::vector<LaserSweepPoint> sweep = contrast_vs_laser_duration(spec.laser_sweep_s, model);
  bool monotone = true;
  for (std::size_t i = 1; i < sweep.size(); ++i) monotone = monotone && sweep[i].contrast >= sweep[i - 1].contrast;
  const double asymptote = asymptotic_contrast(model);
  // saturating: the longest pulse sits within 2% of the fully reinitialized limit
  const bool saturating = std::abs(sweep.back().contrast - asymptote) <= 0.02 * asymptote;

  bool increasing = true;
  double previous = 0.0;
  for (double r : model.grid.radii) {
    const double t = reinit_time(r, model).time_constant;
    increasing = increasing && t > previous;
    previous = t;
  }
  const double t = seconds_since(t0);
  return {tau_ok && plateau_ok && monotone && saturating && increasing && t < 600.0,
          "recovery tau " + fmt(tau * 1e3, 5) + " ms (1.4 +- 10%) " + (tau_ok ? "ok" : "FAIL") +
              "; plateau(3 ms) / plateau(20 ms) " + fmt(ratio, 4) + " (0.90 +- 0.05) " + (plateau_ok ? "ok" : "FAIL") +
              "; contrast vs t_l monotone " + (monotone ? "ok" : "FAIL") + ", c(" + fmt(sweep.back().laser_s * 1e3, 3) +
              " ms) " + fmt(sweep.back().contrast, 5) + " vs limit " + fmt(asymptote, 5) + " " +
              (saturating ? "ok" : "FAIL") + "; reinit time strictly increasing over " +
              std::to_string(model.grid.radii.size()) + " radii " + (increasing ? "ok" : "FAIL") + "; " + fmt(t, 4) +
              " s (< 600)"};
}

// Experimental peak contrast assigned to the simulated ODMR curve when
// reconstructing C'. Measured absolute contrasts were 1-2%.
constexpr double experimental_peak_contrast = 0.02;

Verdict sensitivity_estimate() {
  // Hand computation with different inputs, written out step by step.
  SensitivityInputs in;
  in.slope_per_hz = 0.013e-6;
  in.readout_time_s = 2e-3;
  in.reinit_time_s = 5e-3;
  in.decay_constant_s = 1.1e-3;
  in.photon_rate_per_s = 2.5e13;
  in.gyromagnetic_hz_per_t = 2.8e10;
  const long double numerator = std::sqrt(2.0L * 2e-3L * 5e-3L);
  const long double collected = 1.1e-3L * (1.0L - std::exp(-2e-3L / 1.1e-3L));
  const long double denominator = 2.8e10L * 0.013e-6L * collected * std::sqrt(2.5e13L);
  const double hand = static_cast<double>(numerator / denominator);
  const double closed = sensitivity(in);
  const double rel = std::abs(closed - hand) / hand;

  const OptimizeRun& r = optimize_run("preset");
  const OdmrCurve curve = simulate_odmr(*r.pulse, r.config.ensemble.sample(), r.config.hyperfine,
                                        linear_axis(-4.0, 4.0, 401));
  const SlopeExtremum s = contrast_slope(curve);
  const double peak = *std::max_element(curve.contrast.begin(), curve.contrast.end());
  const double slope_per_mhz = s.max_abs_slope * experimental_peak_contrast / peak;
  SensitivityInputs paper;
  paper.slope_per_hz = slope_per_mhz * 1e-6;
  paper.readout_time_s = 3e-3;
  paper.reinit_time_s = 3e-3;
  paper.decay_constant_s = 1.4e-3;
  paper.photon_rate_per_s = photon_rate(9.1e-6, 680e-9);
  const double eta = sensitivity(paper);
  const double nt = eta * 1e9;
  const bool within = nt >= 10.0 / 3.0 && nt <= 30.0;
  return {rel < 1e-12 && within,
          "closed form vs hand " + fmt(rel, 3) + " (< 1e-12); simulated C' " + fmt(s.max_abs_slope, 4) +
              " per MHz at " + fmt(s.offset_mhz, 4) + " MHz, peak " + fmt(peak, 4) + ", scaled to " +
              fmt(slope_per_mhz * 100.0, 4) + " %/MHz; R_0 " + fmt(paper.photon_rate_per_s, 4) + "/s; eta " +
              fmt(nt, 4) + " nT/sqrt(Hz) (10 within x3)"};
}

Verdict determinism() {
  const OptimizeRun& r = optimize_run("preset");
  const fs::path again = run_dir / "preset_repeat";
  fs::remove_all(again);
  if (optimize_via_cli(r.overrides, again) != cli::ok) return {false, "repeat run failed"};
  bool same = true;
  for (const char* file : {"coefficients.tsv", "trace.tsv"}) {
    const std::string a = slurp(r.out / file), b = slurp(again / file);
    same = same && !a.empty() && a == b;
  }
  return {same, std::string("coefficients.tsv and trace.tsv ") + (same ? "byte-identical" : "differ") +
                    " across two preset runs (seed " + std::to_string(r.config.seed) + ")"};
}

Verdict properties() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> det(-2.0, 2.0), amp(0.8, 1.2), peak(0.5, 4.0), time(0.0, 3.7),
      theta(0.0, two_pi);
  int unitary = 0, hermitian = 0, conserving = 0;
  for (int i = 0; i < 100; ++i) {
    const int k = 1 + i % 3;
    const HyperfineConfig hf = HyperfineConfig::make(k, k == 1 ? 0.0 : 2.16);
    const PulseCoefficients p = testing::random_pulse(rng, peak(rng), 4 + i % 7);
    const EnsembleMember m{det(rng), amp(rng), 1.0};

    const Propagator u = floquet_propagator(p, m, hf);
    if (unitarity_defect(u.u) <= 1e-10) ++unitary;

    const FourierComponents h = hamiltonian_fourier_components(p, m, hf);
    if (hermiticity_defect(h.evaluate(p.fundamental(), time(rng))) < 1e-12) ++hermitian;

    bool ok = true;
    for (int j = 0; j < k; ++j) {
      const double stay = state_transfer_fidelity(u, bright_state(hf, j), bright_state(hf, j));
      const double move = state_transfer_fidelity(u, bright_state(hf, j), dark_state(hf, j));
      ok = ok && std::abs(stay + move - 1.0) < 1e-10 && move >= 0.0 && move <= 1.0 + 1e-12;
    }
    const Propagator shifted{std::exp(Complex(0.0, theta(rng))) * u.u, u.duration_us};
    ok = ok && std::abs(mean_block_transfer(shifted, hf) - mean_block_transfer(u, hf)) <= 1e-14;
    if (ok) ++conserving;
  }
  return {unitary == 100 && hermitian == 100 && conserving == 100,
          "unitary " + std::to_string(unitary) + "/100 (defect <= 1e-10), Hermitian " + std::to_string(hermitian) +
              "/100 (< 1e-12), probability conserving " + std::to_string(conserving) + "/100 (1e-10)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria{floquet_oracle,      gradient,           rabi_formula,
                                                      fidelity_map_center, grid_convergence,   penalty_constraint,
                                                      photophysics,        sensitivity_estimate, determinism,
                                                      properties};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
  fs::create_directories(run_dir);
  int failed = 0;
  for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
    if (!selected.empty() && !selected.count(n)) continue;
    Verdict v;
    try {
      v = criteria[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
