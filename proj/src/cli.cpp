#include "nvoc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nvoc/config.hpp"
#include "nvoc/io.hpp"

namespace nvoc::cli {

namespace {

using config::Json;

struct Context {
  Json doc;
  std::filesystem::path base;  // relative file names in the config resolve against the working directory
  io::ArtifactHeader header;
  std::filesystem::path out;
  std::ostream& log;
  bool verbose = false;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

EvaluationOptions evaluation(const Context& ctx) {
  EvaluationOptions o;
  o.threads = config::threads(ctx.doc);
  return o;
}

std::string run_optimize(Context& ctx) {
  const OptimizerConfig cfg = config::optimizer(ctx.doc);
  const OptimizationResult result = optimize(cfg, [&](const TraceRow& row) {
    if (!ctx.verbose) return;
    ctx.log << "step " << row.step << " F_st " << fmt(row.transfer) << " F_pen " << fmt(row.penalty) << " p "
            << fmt(row.penalty_constant) << " max_rabi " << fmt(row.max_rabi_mhz) << " MHz\n";
  });

  // Report the returned pulse with a tightly certified truncation.
  const RepresentativeEnsemble members = cfg.ensemble.sample();
  EvaluationOptions certified = evaluation(ctx);
  const EnsembleFidelity final_value = ensemble_objective(result.pulse, members, cfg.hyperfine, certified);
  const double peak = max_rabi(result.pulse);

  io::ArtifactHeader coeff = ctx.header;
  coeff.add("rabi_limit_mhz", cfg.rabi_limit_mhz);
  coeff.add("max_rabi_mhz", peak);
  coeff.add("transfer_fidelity", final_value.value);
  coeff.add("floquet_truncation", static_cast<double>(final_value.truncation));
  coeff.add("returned_step", static_cast<double>(result.returned_step));
  coeff.add("converged", result.trace.converged ? "true" : "false");
  io::write_coefficients(ctx.out / "coefficients.tsv", coeff, result.pulse);

  io::Table trace;
  trace.columns = {"step",      "F_st",           "F_pen",      "F_tot",        "p",
                   "max_rabi_mhz", "beta",        "F_tot_before", "truncation", "line_search", "no_improvement"};
  for (const TraceRow& r : result.trace.rows) {
    trace.rows.push_back({static_cast<double>(r.step), r.transfer, r.penalty, r.total(), r.penalty_constant,
                          r.max_rabi_mhz, r.beta, r.objective_before, static_cast<double>(r.truncation),
                          r.line_search ? 1.0 : 0.0, r.no_improvement ? 1.0 : 0.0});
  }
  io::ArtifactHeader th = ctx.header;
  th.add("amplitude_unit_rad_per_us", cfg.amplitude_unit);
  io::write_table(ctx.out / "trace.tsv", th, trace);
  return "F_st " + fmt(final_value.value) + ", max_rabi " + fmt(peak) + " MHz (limit " + fmt(cfg.rabi_limit_mhz) +
         ")";
}

std::string run_map(Context& ctx) {
  const HyperfineConfig h = config::hyperfine(ctx.doc);
  const Drive d = config::drive(ctx.doc, ctx.base);
  const config::MapSpec spec = config::map(ctx.doc);
  const FidelityGrid grid = fidelity_map(d, spec.detunings_mhz, spec.amplitudes, spec.mode, h, evaluation(ctx));
  io::Table t;
  t.columns = {"detuning_mhz", "amplitude", "fidelity"};
  double center = 0.0, best = INFINITY;
  for (std::size_t i = 0; i < grid.detunings_mhz.size(); ++i) {
    for (std::size_t j = 0; j < grid.amplitudes.size(); ++j) {
      const double v = grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      t.rows.push_back({grid.detunings_mhz[i], grid.amplitudes[j], v});
      const double dist = std::hypot(grid.detunings_mhz[i], grid.amplitudes[j] - 1.0);
      if (dist < best) {
        best = dist;
        center = v;
      }
    }
  }
  io::ArtifactHeader header = ctx.header;
  header.add("mode", spec.mode == MapMode::level_averaged ? "level_averaged" : "single_transition");
  header.add("floquet_truncation", static_cast<double>(grid.truncation));
  io::write_table(ctx.out / "map.tsv", header, t);
  return "fidelity nearest (0 MHz, 1.0) = " + fmt(center);
}

std::string run_odmr(Context& ctx) {
  const HyperfineConfig h = config::hyperfine(ctx.doc);
  const Drive d = config::drive(ctx.doc, ctx.base);
  const RepresentativeEnsemble members = config::ensemble(ctx.doc).sample();
  const OdmrCurve curve = simulate_odmr(d, members, h, config::odmr_offsets(ctx.doc), evaluation(ctx));
  const SlopeExtremum ext = contrast_slope(curve);
  io::Table t;
  t.columns = {"offset_mhz", "contrast", "slope_per_mhz"};
  for (std::size_t i = 0; i < curve.offsets_mhz.size(); ++i) {
    t.rows.push_back({curve.offsets_mhz[i], curve.contrast[i], curve.slope[i]});
  }
  io::ArtifactHeader header = ctx.header;
  header.add("max_abs_slope_per_mhz", ext.max_abs_slope);
  header.add("max_slope_offset_mhz", ext.offset_mhz);
  io::write_table(ctx.out / "odmr.tsv", header, t);
  return "max |slope| " + fmt(ext.max_abs_slope) + " per MHz at " + fmt(ext.offset_mhz) + " MHz";
}

std::string run_photophysics(Context& ctx) {
  config::PhotophysicsSpec spec = config::photophysics(ctx.doc);
  if (spec.calibrate) spec.model = calibrate_pump(spec.model, spec.calibration_target_s);
  const RateModelConfig& model = spec.model;
  const ExponentialFit aggregate = aggregate_recovery(model);

  io::ArtifactHeader header = ctx.header;
  header.add("center_pump_rate_per_s", model.center_pump_rate);
  header.add("pump_scale", model.pump_scale);
  header.add("aggregate_recovery_s", aggregate.time_constant);
  header.add("aggregate_recovery_r_squared", aggregate.r_squared);
  header.add("asymptotic_contrast", asymptotic_contrast(model));

  io::Table reinit;
  reinit.columns = {"r_over_r0", "reinit_time_s", "r_squared"};
  for (double r : spec.radii) {
    const ExponentialFit f = reinit_time(r, model);
    reinit.rows.push_back({r, f.time_constant, f.r_squared});
  }
  io::write_table(ctx.out / "reinit.tsv", header, reinit);

  io::Table sweep;
  sweep.columns = {"laser_s", "contrast", "plateau"};
  for (const LaserSweepPoint& p : contrast_vs_laser_duration(spec.laser_sweep_s, model)) {
    sweep.rows.push_back({p.laser_s, p.contrast, p.plateau});
  }
  io::write_table(ctx.out / "laser_sweep.tsv", header, sweep);

  const PulseTrainResult train = pulse_train(spec.train, model);
  io::Table cycles;
  cycles.columns = {"cycle", "contrast", "plateau"};
  for (std::size_t n = 0; n < train.cycles.size(); ++n) {
    cycles.rows.push_back({static_cast<double>(n + 1), train.cycles[n].contrast, train.cycles[n].plateau});
  }
  io::ArtifactHeader train_header = header;
  train_header.add("laser_s", spec.train.laser_s);
  io::write_table(ctx.out / "pulse_train.tsv", train_header, cycles);

  io::Table trace;
  trace.columns = {"t_s", "fluorescence_first", "fluorescence_last", "reference_last"};
  for (std::size_t i = 0; i < train.times.size(); ++i) {
    trace.rows.push_back({train.times[i], train.cycles.front().fluorescence[i], train.cycles.back().fluorescence[i],
                          train.cycles.back().reference[i]});
  }
  io::write_table(ctx.out / "fluorescence.tsv", train_header, trace);
  return "center pump " + fmt(model.center_pump_rate) + " /s, aggregate recovery " +
         fmt(aggregate.time_constant * 1e3) + " ms, contrast (last cycle) " + fmt(train.cycles.back().contrast);
}

std::string run_sensitivity(Context& ctx) {
  const SensitivityInputs in = config::sensitivity(ctx.doc);
  const double eta = sensitivity(in);
  io::Table t;
  t.columns = {"eta_t_per_sqrt_hz", "slope_per_hz", "readout_time_s", "reinit_time_s", "decay_constant_s",
               "photon_rate_per_s", "information_factor"};
  t.rows.push_back({eta, in.slope_per_hz, in.readout_time_s, in.reinit_time_s, in.decay_constant_s,
                    in.photon_rate_per_s, information_factor(in.readout_time_s, in.decay_constant_s)});
  io::write_table(ctx.out / "sensitivity.tsv", ctx.header, t);
  return "eta " + fmt(eta * 1e9) + " nT/sqrt(Hz)";
}

std::string run_export(Context& ctx) {
  const Drive d = config::drive(ctx.doc, ctx.base);
  const auto* pulse = std::get_if<PulseCoefficients>(&d);
  if (!pulse) throw ValidationError("drive.kind", "export-waveform needs a shaped drive");
  const OptimizerConfig pulse_cfg = config::optimizer(ctx.doc);
  const io::Waveform w = io::export_waveform(*pulse, config::waveform_sample_rate(ctx.doc), pulse_cfg.rabi_limit_mhz);
  const double analytic = max_rabi(*pulse), sampled = io::sampled_max_rabi(w);
  if (analytic > 0.0 && std::abs(sampled - analytic) > 5e-3 * analytic) {
    throw NumericalError("sampled peak " + fmt(sampled) + " MHz is more than 0.5% from the analytic " + fmt(analytic) +
                         " MHz; raise the sample rate");
  }
  io::write_waveform(ctx.out / "waveform.tsv", ctx.header, w);
  return std::to_string(w.t_s.size()) + " samples, full scale " + fmt(w.full_scale_mhz) + " MHz";
}

}  // namespace

int run(const RunOptions& options, std::ostream& log, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  try {
    Json doc = config::load(options.config);
    for (const std::string& o : options.overrides) config::apply_override(doc, o);
    if (options.seed) doc["seed"] = *options.seed;
    if (options.threads) doc["threads"] = *options.threads;
    config::validate_document(doc);

    Context ctx{doc, std::filesystem::current_path(), {}, options.out, log, options.verbose};
    ctx.header.config_hash = config::hash(doc);
    ctx.header.seed = config::seed(doc);
    ctx.header.add("command", options.command);

    std::string summary;
    if (options.command == "optimize") {
      summary = run_optimize(ctx);
    } else if (options.command == "map") {
      summary = run_map(ctx);
    } else if (options.command == "odmr") {
      summary = run_odmr(ctx);
    } else if (options.command == "photophysics") {
      summary = run_photophysics(ctx);
    } else if (options.command == "sensitivity") {
      summary = run_sensitivity(ctx);
    } else if (options.command == "export-waveform") {
      summary = run_export(ctx);
    } else {
      err << "error: unknown command '" << options.command << "'\n";
      return config_error;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << options.command << ": " << summary << ", wall " << fmt(wall, 3) << " s\n";
    return ok;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return numerical_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Shaped-pulse design and NV ensemble simulation"};
  app.set_version_flag("--version", std::string("nvctl ") + io::tool_version);
  app.require_subcommand(1);

  RunOptions options;
  std::uint64_t seed = 0;
  int threads = 1;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"optimize", "optimize a shaped pulse for a representative ensemble"},
      {"map", "fidelity map over detuning and amplitude"},
      {"odmr", "simulated ODMR contrast and slope"},
      {"photophysics", "rate-model reinitialization and pulse-train contrast"},
      {"sensitivity", "shot-noise-limited sensitivity"},
      {"export-waveform", "sample a coefficient file into an I/Q waveform"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", options.config, "config file (JSON, comments allowed)")->required();
    sub->add_option("--out", options.out, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--set", options.overrides, "key.path=value override, repeatable");
    sub->add_option("--threads", threads, "worker threads");
    sub->add_flag("--verbose", options.verbose, "per-step progress");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }
  for (CLI::App* sub : subs) {
    if (!sub->parsed()) continue;
    options.command = sub->get_name();
    if (sub->count("--seed")) options.seed = seed;
    if (sub->count("--threads")) options.threads = threads;
  }
  return run(options, std::cout, std::cerr);
}

}  // namespace nvoc::cli
