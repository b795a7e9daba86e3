#include "nvoc/config.hpp"

#include <fstream>
#include <sstream>

#include "nvoc/io.hpp"

namespace nvoc::config {

Json parse(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ValidationError(origin, e.what());
  }
}

Json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string(), "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  Json doc = parse(ss.str(), path.string());
  if (!doc.is_object()) throw ValidationError(path.string(), "config must be a JSON object");
  return doc;
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ValidationError(assignment, "override must look like key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(raw);
  } catch (const Json::parse_error&) {
    value = raw;
  }
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ValidationError(key, "empty path component");
    if (!node->is_object()) throw ValidationError(key, "cannot descend into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

std::string hash(const Json& doc) { return io::hex64(io::fnv1a(doc.dump())); }

Section::Section(const Json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
  if (doc_.is_null()) doc_ = Json::object();
  if (!doc_.is_object()) throw ValidationError(path_.empty() ? "config" : path_, "expected an object");
}

std::string Section::field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

bool Section::has(const std::string& key) const { return doc_.contains(key); }

const Json& Section::at(const std::string& key) {
  used_.insert(key);
  return doc_.at(key);
}

double Section::number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

double Section::number(const std::string& key) {
  if (!has(key)) throw ValidationError(field(key), "required");
  const Json& v = at(key);
  if (!v.is_number()) throw ValidationError(field(key), "expected a number");
  return v.get<double>();
}

int Section::integer(const std::string& key, int fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_number_integer()) throw ValidationError(field(key), "expected an integer");
  return v.get<int>();
}

std::uint64_t Section::unsigned_integer(const std::string& key, std::uint64_t fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_number_unsigned()) throw ValidationError(field(key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

bool Section::flag(const std::string& key, bool fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_boolean()) throw ValidationError(field(key), "expected true or false");
  return v.get<bool>();
}

std::string Section::text(const std::string& key, const std::string& fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_string()) throw ValidationError(field(key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> Section::numbers(const std::string& key, std::vector<double> fallback) {
  used_.insert(key);
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_array()) throw ValidationError(field(key), "expected an array of numbers");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) throw ValidationError(field(key), "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Section Section::child(const std::string& key) {
  used_.insert(key);
  return Section(has(key) ? doc_.at(key) : Json::object(), field(key));
}

void Section::finish() const {
  for (const auto& [k, v] : doc_.items()) {
    if (!used_.count(k)) throw ValidationError(field(k), "unknown key");
  }
}

void check_top_level(const Json& doc) {
  static const std::set<std::string> known{"seed",     "threads", "pulse", "hyperfine",    "ensemble",   "optimizer",
                                           "drive",    "map",     "odmr",  "waveform",     "photophysics", "sensitivity"};
  if (!doc.is_object()) throw ValidationError("config", "must be a JSON object");
  for (const auto& [k, v] : doc.items()) {
    if (!known.count(k)) throw ValidationError(k, "unknown key");
  }
}

void validate_document(const Json& doc) {
  check_top_level(doc);
  seed(doc);
  threads(doc);
  hyperfine(doc);
  ensemble(doc);
  if (doc.contains("pulse") || doc.contains("optimizer")) optimizer(doc);
  if (doc.contains("drive")) {
    Section s(doc["drive"], "drive");
    const std::string kind = s.text("kind", "");
    if (kind == "shaped") {
      s.text("coefficients", "");
    } else if (kind == "flat") {
      s.number("rabi_mhz");
      s.integer("tones", 1);
      s.unsigned_integer("phase_seed", 0);
    } else {
      throw ValidationError("drive.kind", "expected \"shaped\" or \"flat\"");
    }
    s.finish();
  }
  if (doc.contains("map")) map(doc);
  if (doc.contains("odmr")) odmr_offsets(doc);
  if (doc.contains("waveform")) waveform_sample_rate(doc);
  if (doc.contains("photophysics")) photophysics(doc);
  if (doc.contains("sensitivity")) sensitivity(doc);
}

std::uint64_t seed(const Json& doc) {
  Section s(doc, "");
  return s.unsigned_integer("seed", 1);
}

int threads(const Json& doc) {
  Section s(doc, "");
  const int t = s.integer("threads", 1);
  if (t < 1) throw ValidationError("threads", "must be positive");
  return t;
}

HyperfineConfig hyperfine(const Json& doc) {
  Section s(doc.value("hyperfine", Json::object()), "hyperfine");
  const int levels = s.integer("levels", 1);
  if (levels > 1 && !s.has("splitting_mhz")) {
    throw ValidationError("splitting", "hyperfine.splitting_mhz is required for more than one level");
  }
  const double splitting = s.number("splitting_mhz", 0.0);
  s.finish();
  HyperfineConfig h = HyperfineConfig::make(levels, splitting);
  h.validate();
  return h;
}

EnsembleSpec ensemble(const Json& doc) {
  Section s(doc.value("ensemble", Json::object()), "ensemble");
  EnsembleSpec e;
  e.detuning_range_mhz = s.number("detuning_range_mhz", e.detuning_range_mhz);
  e.amplitude_fraction = s.number("amplitude_fraction", e.amplitude_fraction);
  e.detuning_points = s.integer("detuning_points", e.detuning_points);
  e.amplitude_points = s.integer("amplitude_points", e.amplitude_points);
  s.finish();
  e.sample();  // validates
  return e;
}

OptimizerConfig optimizer(const Json& doc) {
  OptimizerConfig c;
  Section p(doc.value("pulse", Json::object()), "pulse");
  c.rabi_limit_mhz = p.number("rabi_limit_mhz", c.rabi_limit_mhz);
  c.duration_us = p.number("duration_us", c.duration_us);
  c.harmonics = p.integer("harmonics", c.harmonics);
  c.carrier_mhz = p.number("carrier_mhz", c.carrier_mhz);
  p.finish();

  Section o(doc.value("optimizer", Json::object()), "optimizer");
  c.steps = o.integer("steps", c.steps);
  c.fixed_beta = o.number("fixed_beta", c.fixed_beta);
  c.fixed_beta_steps = o.integer("fixed_beta_steps", c.fixed_beta_steps);
  c.penalty_initial = o.number("penalty_initial", c.penalty_initial);
  c.penalty_step = o.number("penalty_step", c.penalty_step);
  c.init_overshoot = o.number("init_overshoot", c.init_overshoot);
  c.amplitude_unit = o.number("amplitude_unit_rad_per_us", c.amplitude_unit);
  c.floquet_truncation = o.integer("floquet_truncation", c.floquet_truncation);
  c.truncation_tolerance = o.number("truncation_tolerance", c.truncation_tolerance);
  c.truncation_recheck = o.integer("truncation_recheck", c.truncation_recheck);
  c.line_search_tolerance = o.number("line_search_tolerance", c.line_search_tolerance);
  c.convergence_threshold = o.number("convergence_threshold", c.convergence_threshold);
  o.finish();

  c.seed = seed(doc);
  c.threads = threads(doc);
  c.hyperfine = hyperfine(doc);
  c.ensemble = ensemble(doc);
  c.validate();
  return c;
}

Drive drive(const Json& doc, const std::filesystem::path& base) {
  Section s(doc.value("drive", Json::object()), "drive");
  const std::string kind = s.text("kind", "");
  if (kind == "shaped") {
    const std::string file = s.text("coefficients", "");
    if (file.empty()) throw ValidationError("drive.coefficients", "required for a shaped drive");
    s.finish();
    std::filesystem::path path(file);
    if (path.is_relative()) path = base / path;
    return io::read_coefficients(path);
  }
  if (kind == "flat") {
    const double rabi = s.number("rabi_mhz");
    const int tones = s.integer("tones", 1);
    const bool random = s.has("phase_seed");
    const std::uint64_t phase_seed = s.unsigned_integer("phase_seed", 0);
    s.finish();
    double splitting = 0.0;
    if (tones == 3) {
      const HyperfineConfig h = hyperfine(doc);
      if (h.level_count != 3) throw ValidationError("splitting", "a three-tone drive needs hyperfine.levels = 3");
      splitting = h.splitting_mhz;
    }
    std::vector<double> phases;
    if (random) phases = random_phases(phase_seed, tones);
    return flat_pi_pulse(rabi, tones, splitting, phases);
  }
  throw ValidationError("drive.kind", "expected \"shaped\" or \"flat\"");
}

MapSpec map(const Json& doc) {
  Section s(doc.value("map", Json::object()), "map");
  MapSpec m;
  const double dlo = s.number("detuning_min_mhz", -2.0), dhi = s.number("detuning_max_mhz", 2.0);
  const int dn = s.integer("detuning_points", 41);
  const double alo = s.number("amplitude_min", 0.8), ahi = s.number("amplitude_max", 1.2);
  const int an = s.integer("amplitude_points", 21);
  const std::string mode = s.text("mode", "level_averaged");
  s.finish();
  if (mode == "level_averaged") {
    m.mode = MapMode::level_averaged;
  } else if (mode == "single_transition") {
    m.mode = MapMode::single_transition;
  } else {
    throw ValidationError("map.mode", "expected \"level_averaged\" or \"single_transition\"");
  }
  m.detunings_mhz = linear_axis(dlo, dhi, dn);
  m.amplitudes = linear_axis(alo, ahi, an);
  return m;
}

std::vector<double> odmr_offsets(const Json& doc) {
  Section s(doc.value("odmr", Json::object()), "odmr");
  const double lo = s.number("offset_min_mhz", -4.0), hi = s.number("offset_max_mhz", 4.0);
  const int n = s.integer("points", 81);
  s.finish();
  return linear_axis(lo, hi, n);
}

double waveform_sample_rate(const Json& doc) {
  Section s(doc.value("waveform", Json::object()), "waveform");
  const double rate = s.number("sample_rate_hz", 50e6);
  s.finish();
  if (!(rate > 0.0)) throw ValidationError("waveform.sample_rate_hz", "must be positive");
  return rate;
}

PhotophysicsSpec photophysics(const Json& doc) {
  Section s(doc.value("photophysics", Json::object()), "photophysics");
  PhotophysicsSpec out;
  Section r = s.child("rates_per_s");
  RateConstants& k = out.model.rates;
  k.radiative = r.number("radiative", k.radiative);
  k.excited0_to_singlet = r.number("excited0_to_singlet", k.excited0_to_singlet);
  k.excited1_to_singlet = r.number("excited1_to_singlet", k.excited1_to_singlet);
  k.singlet_to_ground0 = r.number("singlet_to_ground0", k.singlet_to_ground0);
  k.singlet_to_ground1 = r.number("singlet_to_ground1", k.singlet_to_ground1);
  r.finish();
  k.t1 = s.number("t1_s", k.t1);

  // 0 (the default) means: calibrate against the recovery target.
  out.model.center_pump_rate = s.number("center_pump_rate_per_s", 0.0);
  out.calibrate = out.model.center_pump_rate == 0.0;
  out.calibration_target_s = s.number("calibration_target_s", out.calibration_target_s);
  out.model.pump_scale = s.number("pump_scale", out.model.pump_scale);
  const int annuli = s.integer("annuli", 50);
  const double extent = s.number("extent_r0", 1.5);
  out.model.grid = radial_grid(annuli, extent);

  PulseTrainSpec& t = out.train;
  t.laser_s = s.number("laser_s", t.laser_s);
  t.gap_s = s.number("gap_s", t.gap_s);
  t.cycles = s.integer("cycles", t.cycles);
  t.window_start_s = s.number("window_start_s", t.window_start_s);
  t.window_end_s = s.number("window_end_s", t.window_end_s);
  t.samples = s.integer("samples", t.samples);
  out.laser_sweep_s = s.numbers("laser_sweep_s", {0.1e-3, 0.3e-3, 0.5e-3, 1e-3, 2e-3, 3e-3, 5e-3, 10e-3, 20e-3});
  out.radii = s.numbers("reinit_radii_r0", {});
  s.finish();
  if (out.radii.empty()) out.radii = out.model.grid.radii;
  if (!out.calibrate) out.model.validate();
  t.validate();
  return out;
}

SensitivityInputs sensitivity(const Json& doc) {
  Section s(doc.value("sensitivity", Json::object()), "sensitivity");
  SensitivityInputs in;
  in.slope_per_hz = s.number("contrast_slope_per_mhz") * 1e-6;
  in.readout_time_s = s.number("readout_time_s");
  in.reinit_time_s = s.number("reinit_time_s");
  in.decay_constant_s = s.number("decay_constant_s");
  if (s.has("photon_rate_per_s")) {
    in.photon_rate_per_s = s.number("photon_rate_per_s");
  } else {
    const double power = s.number("laser_power_w");
    const double wavelength = s.number("wavelength_m");
    in.photon_rate_per_s = photon_rate(power, wavelength);
  }
  in.gyromagnetic_hz_per_t = s.number("gyromagnetic_hz_per_t", in.gyromagnetic_hz_per_t);
  s.finish();
  in.validate();
  return in;
}

}  // namespace nvoc::config
