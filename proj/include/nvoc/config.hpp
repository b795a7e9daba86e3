#ifndef NVOC_CONFIG_HPP
#define NVOC_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvoc/analysis.hpp"
#include "nvoc/optimizer.hpp"
#include "nvoc/photophysics.hpp"

namespace nvoc::config {

using Json = nlohmann::json;

/// Parses a config document; `//` and `/* */` comments are allowed.
Json parse(const std::string& text, const std::string& origin = "config");
Json load(const std::filesystem::path& path);

/// Applies `a.b.c=value`. The value is read as JSON when it parses, otherwise as a string.
void apply_override(Json& doc, const std::string& assignment);

/// Hex FNV-1a of the canonical (sorted-key, compact) serialization.
std::string hash(const Json& doc);

/// Typed access to one object with unit-suffixed keys. Every key read is
/// remembered; `finish()` rejects the rest so typos surface as errors.
class Section {
 public:
  Section(const Json& doc, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback);
  double number(const std::string& key);
  int integer(const std::string& key, int fallback);
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback);
  Section child(const std::string& key);
  void finish() const;

 private:
  const Json& at(const std::string& key);
  std::string field(const std::string& key) const;

  Json doc_;
  std::string path_;
  std::set<std::string> used_;
};

/// Top-level keys a document may carry.
void check_top_level(const Json& doc);

/// Parses every section present (the drive's coefficient file is not opened),
/// so a typo anywhere fails regardless of which command runs.
void validate_document(const Json& doc);

std::uint64_t seed(const Json& doc);
int threads(const Json& doc);

HyperfineConfig hyperfine(const Json& doc);
EnsembleSpec ensemble(const Json& doc);
OptimizerConfig optimizer(const Json& doc);

/// "drive" section: a shaped pulse read from a coefficient file (path relative
/// to `base`) or a flat pulse with 1 or 3 tones.
Drive drive(const Json& doc, const std::filesystem::path& base);

struct MapSpec {
  std::vector<double> detunings_mhz;
  std::vector<double> amplitudes;
  MapMode mode = MapMode::level_averaged;
};
MapSpec map(const Json& doc);

std::vector<double> odmr_offsets(const Json& doc);
double waveform_sample_rate(const Json& doc);

struct PhotophysicsSpec {
  RateModelConfig model;
  bool calibrate = true;
  double calibration_target_s = 1.4e-3;
  PulseTrainSpec train;
  std::vector<double> laser_sweep_s;
  std::vector<double> radii;
};
PhotophysicsSpec photophysics(const Json& doc);

SensitivityInputs sensitivity(const Json& doc);

}  // namespace nvoc::config

#endif  // NVOC_CONFIG_HPP
