#ifndef NVOC_IO_HPP
#define NVOC_IO_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nvoc/pulse.hpp"

namespace nvoc::io {

inline constexpr const char* tool_version = "0.1.0";

/// Metadata written as `# key: value` lines ahead of every table.
struct ArtifactHeader {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> extra;

  void add(const std::string& key, double value);
  void add(const std::string& key, const std::string& value);
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> meta;  ///< header lines read back from a file

  double meta_number(const std::string& key) const;
};

/// Round-trippable text form of a double.
std::string format_double(double v);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string render_table(const ArtifactHeader& header, const Table& table);
void write_table(const std::filesystem::path& path, const ArtifactHeader& header, const Table& table);
/// Tab-separated; `#` lines become meta, the first other line names the columns.
Table read_table(const std::filesystem::path& path);

/// Coefficient file: columns j, a_x, a_y (rad/us) with t_p and carrier in the header.
Table coefficient_table(const PulseCoefficients& pulse);
PulseCoefficients pulse_from_table(const Table& table);
PulseCoefficients read_coefficients(const std::filesystem::path& path);
/// Adds duration_us and carrier_mhz to `header` and writes the coefficient table.
void write_coefficients(const std::filesystem::path& path, ArtifactHeader header, const PulseCoefficients& pulse);

/// AWG-ready samples of the envelope at t_i = i / rate for i = 0 .. floor(t_p rate).
/// I and Q are divided by the peak of |I + iQ| (in angular units); `full_scale_mhz`
/// converts a full-scale sample back to Rabi frequency.
struct Waveform {
  double sample_rate_hz = 0.0;
  double duration_us = 0.0;
  double rabi_limit_mhz = 0.0;
  double carrier_mhz = 0.0;
  double full_scale_mhz = 0.0;
  std::vector<double> t_s;
  std::vector<double> i;
  std::vector<double> q;
};

/// Lowest accepted sample rate, 10 N_f W / 2 pi.
double minimum_sample_rate_hz(const PulseCoefficients& pulse);
Waveform export_waveform(const PulseCoefficients& pulse, double sample_rate_hz, double rabi_limit_mhz);
/// Peak sqrt(I^2 + Q^2) over the samples, in MHz.
double sampled_max_rabi(const Waveform& waveform);
Table waveform_table(const Waveform& waveform);
Waveform waveform_from_table(const Table& table);
void write_waveform(const std::filesystem::path& path, ArtifactHeader header, const Waveform& waveform);
Waveform read_waveform(const std::filesystem::path& path);

}  // namespace nvoc::io

#endif  // NVOC_IO_HPP
