#include "nvoc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace nvoc::io {

void ArtifactHeader::add(const std::string& key, double value) { extra.emplace_back(key, format_double(value)); }

void ArtifactHeader::add(const std::string& key, const std::string& value) { extra.emplace_back(key, value); }

namespace {

double parse_number(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError(field, "not a number: '" + text + "'");
  }
  if (used != text.size()) throw ValidationError(field, "not a number: '" + text + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, '\t')) out.push_back(trim(cell));
  return out;
}

}  // namespace

double Table::meta_number(const std::string& key) const {
  const auto it = meta.find(key);
  if (it == meta.end()) throw ValidationError(key, "missing from file header");
  return parse_number(it->second, key);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string render_table(const ArtifactHeader& header, const Table& table) {
  std::string out;
  out += "# tool: nvctl " + std::string(tool_version) + "\n";
  out += "# config_hash: " + header.config_hash + "\n";
  out += "# seed: " + std::to_string(header.seed) + "\n";
  for (const auto& [k, v] : header.extra) out += "# " + k + ": " + v + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "\t" : "") + table.columns[c];
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::logic_error("table row width does not match its columns");
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "\t" : "") + format_double(row[c]);
    out += "\n";
  }
  return out;
}

void write_table(const std::filesystem::path& path, const ArtifactHeader& header, const Table& table) {
  write_atomic(path, render_table(header, table));
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string(), "cannot open file");
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.substr(1);
      const auto colon = body.find(':');
      if (colon != std::string::npos) t.meta[trim(body.substr(0, colon))] = trim(body.substr(colon + 1));
      continue;
    }
    if (t.columns.empty()) {
      t.columns = split_tabs(line);
      continue;
    }
    const std::vector<std::string> cells = split_tabs(line);
    if (cells.size() != t.columns.size()) {
      throw ValidationError(path.string(), "row has " + std::to_string(cells.size()) + " cells, expected " +
                                               std::to_string(t.columns.size()));
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) row.push_back(parse_number(cells[c], t.columns[c]));
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw ValidationError(path.string(), "no table found");
  return t;
}

Table coefficient_table(const PulseCoefficients& pulse) {
  Table t;
  t.columns = {"j", "a_x_rad_per_us", "a_y_rad_per_us"};
  for (int j = 0; j < pulse.harmonics(); ++j) {
    t.rows.push_back({static_cast<double>(j + 1), pulse.ax()(j), pulse.ay()(j)});
  }
  return t;
}

PulseCoefficients pulse_from_table(const Table& table) {
  if (table.columns.size() != 3) throw ValidationError("coefficients", "expected columns j, a_x, a_y");
  const double duration = table.meta_number("duration_us");
  const double carrier = table.meta.count("carrier_mhz") ? table.meta_number("carrier_mhz") : 0.0;
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  if (n == 0) throw ValidationError("coefficients", "no harmonics listed");
  VectorXd ax(n), ay(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& row = table.rows[static_cast<std::size_t>(j)];
    if (row[0] != static_cast<double>(j + 1)) throw ValidationError("coefficients", "harmonics must be listed as 1..N");
    ax(j) = row[1];
    ay(j) = row[2];
  }
  return PulseCoefficients(ax, ay, duration, carrier);
}

PulseCoefficients read_coefficients(const std::filesystem::path& path) { return pulse_from_table(read_table(path)); }

void write_coefficients(const std::filesystem::path& path, ArtifactHeader header, const PulseCoefficients& pulse) {
  header.add("duration_us", pulse.duration());
  header.add("carrier_mhz", pulse.carrier_mhz());
  write_table(path, header, coefficient_table(pulse));
}

double minimum_sample_rate_hz(const PulseCoefficients& pulse) {
  return 10.0 * pulse.harmonics() * to_frequency(pulse.fundamental()) * 1e6;
}

Waveform export_waveform(const PulseCoefficients& pulse, double sample_rate_hz, double rabi_limit_mhz) {
  const double floor_rate = minimum_sample_rate_hz(pulse);
  if (!(sample_rate_hz >= floor_rate)) {
    throw ValidationError("sample_rate", "below " + format_double(floor_rate) + " Hz (10 x highest harmonic)");
  }
  Waveform w;
  w.sample_rate_hz = sample_rate_hz;
  w.duration_us = pulse.duration();
  w.rabi_limit_mhz = rabi_limit_mhz;
  w.carrier_mhz = pulse.carrier_mhz();
  const double tp_s = pulse.duration() * 1e-6;
  // Small slack so a duration that is an exact multiple of the period keeps its last sample.
  const auto last = static_cast<long>(std::floor(tp_s * sample_rate_hz * (1.0 + 1e-12)));
  double peak = 0.0;
  for (long n = 0; n <= last; ++n) {
    const double t = static_cast<double>(n) / sample_rate_hz;
    const Envelope e = envelope(pulse, t * 1e6);
    w.t_s.push_back(t);
    w.i.push_back(e.i);
    w.q.push_back(e.q);
    peak = std::max(peak, std::hypot(e.i, e.q));
  }
  // Full scale is the larger of the analytic peak and the sampled one, so
  // |I|, |Q| <= 1 and full_scale * max |I + iQ| tracks max_rabi.
  const double scale = std::max(to_angular(max_rabi(pulse)), peak);
  if (scale > 0.0) {
    for (auto& v : w.i) v /= scale;
    for (auto& v : w.q) v /= scale;
  }
  w.full_scale_mhz = to_frequency(scale);
  return w;
}

double sampled_max_rabi(const Waveform& w) {
  double peak = 0.0;
  for (std::size_t n = 0; n < w.t_s.size(); ++n) peak = std::max(peak, std::hypot(w.i[n], w.q[n]));
  return peak * w.full_scale_mhz;
}

Table waveform_table(const Waveform& w) {
  Table t;
  t.columns = {"t_s", "I_norm", "Q_norm"};
  for (std::size_t n = 0; n < w.t_s.size(); ++n) t.rows.push_back({w.t_s[n], w.i[n], w.q[n]});
  return t;
}

Waveform waveform_from_table(const Table& table) {
  if (table.columns != std::vector<std::string>{"t_s", "I_norm", "Q_norm"}) {
    throw ValidationError("waveform", "expected columns t_s, I_norm, Q_norm");
  }
  Waveform w;
  w.sample_rate_hz = table.meta_number("sample_rate_hz");
  w.duration_us = table.meta_number("duration_us");
  w.rabi_limit_mhz = table.meta_number("rabi_limit_mhz");
  w.carrier_mhz = table.meta_number("carrier_mhz");
  w.full_scale_mhz = table.meta_number("full_scale_mhz");
  for (const auto& row : table.rows) {
    w.t_s.push_back(row[0]);
    w.i.push_back(row[1]);
    w.q.push_back(row[2]);
  }
  return w;
}

void write_waveform(const std::filesystem::path& path, ArtifactHeader header, const Waveform& w) {
  header.add("sample_rate_hz", w.sample_rate_hz);
  header.add("duration_us", w.duration_us);
  header.add("rabi_limit_mhz", w.rabi_limit_mhz);
  header.add("carrier_mhz", w.carrier_mhz);
  header.add("full_scale_mhz", w.full_scale_mhz);
  write_table(path, header, waveform_table(w));
}

Waveform read_waveform(const std::filesystem::path& path) { return waveform_from_table(read_table(path)); }

}  // namespace nvoc::io
