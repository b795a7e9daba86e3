#ifndef NVOC_CLI_HPP
#define NVOC_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nvoc::cli {

enum ExitCode : int { ok = 0, failure = 1, config_error = 2, numerical_failure = 3 };

struct RunOptions {
  std::string command;  ///< optimize, map, odmr, photophysics, sensitivity, export-waveform
  std::filesystem::path config;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> overrides;  ///< key=value, applied after the file is parsed
  bool verbose = false;
};

/// Runs one command; the summary goes to `log`, diagnostics to `err`.
int run(const RunOptions& options, std::ostream& log, std::ostream& err);

/// argv front-end used by the nvctl binary.
int main(int argc, char** argv);

}  // namespace nvoc::cli

#endif  // NVOC_CLI_HPP
