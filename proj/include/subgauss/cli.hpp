#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "subgauss/rng.hpp"

namespace subgauss::cli {

/// Bad command line or config; the message names the offending key.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv };

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> trials;
  unsigned threads = 1;
  std::string out = "-";
  Format format = Format::Json;
  std::optional<std::string> constants;
  bool timestamp = true;
};

/// Exit codes of dispatch.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

const std::vector<std::string>& command_names();

/// Parses `<command> key=value ... [--seed N] [--config FILE] ...`. Values
/// from the config file are overridden by the command line.
RunConfig parse_args(const std::vector<std::string>& args);

/// Runs one subcommand and writes its report. Returns kExitCheckFailed when a
/// checked bound or guarantee is violated.
int dispatch(const RunConfig& config);

/// parse_args + dispatch with error reporting on stderr.
int run(int argc, const char* const* argv);

}  // namespace subgauss::cli
