#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ldot::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNotConverged = 3,
  kInvariantViolation = 4,
};

enum class Command { solve, exact, rate, sweep, verify, scenario };

/// Which support stands in for Gamma in rate, sweep and verify.
enum class GammaSource { exact, sinkhorn };

struct Ladder {
  double start = 0.4;
  double ratio = 0.70710678118654752440;
  int count = 8;
};

struct RunConfig {
  Command command = Command::solve;
  std::optional<std::string> mu_path;
  std::optional<std::string> nu_path;
  /// Path to a cost table, or the name of a geometric cost ("quadratic", "notwist").
  std::optional<std::string> cost;
  std::optional<std::string> scenario;
  std::optional<double> epsilon;
  std::optional<Ladder> ladder;
  std::string method = "exact";
  int k_max = 0;
  double threshold = 1e-3;
  double tol = 1e-9;
  int max_iter = 100000;
  std::uint64_t seed = 0;
  std::string out = ".";
  int threads = 1;
  GammaSource gamma = GammaSource::exact;
};

/// "start:ratio:count".
Ladder parse_ladder(const std::string& text);

/// Throws InvalidArgument when the inputs are not exactly one of (mu+nu, scenario), when a
/// command lacks a required flag, or when the output directory is not writable.
void validate(const RunConfig& config);

/// Runs one command, writing artifacts under config.out and a summary to `log`.
/// Errors are reported on `err` and mapped to an ExitCode.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

/// Parses argv with CLI11 and calls run().
int main_entry(int argc, char** argv);

}  // namespace ldot::cli
