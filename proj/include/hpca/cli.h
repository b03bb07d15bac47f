#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hpca/synth.h"

namespace hpca::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kNumericalError = 2 };

/// Resolved settings for one command. Precedence: built-in defaults, then
/// the JSON file named by --config, then explicit flags.
struct RunConfig {
  std::string command;
  std::string prices;
  std::string meta;
  std::string scheme;  // "", sector, country or stat
  int k = 4;
  int window = 125;
  int rebalance = 21;
  double cost_bps = 5.0;
  std::string out = ".";
  std::uint64_t seed = 42;
  bool verify = false;
  int verify_samples = 200000;
  int min_history = 2;
  std::vector<std::string> strategies;
  std::vector<int> eigvecs{1, 2, 3};
  double threshold = 0.5;
  bool long_only = false;
  double ridge = 1e-6;
  SynthConfig synth;

  /// Comment lines echoed at the top of every output file.
  std::vector<std::string> echo() const;
};

/// Runs one command line (argv[0] excluded). Writes progress to `out` and
/// diagnostics to `err`; returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hpca::cli
