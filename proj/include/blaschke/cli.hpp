#pragma once

// Command-line front end: subcommands set, factor, product, verify, local,
// example. Every run writes CSV artifacts and a manifest.txt into the output
// directory; `--manifest FILE` replays a previous run.

#include <filesystem>
#include <map>
#include <ostream>
#include <string>

namespace blaschke {

struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::string> options;  // flag name without dashes -> value
    std::filesystem::path out_dir = "blaschke_out";
};

enum ExitCode : int { kExitOk = 0, kExitViolated = 1, kExitBadInput = 2 };

/// Runs one experiment. Indeterminate verdicts also map to exit code 2.
int run(const ExperimentConfig& config, std::ostream& out);

/// Parses argv (CLI11) and runs; returns the process exit code.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace blaschke
