#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "dissrel/cli/bundle.hpp"
#include "dissrel/cli/config.hpp"

namespace dissrel::cli {

// Keys accepted by a subcommand. Throws ConfigError for an unknown command.
std::set<std::string> command_keys(const std::string& command);

// One study per call: writes its CSVs into `out` and returns the checks.
Report study_simulate(const RunConfig& cfg, BundleWriter& out);
Report study_approx(const RunConfig& cfg, BundleWriter& out);
Report study_modes(const RunConfig& cfg, BundleWriter& out);
Report study_inverse(const RunConfig& cfg, BundleWriter& out);

struct Invocation {
  std::string command;
  RunConfig config;
  std::filesystem::path out_root;
  std::size_t parallel = 1;
};

// Runs a parsed invocation and returns the exit code: 0 when every check
// passes, the FAIL count (at most 125) otherwise, 2 for configuration and
// domain errors.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

// argv front end (CLI11) around run().
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dissrel::cli
