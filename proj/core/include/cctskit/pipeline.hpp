#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cctskit/scenario.hpp"

namespace cctskit::pipeline {

enum class Stage {
  Capture,
  Screen,
  Characterize,
  Surface,
  Route,
  SolveShared,
  SolveDedicated,
  Compare,
  Phase,
  All,
};

std::string to_string(Stage s);
Stage parse_stage(const std::string& s);

inline constexpr const char* kToolkitVersion = "0.3.0";

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;

/// Runs one stage (or all of them in dependency order), reading upstream
/// artifacts from and writing outputs to scenario.output_dir. Throws
/// DependencyError naming a missing upstream artifact.
void run_stage(const Scenario& scenario, Stage stage, std::ostream& log);

/// run_stage with errors mapped to exit codes and reported on `err`.
int run(const Scenario& scenario, Stage stage, std::ostream& log, std::ostream& err);

/// Plot-ready CSV series from whatever artifacts exist in `out_dir`.
void emit_plots(const std::filesystem::path& out_dir);

}  // namespace cctskit::pipeline
