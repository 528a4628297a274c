#pragma once

#include <filesystem>

namespace cctskit::fixtures {

/// Writes the synthetic "mini-gulf" dataset (100 x 100 grid at 2 km, 12
/// facilities, 3 formations, 2 tracts) and a scenario.toml into `dir`.
/// Output is deterministic.
void write_mini_gulf(const std::filesystem::path& dir);

}  // namespace cctskit::fixtures
