#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "cctskit/capture.hpp"
#include "cctskit/costsurface.hpp"
#include "cctskit/netdesign.hpp"
#include "cctskit/phasing.hpp"
#include "cctskit/reservoir.hpp"
#include "cctskit/routing.hpp"
#include "cctskit/screening.hpp"

namespace cctskit {

/// Input file locations. Relative paths resolve against the scenario file's directory.
struct ScenarioPaths {
  std::string facilities;
  std::string landcover;
  std::string active_fields;
  std::string formations;
  std::string formation_extents;  // optional: cell value = bitmask over formation rows
  std::string adjacency;          // optional: site_id,formation
  std::string announced_sites;    // optional
  std::string population;         // optional (SEJ)
  std::string tract_grid;         // optional (SEJ)
  std::string tract_burdens;      // optional (SEJ)
  std::map<std::string, std::string> cost_layers;  // layer name -> grid
};

struct Scenario {
  std::string name = "scenario";
  std::filesystem::path base_dir = ".";
  ScenarioPaths paths;

  capture::CaptureCostParams capture;
  screening::ScreeningParams screening;
  reservoir::SamplingParams sampling;
  reservoir::StorageCostParams storage;
  reservoir::FormationMode formation_mode = reservoir::FormationMode::Single;
  std::size_t monte_carlo_samples = 100;

  costsurface::WeightTable weights;
  costsurface::SejMode sej_mode = costsurface::SejMode::Off;
  double sej_population_threshold = 5.0;
  double sej_buffer = 182.0;
  routing::Connectivity connectivity = routing::Connectivity::Eight;

  netdesign::Economics economics;
  double target = -1.0;  // Mt/y; negative = every facility's full capture
  phasing::PhaseSchedule schedule;
  phasing::CreditPolicy credits;
  bool phase_on_shared_edges = true;  // restrict phasing to edges of the final shared design
  std::size_t node_limit = 2'000'000;

  std::uint64_t seed = 42;
  std::string output_dir = "out";

  std::filesystem::path resolve(const std::string& p) const;
  void validate() const;
};

/// Parses a TOML scenario; unknown keys are rejected.
Scenario parse_scenario(const std::string& toml_text, const std::filesystem::path& base_dir,
                        const std::string& source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

/// Complete TOML form (every default spelled out); parse_scenario(to_toml(s)) == s.
std::string to_toml(const Scenario& s);
/// JSON export with the same content as to_toml.
std::string to_json(const Scenario& s);

bool operator==(const Scenario& a, const Scenario& b);

/// FNV-1a 64 of the canonical TOML, as 16 hex digits. output_dir does not enter the hash.
std::string config_hash(const Scenario& s);

}  // namespace cctskit
