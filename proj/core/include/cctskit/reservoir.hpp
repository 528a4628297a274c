#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cctskit/screening.hpp"

namespace cctskit::reservoir {

inline constexpr double kMillidarcy = 9.869e-16;       // m^2
inline constexpr double kHydrostaticGradient = 9'810.0; // Pa/m
inline constexpr double kSecondsPerYear = 365.0 * 86'400.0;
inline constexpr double kFeet = 0.3048;                 // m

struct Co2State {
  double density;    // kg/m^3
  double viscosity;  // Pa s
};

/// Bilinear lookup in the embedded CO2 table (5-40 MPa, 20-150 C). Inputs
/// outside the table are clamped to its edges.
Co2State co2_properties(double pressure_pa, double temperature_c);
const char* co2_table_version();

struct FormationParams {
  std::string name;
  double depth = 0.0;         // m, mean
  double thickness = 0.0;     // m, mean
  double permeability = 0.0;  // m^2, mean
  double porosity = 0.0;      // mean
  double surface_temperature = 20.0;  // C
  double geothermal_gradient = 32.0;  // C/km
  double fracture_gradient = 16'000.0;  // Pa/m
  double depth_min = 0.0;  // m, validity range of depth draws
  double depth_max = 0.0;

  double mean_temperature() const { return surface_temperature + geothermal_gradient * depth / 1000.0; }
  void validate() const;
};

/// Settings for the Monte Carlo draws and the model validity clamps.
struct SamplingParams {
  double depth_sd_fraction = 0.10;
  double temperature_sd_fraction = 0.10;
  double other_sd_fraction = 0.15;  // thickness, permeability, porosity
  double max_thickness = 500.0;     // m
  double max_permeability = 1000.0 * kMillidarcy;
  double min_thickness = 1.0;
  double min_permeability = 0.01 * kMillidarcy;
  double min_porosity = 0.01;
  double max_porosity = 0.45;
  double eligible_depth_min = 3'000.0 * kFeet;
  double eligible_depth_max = 13'000.0 * kFeet;

  void validate() const;
};

/// Formation depth inside the 3,000-13,000 ft window.
bool is_eligible(const FormationParams& f, const SamplingParams& s = {});

struct SampledReservoir {
  double depth = 0.0;
  double thickness = 0.0;
  double permeability = 0.0;
  double porosity = 0.0;
  double temperature = 0.0;
  double fracture_gradient = 16'000.0;
  double pressure = 0.0;   // Pa, hydrostatic
  double density = 0.0;    // kg/m^3
  double viscosity = 0.0;  // Pa s

  friend bool operator==(const SampledReservoir&, const SampledReservoir&) = default;
};

/// A single draw at the formation means (no sampling).
SampledReservoir mean_sample(const FormationParams& f, const SamplingParams& s = {});

std::vector<SampledReservoir> sample_parameters(const FormationParams& f, std::size_t n, std::uint64_t seed,
                                                const SamplingParams& s = {});

struct StorageCostParams {
  double per_well_cap = 1.0;          // Mt/y
  double injection_years = 30.0;
  double discount_rate = 0.15;
  double pressure_fraction_of_fracture = 0.80;
  double water_disposal_cost = 2.0;   // $/m^3
  double storage_efficiency = 0.05;   // calibration default
  double well_density_cap = 0.1;      // wells/km^2, calibration default
  double wellbore_radius = 0.1;       // m

  // Unit costs (2020$), calibration defaults.
  double site_characterization = 50.0e6;  // $ per site
  double injection_well_fixed = 2.0e6;    // $ per well
  double injection_well_per_m = 2'000.0;  // $ per m of depth
  double water_well_fixed = 1.5e6;
  double water_well_per_m = 1'500.0;
  double pump = 1.5e6;                    // $ per injection pump
  double monitoring_per_year = 1.0e6;     // $/y per site
  double om_per_well_year = 0.25e6;       // $/y per injection + water well pair
  double plugging_per_well = 0.5e6;       // $ per well, paid after injection ends

  void validate() const;
};

struct InjectivityCapacity {
  double injectivity = 0.0;  // Mt/y
  double capacity = 0.0;     // Mt
  long n_wells = 1;
  double per_well_rate = 0.0;  // Mt/y, uncapped radial-flow rate
  bool feasible = true;        // false when the pressure window is non-positive
};

/// Allowed injection overpressure, Pa (may be <= 0).
double injection_overpressure(const SampledReservoir& s, const StorageCostParams& p);

/// Steady-state radial inflow rate of one well draining `drainage_area_km2`, Mt/y.
double radial_well_rate(const SampledReservoir& s, double drainage_area_km2, const StorageCostParams& p);

InjectivityCapacity injectivity_capacity(const SampledReservoir& s, double area_km2, const StorageCostParams& p);

struct StorageCostBreakdown {
  double capital = 0.0;        // $ at start of injection
  double annual_fixed = 0.0;   // $/y monitoring and O&M
  double annual_water = 0.0;   // $/y produced-water disposal
  double plugging = 0.0;       // $ at end of injection
  double levelized = 0.0;      // $/t
};

StorageCostBreakdown storage_cost_breakdown(double injectivity, double capacity, long n_wells,
                                            const SampledReservoir& s, const StorageCostParams& p);

/// Levelized storage cost, $/t.
double storage_cost(double injectivity, double capacity, long n_wells, const SampledReservoir& s,
                    const StorageCostParams& p);

enum class FormationMode { Single, Multi };

struct StorageSite {
  screening::CandidateSite site;
  std::string formation;  // "A+B" in multi mode
  double injectivity = 0.0;  // Mt/y
  double capacity = 0.0;     // Mt
  double storage_cost = 0.0; // $/t
  long n_injection_wells = 1;
  double capital = 0.0;      // $
};

struct Characterization {
  std::optional<StorageSite> site;
  std::string diagnostic;  // why the site was dropped, when it was
};

struct FormationEstimate {
  std::string formation;
  double injectivity = 0.0;
  double capacity = 0.0;
  long n_wells = 1;
  double storage_cost = 0.0;
  double capital = 0.0;
  SampledReservoir mean;
  bool feasible = false;
};

/// Monte Carlo estimate (average over `n` draws) for one formation under a site.
FormationEstimate estimate_formation(const screening::CandidateSite& site, const FormationParams& f, std::size_t n,
                                     std::uint64_t seed, const StorageCostParams& cost,
                                     const SamplingParams& sampling = {});

Characterization characterize_site(const screening::CandidateSite& site, const std::vector<FormationParams>& formations,
                                   std::size_t n, std::uint64_t seed, const StorageCostParams& cost,
                                   const SamplingParams& sampling = {}, FormationMode mode = FormationMode::Single);

/// Per-site stream seed derived from the global seed and the site id.
std::uint64_t site_seed(std::uint64_t global_seed, const std::string& site_id);

struct SiteFormations {
  screening::CandidateSite site;
  std::vector<FormationParams> formations;
};

struct CharacterizationRun {
  std::vector<StorageSite> sites;
  std::vector<std::string> diagnostics;
};

/// Characterizes every site with its own seed; sites without an eligible
/// feasible formation are dropped and reported in `diagnostics`.
CharacterizationRun characterize_sites(const std::vector<SiteFormations>& inputs, std::size_t n,
                                       std::uint64_t global_seed, const StorageCostParams& cost,
                                       const SamplingParams& sampling = {}, FormationMode mode = FormationMode::Single);

struct StoragePoint {
  std::string id;
  double cumulative = 0.0;  // Mt/y
  double cost = 0.0;        // $/t

  friend bool operator==(const StoragePoint&, const StoragePoint&) = default;
};

std::vector<StoragePoint> storage_supply_curve(const std::vector<StorageSite>& sites);

/// Formation CSV: name,depth_m,thickness_m,perm_md,porosity,depth_min_m,depth_max_m
std::vector<FormationParams> read_formations_csv(const std::string& path);
/// Adjacency CSV: site_id,formation
std::multimap<std::string, std::string> read_adjacency_csv(const std::string& path);

/// site_id,formation,injectivity_mt_y,capacity_mt,cost_usd_t,n_wells (+ x,y,area_km2,source,capital_usd)
void write_storage_sites_csv(const std::string& path, const std::vector<StorageSite>& sites);
std::vector<StorageSite> read_storage_sites_csv(const std::string& path);

}  // namespace cctskit::reservoir
