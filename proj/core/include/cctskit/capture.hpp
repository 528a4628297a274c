#pragma once

#include <string>
#include <vector>

namespace cctskit::capture {

enum class Sector {
  Ammonia,
  Refining,
  Petrochemical,
  Power,
  PulpPaper,
  Cement,
  Hydrogen,
  GasProcessing,
  Minerals,
  Other,
};

std::string to_string(Sector s);
/// Case-insensitive; unknown names map to Sector::Other.
Sector parse_sector(const std::string& name);

/// One industrial emitter (or one capture stream of an emitter; several
/// records may share a location).
struct FacilityRecord {
  std::string id;
  std::string name;
  double x = 0.0;  // projected meters
  double y = 0.0;
  Sector sector = Sector::Other;
  double emitted = 0.0;              // MtCO2/y
  double capturable_fraction = 1.0;  // [0, 1]
  double co2_concentration = 0.1;    // volume fraction in (0, 1]
  double biogenic_fraction = 0.0;    // metadata only

  /// Throws DomainError naming the offending field.
  void validate() const;
};

/// One anchor of the cost scaling law: cost = c0 * captured^-exponent.
struct ScalingRow {
  double concentration;  // volume fraction
  double c0;             // $/t at 1 Mt/y
  double exponent;       // b
};

struct CaptureCostParams {
  // Nth-of-a-kind amine capture anchors at 5%, 10%, 15% and 94% CO2.
  std::vector<ScalingRow> rows{{0.05, 123.0, 0.146}, {0.10, 105.0, 0.167}, {0.15, 99.0, 0.175}, {0.94, 27.0, 0.415}};
  double capacity_factor = 0.90;
  double capital_charge_rate = 0.106;  // 1/y
  double design_capture_fraction = 0.95;
  double effective_capture_ratio = 0.73;  // reported only
  double capex_fraction_of_levelized = 0.5;  // calibration default
  double capture_floor = 1e-6;  // Mt/y; below this a facility is reported but still priced

  void validate() const;
};

/// Scaling-law coefficients at an arbitrary concentration.
struct Coefficients {
  double c0;
  double exponent;
};

/// Piecewise-linear in ln(concentration) between anchors, clamped outside.
Coefficients interpolate_coefficients(double concentration, const CaptureCostParams& params);

/// Annual capture, MtCO2/y: emitted * capturable_fraction * design_capture_fraction.
double co2_captured(double emitted, double capturable_fraction, const CaptureCostParams& params = {});

/// Levelized capture cost, $/tCO2 (2020$).
double capture_cost_per_tonne(double captured, double concentration, const CaptureCostParams& params = {});

/// Overnight capital, $, implied by the levelized cost and the capex share.
double capture_capital(double captured, double concentration, const CaptureCostParams& params = {});

struct FacilityCapture {
  std::string id;
  double captured = 0.0;       // Mt/y
  double cost_per_tonne = 0.0; // $/t; 0 when nothing is captured
  double capital = 0.0;        // $
  double effective_abatement = 0.0;  // Mt/y, captured * effective_capture_ratio
  bool below_floor = false;
};

/// Evaluates every facility; facilities capturing nothing get zero cost and capital.
std::vector<FacilityCapture> evaluate_facilities(const std::vector<FacilityRecord>& facilities,
                                                 const CaptureCostParams& params = {});

struct SupplyPoint {
  std::string id;
  double cumulative = 0.0;  // Mt/y
  double cost = 0.0;        // $/t

  friend bool operator==(const SupplyPoint&, const SupplyPoint&) = default;
};

/// Cost-supply curve: facilities ordered by ascending $/t (ties by id), with
/// cumulative capture. Facilities that capture nothing are omitted.
std::vector<SupplyPoint> cost_supply_curve(const std::vector<FacilityRecord>& facilities,
                                           const CaptureCostParams& params = {});

/// Facility inventory CSV: id,name,x,y,sector,emitted_mt,capturable_fraction,co2_concentration,biogenic_fraction
std::vector<FacilityRecord> read_facilities_csv(const std::string& path);
void write_facilities_csv(const std::string& path, const std::vector<FacilityRecord>& facilities);

}  // namespace cctskit::capture
