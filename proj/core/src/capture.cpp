#include "cctskit/capture.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "cctskit/csv.hpp"
#include "cctskit/error.hpp"

namespace cctskit::capture {

namespace {

const std::map<Sector, std::string>& sector_names() {
  static const std::map<Sector, std::string> names{
      {Sector::Ammonia, "ammonia"},        {Sector::Refining, "refining"},
      {Sector::Petrochemical, "petrochemical"}, {Sector::Power, "power"},
      {Sector::PulpPaper, "pulp_paper"},   {Sector::Cement, "cement"},
      {Sector::Hydrogen, "hydrogen"},      {Sector::GasProcessing, "gas_processing"},
      {Sector::Minerals, "minerals"},      {Sector::Other, "other"},
  };
  return names;
}

void require_fraction(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

std::string to_string(Sector s) { return sector_names().at(s); }

Sector parse_sector(const std::string& name) {
  std::string lower;
  for (char ch : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  for (const auto& [sector, label] : sector_names())
    if (label == lower) return sector;
  return Sector::Other;
}

void FacilityRecord::validate() const {
  if (!(emitted >= 0.0)) throw DomainError("facility " + id + ": emitted must be >= 0");
  if (!(capturable_fraction >= 0.0 && capturable_fraction <= 1.0))
    throw DomainError("facility " + id + ": capturable_fraction must lie in [0, 1]");
  if (!(co2_concentration > 0.0 && co2_concentration <= 1.0))
    throw DomainError("facility " + id + ": co2_concentration must lie in (0, 1]");
  if (!(biogenic_fraction >= 0.0 && biogenic_fraction <= 1.0))
    throw DomainError("facility " + id + ": biogenic_fraction must lie in [0, 1]");
}

void CaptureCostParams::validate() const {
  if (rows.empty()) throw ConfigError("capture cost table is empty");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!(r.concentration > 0.0 && r.concentration <= 1.0)) throw ConfigError("capture table concentration out of (0, 1]");
    if (!(r.c0 > 0.0) || !(r.exponent > 0.0)) throw ConfigError("capture table C0 and b must be positive");
    if (i > 0 && !(r.concentration > rows[i - 1].concentration))
      throw ConfigError("capture table concentrations must be strictly increasing");
  }
  if (!(capacity_factor > 0.0 && capacity_factor <= 1.0)) throw ConfigError("capacity_factor must lie in (0, 1]");
  if (!(capital_charge_rate > 0.0)) throw ConfigError("capital_charge_rate must be positive");
  if (!(design_capture_fraction > 0.0 && design_capture_fraction <= 1.0))
    throw ConfigError("design_capture_fraction must lie in (0, 1]");
  if (!(capex_fraction_of_levelized > 0.0 && capex_fraction_of_levelized < 1.0))
    throw ConfigError("capex_fraction_of_levelized must lie in (0, 1)");
}

Coefficients interpolate_coefficients(double concentration, const CaptureCostParams& params) {
  if (!(concentration > 0.0 && concentration <= 1.0)) throw DomainError("concentration must lie in (0, 1]");
  const auto& rows = params.rows;
  if (rows.empty()) throw ConfigError("capture cost table is empty");
  if (concentration <= rows.front().concentration) return {rows.front().c0, rows.front().exponent};
  if (concentration >= rows.back().concentration) return {rows.back().c0, rows.back().exponent};
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& lo = rows[i - 1];
    const auto& hi = rows[i];
    if (concentration == hi.concentration) return {hi.c0, hi.exponent};
    if (concentration < hi.concentration) {
      const double t = (std::log(concentration) - std::log(lo.concentration)) /
                       (std::log(hi.concentration) - std::log(lo.concentration));
      return {lo.c0 + t * (hi.c0 - lo.c0), lo.exponent + t * (hi.exponent - lo.exponent)};
    }
  }
  return {rows.back().c0, rows.back().exponent};
}

double co2_captured(double emitted, double capturable_fraction, const CaptureCostParams& params) {
  if (!(emitted >= 0.0)) throw DomainError("emitted must be >= 0");
  require_fraction(capturable_fraction, "capturable_fraction");
  return emitted * capturable_fraction * params.design_capture_fraction;
}

double capture_cost_per_tonne(double captured, double concentration, const CaptureCostParams& params) {
  if (captured == 0.0) throw DomainError("captured is zero: the scaling law diverges at zero capture");
  if (!(captured > 0.0)) throw DomainError("captured must be positive (got a negative or NaN amount)");
  const auto k = interpolate_coefficients(concentration, params);
  return k.c0 * std::pow(captured, -k.exponent);
}

double capture_capital(double captured, double concentration, const CaptureCostParams& params) {
  const double per_tonne = capture_cost_per_tonne(captured, concentration, params);
  return params.capex_fraction_of_levelized * per_tonne * captured * 1e6 * params.capacity_factor /
         params.capital_charge_rate;
}

std::vector<FacilityCapture> evaluate_facilities(const std::vector<FacilityRecord>& facilities,
                                                 const CaptureCostParams& params) {
  std::vector<FacilityCapture> out;
  out.reserve(facilities.size());
  for (const auto& f : facilities) {
    f.validate();
    FacilityCapture fc;
    fc.id = f.id;
    fc.captured = co2_captured(f.emitted, f.capturable_fraction, params);
    if (fc.captured > 0.0) {
      fc.cost_per_tonne = capture_cost_per_tonne(fc.captured, f.co2_concentration, params);
      fc.capital = capture_capital(fc.captured, f.co2_concentration, params);
    }
    fc.effective_abatement = fc.captured * params.effective_capture_ratio;
    fc.below_floor = fc.captured < params.capture_floor;
    out.push_back(fc);
  }
  return out;
}

std::vector<SupplyPoint> cost_supply_curve(const std::vector<FacilityRecord>& facilities,
                                           const CaptureCostParams& params) {
  auto evaluated = evaluate_facilities(facilities, params);
  std::erase_if(evaluated, [](const FacilityCapture& f) { return !(f.captured > 0.0); });
  std::sort(evaluated.begin(), evaluated.end(), [](const FacilityCapture& a, const FacilityCapture& b) {
    if (a.cost_per_tonne != b.cost_per_tonne) return a.cost_per_tonne < b.cost_per_tonne;
    return a.id < b.id;
  });
  std::vector<SupplyPoint> curve;
  curve.reserve(evaluated.size());
  double cumulative = 0.0;
  for (const auto& f : evaluated) {
    cumulative += f.captured;
    curve.push_back({f.id, cumulative, f.cost_per_tonne});
  }
  return curve;
}

std::vector<FacilityRecord> read_facilities_csv(const std::string& path) {
  const auto t = csv::Table::read(path);
  std::vector<FacilityRecord> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    FacilityRecord f;
    f.id = t.text(r, "id");
    f.name = t.text(r, "name");
    f.x = t.number(r, "x");
    f.y = t.number(r, "y");
    f.sector = parse_sector(t.text(r, "sector"));
    f.emitted = t.number(r, "emitted_mt");
    f.capturable_fraction = t.number(r, "capturable_fraction");
    f.co2_concentration = t.number(r, "co2_concentration");
    f.biogenic_fraction = t.number(r, "biogenic_fraction");
    try {
      f.validate();
    } catch (const DomainError& e) {
      throw ParseError(path, t.line_of(r), e.what());
    }
    out.push_back(std::move(f));
  }
  return out;
}

void write_facilities_csv(const std::string& path, const std::vector<FacilityRecord>& facilities) {
  csv::Writer w(path, {"id", "name", "x", "y", "sector", "emitted_mt", "capturable_fraction", "co2_concentration",
                       "biogenic_fraction"});
  for (const auto& f : facilities) {
    w.add(f.id).add(f.name).add(f.x).add(f.y).add(to_string(f.sector)).add(f.emitted).add(f.capturable_fraction);
    w.add(f.co2_concentration).add(f.biogenic_fraction);
    w.end_row();
  }
}

}  // namespace cctskit::capture
