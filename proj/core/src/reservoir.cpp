#include "cctskit/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cctskit/csv.hpp"
#include "cctskit/error.hpp"
#include "cctskit/finance.hpp"

namespace cctskit::reservoir {

namespace {

#include "co2_table.inc"

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

std::size_t bracket(const double* axis, std::size_t n, double v, double& t) {
  if (v <= axis[0]) {
    t = 0.0;
    return 0;
  }
  if (v >= axis[n - 1]) {
    t = 1.0;
    return n - 2;
  }
  std::size_t i = static_cast<std::size_t>(std::upper_bound(axis, axis + n, v) - axis) - 1;
  i = std::min(i, n - 2);
  t = (v - axis[i]) / (axis[i + 1] - axis[i]);
  return i;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Mean that is exact when every value is identical.
template <typename Get>
double shifted_mean(const std::vector<SampledReservoir>& xs, Get get) {
  const double x0 = get(xs.front());
  double acc = 0.0;
  for (const auto& x : xs) acc += get(x) - x0;
  return x0 + acc / static_cast<double>(xs.size());
}

double shifted_mean(const std::vector<double>& xs) {
  const double x0 = xs.front();
  double acc = 0.0;
  for (double x : xs) acc += x - x0;
  return x0 + acc / static_cast<double>(xs.size());
}

SampledReservoir finish(const FormationParams& f, const SamplingParams& s, double depth, double thickness,
                        double permeability, double porosity, double temperature) {
  SampledReservoir out;
  const double dmin = f.depth_min > 0.0 ? f.depth_min : 1.0;
  const double dmax = f.depth_max > 0.0 ? f.depth_max : std::max(depth, dmin);
  out.depth = clamp(depth, dmin, dmax);
  out.thickness = clamp(thickness, s.min_thickness, s.max_thickness);
  out.permeability = clamp(permeability, s.min_permeability, s.max_permeability);
  out.porosity = clamp(porosity, s.min_porosity, s.max_porosity);
  out.temperature = std::max(temperature, f.surface_temperature);
  out.fracture_gradient = f.fracture_gradient;
  out.pressure = kHydrostaticGradient * out.depth;
  const auto co2 = co2_properties(out.pressure, out.temperature);
  out.density = co2.density;
  out.viscosity = co2.viscosity;
  return out;
}

}  // namespace

Co2State co2_properties(double pressure_pa, double temperature_c) {
  double tp = 0.0, tt = 0.0;
  const std::size_t ip = bracket(kPressureMPa, kPressureCount, pressure_pa * 1e-6, tp);
  const std::size_t it = bracket(kTemperatureC, kTemperatureCount, temperature_c, tt);
  auto at = [](std::size_t p, std::size_t t, int k) { return kTable[p * kTemperatureCount + t][k]; };
  Co2State s{};
  double* fields[2] = {&s.density, &s.viscosity};
  for (int k = 0; k < 2; ++k) {
    const double a = at(ip, it, k) * (1 - tt) + at(ip, it + 1, k) * tt;
    const double b = at(ip + 1, it, k) * (1 - tt) + at(ip + 1, it + 1, k) * tt;
    *fields[k] = a * (1 - tp) + b * tp;
  }
  return s;
}

const char* co2_table_version() { return "co2-span-wagner-v1"; }

void FormationParams::validate() const {
  if (!(depth > 0.0 && thickness > 0.0 && permeability > 0.0))
    throw DomainError("formation " + name + ": depth, thickness and permeability must be positive");
  if (!(porosity > 0.0 && porosity < 1.0)) throw DomainError("formation " + name + ": porosity must lie in (0, 1)");
  if (!(fracture_gradient > 0.0)) throw DomainError("formation " + name + ": fracture gradient must be positive");
  if (depth_min > 0.0 && depth_max > 0.0 && depth_min > depth_max)
    throw DomainError("formation " + name + ": depth_min exceeds depth_max");
}

void SamplingParams::validate() const {
  if (depth_sd_fraction < 0 || temperature_sd_fraction < 0 || other_sd_fraction < 0)
    throw ConfigError("standard deviation fractions must be >= 0");
  if (!(min_thickness > 0 && max_thickness >= min_thickness)) throw ConfigError("invalid thickness limits");
  if (!(min_permeability > 0 && max_permeability >= min_permeability)) throw ConfigError("invalid permeability limits");
  if (!(min_porosity > 0 && max_porosity < 1 && max_porosity >= min_porosity)) throw ConfigError("invalid porosity limits");
  if (!(eligible_depth_min < eligible_depth_max)) throw ConfigError("invalid eligible depth window");
}

bool is_eligible(const FormationParams& f, const SamplingParams& s) {
  return f.depth >= s.eligible_depth_min && f.depth <= s.eligible_depth_max;
}

SampledReservoir mean_sample(const FormationParams& f, const SamplingParams& s) {
  f.validate();
  return finish(f, s, f.depth, f.thickness, f.permeability, f.porosity, f.mean_temperature());
}

std::vector<SampledReservoir> sample_parameters(const FormationParams& f, std::size_t n, std::uint64_t seed,
                                                const SamplingParams& s) {
  if (n < 1) throw DomainError("sample count must be >= 1");
  f.validate();
  s.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const double t_mean = f.mean_temperature();
  std::vector<SampledReservoir> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Draw order is part of the reproducibility contract.
    const double depth = f.depth + s.depth_sd_fraction * f.depth * z(rng);
    const double thickness = f.thickness + s.other_sd_fraction * f.thickness * z(rng);
    const double permeability = f.permeability + s.other_sd_fraction * f.permeability * z(rng);
    const double porosity = f.porosity + s.other_sd_fraction * f.porosity * z(rng);
    const double temperature = t_mean + s.temperature_sd_fraction * t_mean * z(rng);
    out.push_back(finish(f, s, depth, thickness, permeability, porosity, temperature));
  }
  return out;
}

void StorageCostParams::validate() const {
  if (!(per_well_cap > 0 && injection_years > 0 && discount_rate >= 0 && water_disposal_cost >= 0))
    throw ConfigError("storage cost parameters must be positive");
  if (!(pressure_fraction_of_fracture > 0 && pressure_fraction_of_fracture <= 1))
    throw ConfigError("pressure_fraction_of_fracture must lie in (0, 1]");
  if (!(storage_efficiency > 0 && storage_efficiency <= 1)) throw ConfigError("storage_efficiency must lie in (0, 1]");
  if (!(well_density_cap > 0 && wellbore_radius > 0)) throw ConfigError("well density and radius must be positive");
  for (double v : {site_characterization, injection_well_fixed, injection_well_per_m, water_well_fixed, water_well_per_m,
                   pump, monitoring_per_year, om_per_well_year, plugging_per_well}) {
    if (v < 0) throw ConfigError("storage unit costs must be >= 0");
  }
}

double injection_overpressure(const SampledReservoir& s, const StorageCostParams& p) {
  return p.pressure_fraction_of_fracture * s.fracture_gradient * s.depth - s.pressure;
}

double radial_well_rate(const SampledReservoir& s, double drainage_area_km2, const StorageCostParams& p) {
  if (!(drainage_area_km2 > 0.0)) throw DomainError("drainage area must be positive");
  const double dp = injection_overpressure(s, p);
  if (dp <= 0.0) return 0.0;
  const double re = std::sqrt(drainage_area_km2 * 1e6 / std::numbers::pi);
  if (!(re > p.wellbore_radius)) throw DomainError("drainage radius does not exceed the wellbore radius");
  const double kg_per_s = 2.0 * std::numbers::pi * s.permeability * s.thickness * s.density * dp /
                          (s.viscosity * std::log(re / p.wellbore_radius));
  return kg_per_s * kSecondsPerYear * 1e-9;
}

InjectivityCapacity injectivity_capacity(const SampledReservoir& s, double area_km2, const StorageCostParams& p) {
  if (!(area_km2 > 0.0)) throw DomainError("site area must be positive");
  InjectivityCapacity out;
  out.capacity = area_km2 * 1e6 * s.thickness * s.porosity * s.density * p.storage_efficiency * 1e-9;
  const double by_capacity = std::floor(out.capacity / (p.per_well_cap * p.injection_years) + 1e-9);
  const double by_density = std::floor(area_km2 * p.well_density_cap + 1e-9);
  out.n_wells = std::max(1L, static_cast<long>(std::min(by_capacity, by_density)));
  if (injection_overpressure(s, p) <= 0.0) {
    out.feasible = false;
    out.injectivity = 0.0;
    out.per_well_rate = 0.0;
    return out;
  }
  out.per_well_rate = radial_well_rate(s, area_km2 / static_cast<double>(out.n_wells), p);
  out.injectivity = static_cast<double>(out.n_wells) * std::min(out.per_well_rate, p.per_well_cap);
  out.injectivity = std::min(out.injectivity, out.capacity / p.injection_years);
  return out;
}

StorageCostBreakdown storage_cost_breakdown(double injectivity, double capacity, long n_wells,
                                            const SampledReservoir& s, const StorageCostParams& p) {
  if (!(injectivity > 0.0)) throw DomainError("storage cost needs a positive injectivity");
  if (capacity < injectivity * p.injection_years * (1 - 1e-9))
    throw DomainError("capacity cannot hold the injectivity for the injection period");
  if (n_wells < 1) throw DomainError("at least one injection well is required");
  if (!(s.density > 0.0)) throw DomainError("CO2 density must be positive");
  StorageCostBreakdown b;
  const double wells = static_cast<double>(n_wells);
  b.capital = p.site_characterization +
              wells * (p.injection_well_fixed + p.injection_well_per_m * s.depth + p.water_well_fixed +
                       p.water_well_per_m * s.depth + p.pump);
  b.annual_fixed = p.monitoring_per_year + wells * p.om_per_well_year;
  b.annual_water = injectivity * 1e9 / s.density * p.water_disposal_cost;
  b.plugging = 2.0 * wells * p.plugging_per_well;
  const double annuity = finance::annuity_factor(p.discount_rate, p.injection_years);
  const double pv_cost = b.capital + (b.annual_fixed + b.annual_water) * annuity +
                         b.plugging * finance::discount_factor(p.discount_rate, p.injection_years);
  const double pv_tonnes = injectivity * 1e6 * annuity;
  b.levelized = pv_cost / pv_tonnes;
  return b;
}

double storage_cost(double injectivity, double capacity, long n_wells, const SampledReservoir& s,
                    const StorageCostParams& p) {
  return storage_cost_breakdown(injectivity, capacity, n_wells, s, p).levelized;
}

std::uint64_t site_seed(std::uint64_t global_seed, const std::string& site_id) {
  return splitmix64(global_seed ^ splitmix64(fnv1a(site_id)));
}

FormationEstimate estimate_formation(const screening::CandidateSite& site, const FormationParams& f, std::size_t n,
                                     std::uint64_t seed, const StorageCostParams& cost,
                                     const SamplingParams& sampling) {
  cost.validate();
  const std::uint64_t stream = splitmix64(seed ^ fnv1a(f.name));
  const auto draws = sample_parameters(f, n, stream, sampling);
  std::vector<double> inj, cap;
  inj.reserve(n);
  cap.reserve(n);
  for (const auto& d : draws) {
    const auto r = injectivity_capacity(d, site.area, cost);
    inj.push_back(r.injectivity);
    cap.push_back(r.capacity);
  }
  FormationEstimate e;
  e.formation = f.name;
  e.injectivity = shifted_mean(inj);
  e.capacity = shifted_mean(cap);
  e.mean = draws.front();
  e.mean.depth = shifted_mean(draws, [](const SampledReservoir& s) { return s.depth; });
  e.mean.thickness = shifted_mean(draws, [](const SampledReservoir& s) { return s.thickness; });
  e.mean.permeability = shifted_mean(draws, [](const SampledReservoir& s) { return s.permeability; });
  e.mean.porosity = shifted_mean(draws, [](const SampledReservoir& s) { return s.porosity; });
  e.mean.temperature = shifted_mean(draws, [](const SampledReservoir& s) { return s.temperature; });
  e.mean.pressure = shifted_mean(draws, [](const SampledReservoir& s) { return s.pressure; });
  e.mean.density = shifted_mean(draws, [](const SampledReservoir& s) { return s.density; });
  e.mean.viscosity = shifted_mean(draws, [](const SampledReservoir& s) { return s.viscosity; });
  e.feasible = e.injectivity > 0.0;
  if (!e.feasible) return e;
  e.n_wells = std::max(1L, static_cast<long>(std::ceil(e.injectivity / cost.per_well_cap - 1e-9)));
  const auto b = storage_cost_breakdown(e.injectivity, e.capacity, e.n_wells, e.mean, cost);
  e.storage_cost = b.levelized;
  e.capital = b.capital;
  return e;
}

Characterization characterize_site(const screening::CandidateSite& site, const std::vector<FormationParams>& formations,
                                   std::size_t n, std::uint64_t seed, const StorageCostParams& cost,
                                   const SamplingParams& sampling, FormationMode mode) {
  Characterization out;
  std::vector<FormationEstimate> estimates;
  bool any_eligible = false;
  for (const auto& f : formations) {
    if (!is_eligible(f, sampling)) continue;
    any_eligible = true;
    auto e = estimate_formation(site, f, n, seed, cost, sampling);
    if (e.feasible) estimates.push_back(std::move(e));
  }
  if (!any_eligible) {
    out.diagnostic = "site " + site.id + ": no underlying storage formation within the 3,000-13,000 ft window";
    return out;
  }
  if (estimates.empty()) {
    out.diagnostic = "site " + site.id + ": no formation admits injection below the fracture-pressure limit";
    return out;
  }

  reservoir::StorageSite s;
  s.site = site;
  if (mode == FormationMode::Single) {
    const auto best = std::min_element(estimates.begin(), estimates.end(),
                                       [](const FormationEstimate& a, const FormationEstimate& b) {
                                         return a.storage_cost < b.storage_cost;
                                       });
    s.formation = best->formation;
    s.injectivity = best->injectivity;
    s.capacity = best->capacity;
    s.storage_cost = best->storage_cost;
    s.n_injection_wells = best->n_wells;
    s.capital = best->capital;
  } else {
    double weighted = 0.0;
    s.n_injection_wells = 0;
    for (const auto& e : estimates) {
      if (!s.formation.empty()) s.formation += "+";
      s.formation += e.formation;
      s.injectivity += e.injectivity;
      s.capacity += e.capacity;
      s.n_injection_wells += e.n_wells;
      s.capital += e.capital;
      weighted += e.storage_cost * e.capacity;
    }
    s.storage_cost = weighted / s.capacity;
  }
  out.site = std::move(s);
  return out;
}

CharacterizationRun characterize_sites(const std::vector<SiteFormations>& inputs, std::size_t n,
                                       std::uint64_t global_seed, const StorageCostParams& cost,
                                       const SamplingParams& sampling, FormationMode mode) {
  CharacterizationRun run;
  for (const auto& in : inputs) {
    if (in.formations.empty()) {
      run.diagnostics.push_back("site " + in.site.id + ": no underlying storage formations");
      continue;
    }
    auto c = characterize_site(in.site, in.formations, n, site_seed(global_seed, in.site.id), cost, sampling, mode);
    if (c.site) {
      run.sites.push_back(std::move(*c.site));
    } else {
      run.diagnostics.push_back(c.diagnostic);
    }
  }
  return run;
}

std::vector<StoragePoint> storage_supply_curve(const std::vector<StorageSite>& sites) {
  std::vector<const StorageSite*> order;
  for (const auto& s : sites)
    if (s.injectivity > 0.0) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const StorageSite* a, const StorageSite* b) {
    if (a->storage_cost != b->storage_cost) return a->storage_cost < b->storage_cost;
    return a->site.id < b->site.id;
  });
  std::vector<StoragePoint> curve;
  double cumulative = 0.0;
  for (const auto* s : order) {
    cumulative += s->injectivity;
    curve.push_back({s->site.id, cumulative, s->storage_cost});
  }
  return curve;
}

std::vector<FormationParams> read_formations_csv(const std::string& path) {
  const auto t = csv::Table::read(path);
  std::vector<FormationParams> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    FormationParams f;
    f.name = t.text(r, "name");
    f.depth = t.number(r, "depth_m");
    f.thickness = t.number(r, "thickness_m");
    f.permeability = t.number(r, "perm_md") * kMillidarcy;
    f.porosity = t.number(r, "porosity");
    f.depth_min = t.number(r, "depth_min_m");
    f.depth_max = t.number(r, "depth_max_m");
    if (t.has_column("surface_temp_c")) f.surface_temperature = t.number(r, "surface_temp_c");
    if (t.has_column("gradient_c_per_km")) f.geothermal_gradient = t.number(r, "gradient_c_per_km");
    if (t.has_column("fracture_gradient_pa_m")) f.fracture_gradient = t.number(r, "fracture_gradient_pa_m");
    try {
      f.validate();
    } catch (const DomainError& e) {
      throw ParseError(path, t.line_of(r), e.what());
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::multimap<std::string, std::string> read_adjacency_csv(const std::string& path) {
  const auto t = csv::Table::read(path);
  std::multimap<std::string, std::string> out;
  for (std::size_t r = 0; r < t.rows(); ++r) out.emplace(t.text(r, "site_id"), t.text(r, "formation"));
  return out;
}

void write_storage_sites_csv(const std::string& path, const std::vector<StorageSite>& sites) {
  csv::Writer w(path, {"site_id", "formation", "injectivity_mt_y", "capacity_mt", "cost_usd_t", "n_wells", "x", "y",
                       "area_km2", "source", "capital_usd"});
  for (const auto& s : sites) {
    w.add(s.site.id).add(s.formation).add(s.injectivity).add(s.capacity).add(s.storage_cost).add(s.n_injection_wells);
    w.add(s.site.x).add(s.site.y).add(s.site.area).add(screening::to_string(s.site.source)).add(s.capital);
    w.end_row();
  }
}

std::vector<StorageSite> read_storage_sites_csv(const std::string& path) {
  const auto t = csv::Table::read(path);
  std::vector<StorageSite> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    StorageSite s;
    s.site.id = t.text(r, "site_id");
    s.formation = t.text(r, "formation");
    s.injectivity = t.number(r, "injectivity_mt_y");
    s.capacity = t.number(r, "capacity_mt");
    s.storage_cost = t.number(r, "cost_usd_t");
    s.n_injection_wells = t.integer(r, "n_wells");
    s.site.x = t.number(r, "x");
    s.site.y = t.number(r, "y");
    s.site.area = t.number(r, "area_km2");
    s.site.source = screening::parse_site_source(t.text(r, "source"));
    s.capital = t.number(r, "capital_usd");
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace cctskit::reservoir
