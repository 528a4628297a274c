#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <future>
#include <numbers>
#include <random>

#include "cctskit/error.hpp"
#include "cctskit/finance.hpp"
#include "cctskit/reservoir.hpp"
#include "oracles.hpp"

using namespace cctskit;
using namespace cctskit::reservoir;

namespace {

SampledReservoir worked_sample() {
  SampledReservoir s;
  s.depth = 2000.0;
  s.thickness = 100.0;
  s.permeability = 100.0 * kMillidarcy;
  s.porosity = 0.25;
  s.density = 700.0;
  s.viscosity = 5.5e-5;
  s.pressure = kHydrostaticGradient * s.depth;
  s.fracture_gradient = 16'000.0;
  return s;
}

FormationParams formation(const std::string& name, double depth, double thickness, double perm_md, double porosity) {
  FormationParams f;
  f.name = name;
  f.depth = depth;
  f.thickness = thickness;
  f.permeability = perm_md * kMillidarcy;
  f.porosity = porosity;
  f.depth_min = depth * 0.5;
  f.depth_max = depth * 1.5;
  return f;
}

screening::CandidateSite site(const std::string& id, double area) {
  screening::CandidateSite s;
  s.id = id;
  s.area = area;
  return s;
}

SampledReservoir random_sample(std::mt19937_64& rng) {
  auto u = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  SampledReservoir s;
  s.depth = u(1000, 3800);
  s.thickness = u(10, 300);
  s.permeability = u(1, 800) * kMillidarcy;
  s.porosity = u(0.05, 0.35);
  s.density = u(400, 850);
  s.viscosity = u(3e-5, 9e-5);
  s.pressure = kHydrostaticGradient * s.depth;
  return s;
}

}  // namespace

TEST(Reservoir, WorkedExampleUncappedRate) {
  const auto s = worked_sample();
  const StorageCostParams p;
  // Single well draining the whole 78.5 km^2.
  const double q = radial_well_rate(s, 78.5, p);
  const double dp = 0.8 * 16'000.0 * 2000.0 - 9'810.0 * 2000.0;
  EXPECT_NEAR(dp, 5.98e6, 1.0);
  const double re = std::sqrt(78.5e6 / std::numbers::pi);
  EXPECT_NEAR(re, 4999.0, 1.0);
  const double oracle_q = 2 * std::numbers::pi * 100 * 9.869e-16 * 100 * 700 * dp / (5.5e-5 * std::log(re / 0.1)) *
                          365 * 86400 / 1e9;
  EXPECT_NEAR(q, oracle_q, 1e-9 * oracle_q);
  EXPECT_NEAR(q, 13.8, 0.05);
}

TEST(Reservoir, WorkedExampleCapacityWellsInjectivity) {
  const auto r = injectivity_capacity(worked_sample(), 78.5, StorageCostParams{});
  EXPECT_NEAR(r.capacity, 68.6875, 1e-9);
  EXPECT_EQ(r.n_wells, 2);
  EXPECT_DOUBLE_EQ(r.injectivity, 2.0);
  EXPECT_TRUE(r.feasible);
}

TEST(Reservoir, MatchesClosedFormOracleOnRandomSamples) {
  std::mt19937_64 rng(2024);
  const StorageCostParams p;
  for (int i = 0; i < 20; ++i) {
    const auto s = random_sample(rng);
    const double area = std::uniform_real_distribution<double>(80, 800)(rng);
    const auto got = injectivity_capacity(s, area, p);
    const auto o = oracle::reservoir_closed_form(s.permeability, s.thickness, s.depth, s.density, s.viscosity,
                                                 s.porosity, area, p);
    EXPECT_NEAR(got.capacity, o.capacity, 1e-9 * o.capacity);
    EXPECT_EQ(got.n_wells, o.wells);
    EXPECT_NEAR(got.per_well_rate, o.uncapped_rate, 1e-9 * o.uncapped_rate);
    EXPECT_NEAR(got.injectivity, o.injectivity, 1e-9 * o.injectivity);
    EXPECT_LE(got.injectivity, got.n_wells * p.per_well_cap + 1e-12);
    EXPECT_LE(got.injectivity * p.injection_years, got.capacity * (1 + 1e-12));
  }
}

TEST(Reservoir, ThinFormationHasVanishingCapacity) {
  auto s = worked_sample();
  s.thickness = 1e-9;
  const auto r = injectivity_capacity(s, 78.5, StorageCostParams{});
  EXPECT_LT(r.capacity, 1e-9);
  EXPECT_LT(r.injectivity, 1e-9);
}

TEST(Reservoir, ShallowSiteWithoutPressureWindowIsInfeasible) {
  StorageCostParams p;
  p.pressure_fraction_of_fracture = 0.5;  // 8,000 Pa/m < hydrostatic
  const auto r = injectivity_capacity(worked_sample(), 78.5, p);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.injectivity, 0.0);
}

TEST(Reservoir, InjectivityNondecreasingInPermeabilityAndThickness) {
  StorageCostParams p;
  p.per_well_cap = 1e6;  // stay below the cap
  auto s = worked_sample();
  s.permeability = 1 * kMillidarcy;
  double prev = 0.0;
  for (double k = 1; k < 1000; k *= 1.5) {
    s.permeability = k * kMillidarcy;
    const double inj = injectivity_capacity(s, 100.0, p).injectivity;
    EXPECT_GE(inj, prev);
    prev = inj;
  }
  s = worked_sample();
  prev = 0.0;
  for (double h = 5; h < 400; h *= 1.4) {
    s.thickness = h;
    const double inj = injectivity_capacity(s, 100.0, p).injectivity;
    EXPECT_GE(inj, prev);
    prev = inj;
  }
}

TEST(Reservoir, InjectivityNondecreasingInAreaWhereWellsCapped) {
  // With the default cap every well of this sample is rate-capped, so area
  // only enters through the well count.
  const StorageCostParams p;
  const auto s = worked_sample();
  double prev = 0.0;
  for (double a = 20; a < 2000; a *= 1.3) {
    const double inj = injectivity_capacity(s, a, p).injectivity;
    EXPECT_GE(inj, prev);
    prev = inj;
  }
}

TEST(Reservoir, UncappedSingleWellRateFallsLogarithmicallyWithArea) {
  // A lone uncapped well draining a larger cylinder has a larger ln(re/rw).
  StorageCostParams p;
  p.per_well_cap = 1e6;
  const auto s = worked_sample();
  const double q1 = radial_well_rate(s, 100.0, p), q4 = radial_well_rate(s, 400.0, p);
  const double re1 = std::sqrt(100e6 / std::numbers::pi), re4 = 2 * re1;
  EXPECT_NEAR(q1 / q4, std::log(re4 / 0.1) / std::log(re1 / 0.1), 1e-12);
}

TEST(Reservoir, CapacityLinearInItsFactors) {
  const StorageCostParams p;
  auto s = worked_sample();
  const double base = injectivity_capacity(s, 100.0, p).capacity;
  EXPECT_NEAR(injectivity_capacity(s, 300.0, p).capacity, 3 * base, 1e-9 * base);
  s.thickness *= 2;
  EXPECT_NEAR(injectivity_capacity(s, 100.0, p).capacity, 2 * base, 1e-9 * base);
  s = worked_sample();
  s.porosity *= 0.5;
  EXPECT_NEAR(injectivity_capacity(s, 100.0, p).capacity, 0.5 * base, 1e-9 * base);
  auto p2 = p;
  p2.storage_efficiency *= 3;
  EXPECT_NEAR(injectivity_capacity(worked_sample(), 100.0, p2).capacity, 3 * base, 1e-9 * base);
}

TEST(Reservoir, WaterOnlyCostIsDisposalPricePerTonne) {
  StorageCostParams p;
  p.discount_rate = 0.0;
  p.site_characterization = p.injection_well_fixed = p.injection_well_per_m = 0;
  p.water_well_fixed = p.water_well_per_m = p.pump = 0;
  p.monitoring_per_year = p.om_per_well_year = p.plugging_per_well = 0;
  auto s = worked_sample();
  EXPECT_NEAR(storage_cost(1.0, 100.0, 1, s, p), 2.0 / 0.7, 1e-12);
}

TEST(Reservoir, StorageCostMatchesPresentValueOracle) {
  const StorageCostParams p;
  const auto s = worked_sample();
  const double inj = 2.0, cap = 68.0;
  const long wells = 2;
  const double capital = 50e6 + wells * (2e6 + 2000 * 2000 + 1.5e6 + 1500 * 2000 + 1.5e6);
  const double annual = 1e6 + wells * 0.25e6 + inj * 1e9 / 700 * 2.0;
  const double a = oracle::annuity_by_sum(0.15, 30);
  const double pv = capital + annual * a + 2 * wells * 0.5e6 / std::pow(1.15, 30);
  EXPECT_NEAR(storage_cost(inj, cap, wells, s, p), pv / (inj * 1e6 * a), 1e-9);
}

TEST(Reservoir, StorageCostRejectsBadInputs) {
  const StorageCostParams p;
  EXPECT_THROW(storage_cost(0.0, 10.0, 1, worked_sample(), p), DomainError);
  EXPECT_THROW(storage_cost(1.0, 10.0, 1, worked_sample(), p), DomainError);  // 30 Mt needed
}

TEST(Reservoir, CostMonotonicityOnRandomDraws) {
  std::mt19937_64 rng(99);
  const StorageCostParams p;
  for (int i = 0; i < 100; ++i) {
    const auto s = random_sample(rng);
    const double inj = std::uniform_real_distribution<double>(0.5, 5.0)(rng);
    const long wells = std::max(1L, static_cast<long>(std::ceil(inj)));
    const double cap = inj * 40.0;
    const auto b = storage_cost_breakdown(inj, cap, wells, s, p);
    // Scale economies at fixed capital.
    EXPECT_LE(storage_cost(inj * 1.5, cap * 1.5, wells, s, p), b.levelized);
    // Doubling every capital item.
    auto p2 = p;
    p2.site_characterization *= 2;
    p2.injection_well_fixed *= 2;
    p2.injection_well_per_m *= 2;
    p2.water_well_fixed *= 2;
    p2.water_well_per_m *= 2;
    p2.pump *= 2;
    const auto b2 = storage_cost_breakdown(inj, cap, wells, s, p2);
    EXPECT_NEAR(b2.capital, 2 * b.capital, 1e-6);
    EXPECT_GT(b2.levelized, b.levelized);
  }
}

TEST(Reservoir, DeepPermeableSiteCostsSixToTwelveDollars) {
  // Frio-like: deep, thick and permeable, under a 200 km^2 site.
  const auto f = formation("Deep", 2400, 150, 500, 0.28);
  const auto c = characterize_site(site("D1", 200.0), {f}, 200, 11, StorageCostParams{});
  ASSERT_TRUE(c.site.has_value()) << c.diagnostic;
  EXPECT_GE(c.site->storage_cost, 6.0);
  EXPECT_LE(c.site->storage_cost, 12.0);
}

TEST(Reservoir, ZeroSigmaReproducesDeterministicEvaluation) {
  SamplingParams sp;
  sp.depth_sd_fraction = sp.temperature_sd_fraction = sp.other_sd_fraction = 0.0;
  const auto f = formation("F", 2200, 120, 250, 0.24);
  const StorageCostParams p;
  const auto draws = sample_parameters(f, 50, 1, sp);
  const auto mean = mean_sample(f, sp);
  for (const auto& d : draws) EXPECT_EQ(d, mean);

  const auto c = characterize_site(site("Z", 150.0), {f}, 50, 1, p, sp);
  ASSERT_TRUE(c.site);
  const auto det = injectivity_capacity(mean, 150.0, p);
  EXPECT_EQ(c.site->injectivity, det.injectivity);
  EXPECT_EQ(c.site->capacity, det.capacity);
  const long wells = std::max(1L, static_cast<long>(std::ceil(det.injectivity / p.per_well_cap - 1e-9)));
  EXPECT_EQ(c.site->storage_cost, storage_cost(det.injectivity, det.capacity, wells, mean, p));
}

TEST(Reservoir, SampleMeansWithinThreeStandardErrors) {
  const auto f = formation("F", 2000, 100, 200, 0.2);
  const SamplingParams sp;
  const std::size_t n = 10'000;
  const auto draws = sample_parameters(f, n, 12345, sp);
  auto check = [&](auto get, double mean, double sd) {
    double sum = 0;
    for (const auto& d : draws) sum += get(d);
    const double se = sd / std::sqrt(static_cast<double>(n));
    EXPECT_NEAR(sum / n, mean, 3 * se);
  };
  check([](const SampledReservoir& s) { return s.depth; }, 2000.0, 200.0);
  check([](const SampledReservoir& s) { return s.thickness; }, 100.0, 15.0);
  check([](const SampledReservoir& s) { return s.permeability; }, 200 * kMillidarcy, 30 * kMillidarcy);
  check([](const SampledReservoir& s) { return s.porosity; }, 0.2, 0.03);
  const double t = f.mean_temperature();
  check([](const SampledReservoir& s) { return s.temperature; }, t, 0.1 * t);
}

TEST(Reservoir, SamplesClampedAndHydrostatic) {
  auto f = formation("F", 2000, 480, 900, 0.42);
  SamplingParams sp;
  sp.other_sd_fraction = 0.5;
  for (const auto& d : sample_parameters(f, 2000, 5, sp)) {
    EXPECT_LE(d.thickness, sp.max_thickness);
    EXPECT_GE(d.thickness, sp.min_thickness);
    EXPECT_LE(d.permeability, sp.max_permeability);
    EXPECT_LE(d.porosity, sp.max_porosity);
    EXPECT_GE(d.depth, f.depth_min);
    EXPECT_LE(d.depth, f.depth_max);
    EXPECT_DOUBLE_EQ(d.pressure, kHydrostaticGradient * d.depth);
  }
}

TEST(Reservoir, SeedsReproduceRegardlessOfSchedule) {
  std::vector<SiteFormations> inputs;
  for (int i = 0; i < 6; ++i)
    inputs.push_back({site("S" + std::to_string(i), 100.0 + 30 * i),
                      {formation("Frio", 2400, 150, 500, 0.28), formation("Mio", 1500, 90, 200, 0.25)}});
  const StorageCostParams p;
  const auto serial = characterize_sites(inputs, 100, 77, p);
  // One site at a time on separate threads, in reverse order.
  std::vector<std::future<CharacterizationRun>> futures;
  for (auto it = inputs.rbegin(); it != inputs.rend(); ++it)
    futures.push_back(std::async(std::launch::async, [&p, in = *it] { return characterize_sites({in}, 100, 77, p); }));
  std::vector<StorageSite> parallel;
  for (auto& fut : futures) parallel.push_back(fut.get().sites.at(0));
  std::reverse(parallel.begin(), parallel.end());
  ASSERT_EQ(serial.sites.size(), parallel.size());
  for (std::size_t i = 0; i < parallel.size(); ++i) {
    EXPECT_EQ(serial.sites[i].injectivity, parallel[i].injectivity);
    EXPECT_EQ(serial.sites[i].capacity, parallel[i].capacity);
    EXPECT_EQ(serial.sites[i].storage_cost, parallel[i].storage_cost);
  }
  const auto again = characterize_sites(inputs, 100, 77, p);
  for (std::size_t i = 0; i < again.sites.size(); ++i) EXPECT_EQ(again.sites[i].storage_cost, serial.sites[i].storage_cost);
}

TEST(Reservoir, CheaperFormationSelectedInSingleMode) {
  SamplingParams sp;
  sp.depth_sd_fraction = sp.temperature_sd_fraction = sp.other_sd_fraction = 0.0;
  const StorageCostParams p;
  const auto a = formation("A", 1500, 40, 30, 0.2);
  const auto b = formation("B", 2500, 150, 500, 0.28);
  auto cost_of = [&](const FormationParams& f) {
    const auto m = mean_sample(f, sp);
    const auto r = injectivity_capacity(m, 200.0, p);
    const long w = std::max(1L, static_cast<long>(std::ceil(r.injectivity / p.per_well_cap - 1e-9)));
    return storage_cost(r.injectivity, r.capacity, w, m, p);
  };
  ASSERT_LT(cost_of(b), cost_of(a));
  const auto c = characterize_site(site("X", 200.0), {a, b}, 10, 3, p, sp);
  ASSERT_TRUE(c.site);
  EXPECT_EQ(c.site->formation, "B");

  const auto multi = characterize_site(site("X", 200.0), {a, b}, 10, 3, p, sp, FormationMode::Multi);
  const auto only_a = characterize_site(site("X", 200.0), {a}, 10, 3, p, sp);
  ASSERT_TRUE(multi.site && only_a.site);
  EXPECT_NEAR(multi.site->injectivity, only_a.site->injectivity + c.site->injectivity, 1e-12);
  EXPECT_GE(multi.site->injectivity, c.site->injectivity);
  EXPECT_EQ(multi.site->formation, "A+B");
}

TEST(Reservoir, IneligibleFormationsDropSite) {
  const auto shallow = formation("Shallow", 500, 50, 100, 0.2);
  const auto c = characterize_site(site("Q", 100.0), {shallow}, 10, 1, StorageCostParams{});
  EXPECT_FALSE(c.site);
  EXPECT_NE(c.diagnostic.find("Q"), std::string::npos);
  EXPECT_FALSE(is_eligible(shallow));
  EXPECT_TRUE(is_eligible(formation("ok", 914.5, 50, 100, 0.2)));
}

TEST(Reservoir, SupplyCurveSortThenScan) {
  std::vector<StorageSite> sites;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    StorageSite s;
    s.site.id = "S" + std::to_string(i);
    s.injectivity = std::uniform_real_distribution<double>(0.5, 6)(rng);
    s.storage_cost = std::uniform_real_distribution<double>(5, 20)(rng);
    sites.push_back(s);
  }
  auto sorted = sites;
  std::sort(sorted.begin(), sorted.end(), [](const StorageSite& a, const StorageSite& b) { return a.storage_cost < b.storage_cost; });
  const auto curve = storage_supply_curve(sites);
  ASSERT_EQ(curve.size(), 10u);
  double cum = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    cum += sorted[i].injectivity;
    EXPECT_EQ(curve[i].id, sorted[i].site.id);
    EXPECT_NEAR(curve[i].cumulative, cum, 1e-12);
  }
  std::shuffle(sites.begin(), sites.end(), rng);
  EXPECT_EQ(storage_supply_curve(sites), curve);
  EXPECT_EQ(storage_supply_curve({sites[0]}).size(), 1u);
}

TEST(Reservoir, Co2PropertiesPlausibleAndClamped) {
  const auto st = co2_properties(20e6, 80.0);
  EXPECT_GT(st.density, 500.0);
  EXPECT_LT(st.density, 900.0);
  EXPECT_GT(st.viscosity, 2e-5);
  EXPECT_LT(st.viscosity, 1e-4);
  const auto lo = co2_properties(1e6, 0.0), edge = co2_properties(5e6, 20.0);
  EXPECT_EQ(lo.density, edge.density);
}

TEST(Reservoir, SiteSeedDependsOnIdAndSeed) {
  EXPECT_NE(site_seed(1, "S001"), site_seed(1, "S002"));
  EXPECT_NE(site_seed(1, "S001"), site_seed(2, "S001"));
  EXPECT_EQ(site_seed(1, "S001"), site_seed(1, "S001"));
}

TEST(Reservoir, StorageSitesCsvRoundTrip) {
  const auto path = (std::filesystem::temp_directory_path() / "cctskit_storage.csv").string();
  const auto c = characterize_site(site("R1", 200.0), {formation("Deep", 2400, 150, 500, 0.28)}, 20, 2, StorageCostParams{});
  ASSERT_TRUE(c.site);
  write_storage_sites_csv(path, {*c.site});
  const auto back = read_storage_sites_csv(path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].injectivity, c.site->injectivity);
  EXPECT_EQ(back[0].storage_cost, c.site->storage_cost);
  EXPECT_EQ(back[0].n_injection_wells, c.site->n_injection_wells);
  EXPECT_EQ(back[0].formation, "Deep");
}
