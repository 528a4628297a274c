#include "cctskit/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "cctskit/capture.hpp"
#include "cctskit/csv.hpp"
#include "cctskit/raster.hpp"
#include "cctskit/screening.hpp"

namespace cctskit::fixtures {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kSize = 100;
constexpr double kCell = 2'000.0;
constexpr double kX0 = 600'000.0;
constexpr double kY0 = 3'200'000.0;

GridSpec spec() { return {kSize, kSize, kCell, kX0, kY0}; }

void fill(RasterGrid& g, std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1, double v) {
  for (std::size_t r = r0; r <= r1; ++r)
    for (std::size_t c = c0; c <= c1; ++c) g(r, c) = v;
}

// Coast in the south, a river down the middle, one highway and three towns.
RasterGrid landcover() {
  namespace lc = screening::landcover;
  RasterGrid g(spec(), static_cast<double>(lc::kOpen));
  fill(g, 80, 99, 0, 99, lc::kOffshore);
  fill(g, 76, 79, 0, 99, lc::kWetland);
  fill(g, 0, 79, 48, 49, lc::kWater);
  fill(g, 35, 35, 0, 99, lc::kRoad);
  fill(g, 8, 12, 8, 12, lc::kDeveloped);
  fill(g, 55, 58, 75, 79, lc::kDeveloped);
  fill(g, 60, 63, 15, 18, lc::kDeveloped);
  fill(g, 64, 72, 42, 46, lc::kDeveloped);
  // Rail and utility rights-of-way, cheap to follow.
  fill(g, 40, 75, 52, 52, lc::kRail);
  fill(g, 44, 44, 0, 99, lc::kRail);
  fill(g, 70, 70, 5, 95, lc::kRail);
  fill(g, 15, 15, 10, 90, lc::kRail);
  fill(g, 0, 75, 22, 22, lc::kRail);
  fill(g, 0, 75, 82, 82, lc::kRail);
  return g;
}

// Smooth terrain classes 0-2 (flat, rolling, rough).
RasterGrid terrain() {
  RasterGrid g(spec(), 0.0);
  for (std::size_t r = 0; r < kSize; ++r)
    for (std::size_t c = 0; c < kSize; ++c) {
      const double v = 0.5 + 0.5 * std::sin(static_cast<double>(r) / 7.0) * std::cos(static_cast<double>(c) / 9.0);
      g(r, c) = std::min(2.0, std::floor(3.0 * v));
    }
  return g;
}

RasterGrid active_fields() {
  RasterGrid g(spec(), 0.0);
  for (auto [r, c] : std::vector<std::pair<std::size_t, std::size_t>>{{5, 30}, {18, 90}, {52, 95}, {66, 62}}) g(r, c) = 1.0;
  return g;
}

// Bit i set where formation row i is present.
RasterGrid formation_extents() {
  RasterGrid g(spec(), 0.0);
  for (std::size_t r = 0; r < kSize; ++r)
    for (std::size_t c = 0; c < kSize; ++c) {
      int bits = 2;  // Miocene everywhere
      if (r >= 40) bits |= 1;
      if (r < 50) bits |= 4;
      g(r, c) = bits;
    }
  return g;
}

RasterGrid population() {
  RasterGrid g(spec(), 1.0);
  fill(g, 8, 12, 8, 12, 900.0);
  fill(g, 55, 58, 75, 79, 700.0);
  fill(g, 60, 63, 15, 18, 400.0);
  fill(g, 64, 72, 42, 46, 1200.0);
  fill(g, 40, 63, 38, 47, 40.0);
  fill(g, 40, 63, 54, 60, 30.0);
  return g;
}

// Tract 1 hugs the west bank of the industrial corridor, tract 2 the east bank.
RasterGrid tracts() {
  RasterGrid g(spec(), 0.0);
  fill(g, 40, 63, 38, 47, 1.0);
  fill(g, 40, 63, 54, 60, 2.0);
  return g;
}

double cx(std::size_t col) { return spec().center_x(col); }
double cy(std::size_t row) { return spec().center_y(row); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

void write_mini_gulf(const fs::path& dir) {
  fs::create_directories(dir);
  write_ascii_grid(dir / "landcover.asc", landcover());
  write_ascii_grid(dir / "terrain.asc", terrain());
  write_ascii_grid(dir / "active_fields.asc", active_fields());
  write_ascii_grid(dir / "formation_extents.asc", formation_extents());
  write_ascii_grid(dir / "population.asc", population());
  write_ascii_grid(dir / "tracts.asc", tracts());

  using capture::Sector;
  struct F {
    const char* id;
    const char* name;
    std::size_t row, col;
    Sector sector;
    double emitted, fraction, concentration, biogenic;
  };
  const std::vector<F> facilities{
      {"F01", "Riverbend Ammonia", 42, 46, Sector::Ammonia, 3.2, 0.65, 0.97, 0.0},
      {"F02", "Delta Refinery", 45, 51, Sector::Refining, 5.8, 0.55, 0.12, 0.0},
      {"F03", "Bayou Petrochemical", 50, 45, Sector::Petrochemical, 2.4, 0.50, 0.10, 0.0},
      {"F04", "Crescent Power", 54, 55, Sector::Power, 4.5, 0.90, 0.04, 0.0},
      {"F05", "Levee Hydrogen", 58, 47, Sector::Hydrogen, 2.1, 0.70, 0.45, 0.0},
      {"F06", "Gulf Gas Plant", 62, 57, Sector::GasProcessing, 0.9, 0.95, 0.96, 0.0},
      {"F07", "Cypress Pulp", 20, 20, Sector::PulpPaper, 1.2, 0.80, 0.13, 0.85},
      {"F08", "Marsh Cement", 70, 30, Sector::Cement, 1.5, 0.85, 0.20, 0.0},
      {"F09", "Lake Refinery", 30, 75, Sector::Refining, 3.6, 0.55, 0.12, 0.0},
      {"F10", "Parish Ammonia", 68, 85, Sector::Ammonia, 1.8, 0.65, 0.97, 0.0},
      {"F11", "North Power", 6, 60, Sector::Power, 2.7, 0.90, 0.04, 0.0},
      {"F12", "Canal Minerals", 74, 52, Sector::Minerals, 0.4, 0.80, 0.15, 0.0},
  };
  std::vector<capture::FacilityRecord> records;
  for (const auto& f : facilities) {
    capture::FacilityRecord r;
    r.id = f.id;
    r.name = f.name;
    r.x = cx(f.col);
    r.y = cy(f.row);
    r.sector = f.sector;
    r.emitted = f.emitted;
    r.capturable_fraction = f.fraction;
    r.co2_concentration = f.concentration;
    r.biogenic_fraction = f.biogenic;
    records.push_back(std::move(r));
  }
  capture::write_facilities_csv((dir / "facilities.csv").string(), records);

  write_text(dir / "formations.csv",
             "name,depth_m,thickness_m,perm_md,porosity,depth_min_m,depth_max_m\n"
             "Frio,2400,150,500,0.28,1800,3000\n"
             "Miocene,1500,90,200,0.25,1000,2000\n"
             "Tuscaloosa,3400,60,60,0.18,2800,3900\n");

  {
    csv::Writer w((dir / "announced_sites.csv").string(), {"id", "x", "y", "area_km2", "source"});
    w.add("A001").add(cx(74)).add(cy(40)).add(120.0).add("announced");
    w.end_row();
  }

  write_text(dir / "tract_burdens.csv",
             "tract_id,burdens\n"
             "1,health;legacy_pollution;housing\n"
             "2,energy;transportation\n");

  write_text(dir / "scenario.toml",
             "name = \"mini-gulf\"\n"
             "seed = 20240501\n"
             "output_dir = \"out\"\n"
             "target = -1.0\n"
             "node_limit = 5000\n"
             "\n"
             "[paths]\n"
             "facilities = \"facilities.csv\"\n"
             "landcover = \"landcover.asc\"\n"
             "active_fields = \"active_fields.asc\"\n"
             "formations = \"formations.csv\"\n"
             "formation_extents = \"formation_extents.asc\"\n"
             "announced_sites = \"announced_sites.csv\"\n"
             "population = \"population.asc\"\n"
             "tract_grid = \"tracts.asc\"\n"
             "tract_burdens = \"tract_burdens.csv\"\n"
             "cost_layers = { landcover = \"landcover.asc\", terrain = \"terrain.asc\" }\n"
             "\n"
             "[sampling]\n"
             "samples = 200\n"
             "\n"
             "[surface]\n"
             "sej_mode = \"off\"\n"
             "sej_weight = 1000.0\n"
             "\n"
             "[[surface.layers]]\n"
             "layer = \"landcover\"\n"
             "weights = { \"1\" = 8.0, \"2\" = 3.0, \"3\" = 1.2, \"4\" = 2.5, \"5\" = 6.0, \"6\" = 0.4 }\n"
             "\n"
             "[[surface.layers]]\n"
             "layer = \"terrain\"\n"
             "weights = { \"0\" = 1.0, \"1\" = 1.3, \"2\" = 1.7 }\n"
             "\n"
             "[phasing]\n"
             "online_years = [2030, 2035, 2040]\n"
             "targets = [4.0, 10.0, 16.0]\n");
}

}  // namespace cctskit::fixtures
