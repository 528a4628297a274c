#include "cctskit/costsurface.hpp"

#include <cmath>
#include <map>

#include "cctskit/csv.hpp"
#include "cctskit/error.hpp"
#include "cctskit/screening.hpp"

namespace cctskit::costsurface {

namespace {

const std::map<Burden, std::string>& burden_names() {
  static const std::map<Burden, std::string> names{
      {Burden::Health, "health"},
      {Burden::WaterWastewater, "water_wastewater"},
      {Burden::LegacyPollution, "legacy_pollution"},
      {Burden::ClimateChange, "climate_change"},
      {Burden::Energy, "energy"},
      {Burden::Housing, "housing"},
      {Burden::Transportation, "transportation"},
      {Burden::WorkforceDevelopment, "workforce_development"},
  };
  return names;
}

}  // namespace

std::string to_string(Burden b) { return burden_names().at(b); }

Burden parse_burden(const std::string& s) {
  for (const auto& [b, name] : burden_names())
    if (name == s) return b;
  throw DomainError("unknown burden category '" + s + "'");
}

std::string to_string(SejMode m) {
  switch (m) {
    case SejMode::Off: return "off";
    case SejMode::Sej3: return "sej3";
    case SejMode::Sej8: return "sej8";
  }
  return "off";
}

SejMode parse_sej_mode(const std::string& s) {
  if (s == "off") return SejMode::Off;
  if (s == "sej3") return SejMode::Sej3;
  if (s == "sej8") return SejMode::Sej8;
  throw ConfigError("unknown SEJ mode '" + s + "' (expected off, sej3 or sej8)");
}

SejParams SejParams::sej3() {
  SejParams p;
  p.categories = {Burden::Health, Burden::WaterWastewater, Burden::LegacyPollution};
  return p;
}

SejParams SejParams::sej8() {
  SejParams p;
  for (const auto& [b, name] : burden_names()) p.categories.insert(b);
  return p;
}

void SejParams::validate() const {
  if (categories.empty()) throw ConfigError("SEJ categories must not be empty");
  if (!(buffer >= 0.0)) throw ConfigError("SEJ buffer must be >= 0");
  if (std::isnan(population_threshold)) throw ConfigError("SEJ population threshold is NaN");
}

Mask build_sej_layer(const RasterGrid& population, const std::vector<Tract>& tracts, const SejParams& params) {
  params.validate();
  Mask marked(population.spec(), std::uint8_t{0});
  for (const auto& tract : tracts) {
    bool selected = false;
    for (Burden b : tract.burdens) selected = selected || params.categories.count(b) > 0;
    if (!selected) continue;
    for (std::size_t idx : tract.cells) {
      if (idx >= population.size()) throw AlignmentError("tract " + tract.id + " references a cell outside the population grid");
      const double pop = population[idx];
      if (pop == population.nodata()) continue;
      if (pop > params.population_threshold) marked[idx] = 1;
    }
  }
  return screening::buffer_exclusion(marked, params.buffer);
}

Mask coarsen_any(const Mask& fine, const GridSpec& coarse) {
  const auto& f = fine.spec();
  const double ratio = coarse.cellsize / f.cellsize;
  const auto factor = static_cast<std::size_t>(std::llround(ratio));
  if (factor < 1 || std::abs(ratio - static_cast<double>(factor)) > 1e-9 * ratio || f.ncols != coarse.ncols * factor ||
      f.nrows != coarse.nrows * factor || std::abs(f.x0 - coarse.x0) > 1e-6 * coarse.cellsize ||
      std::abs(f.y0 - coarse.y0) > 1e-6 * coarse.cellsize) {
    throw AlignmentError("fine grid does not tile the coarse grid by an integer factor");
  }
  Mask out(coarse, std::uint8_t{0});
  for (std::size_t r = 0; r < f.nrows; ++r)
    for (std::size_t c = 0; c < f.ncols; ++c)
      if (fine(r, c)) out(r / factor, c / factor) = 1;
  return out;
}

std::vector<Tract> read_tracts(const std::string& grid_path, const std::string& csv_path) {
  const auto grid = read_ascii_grid(grid_path);
  const auto table = csv::Table::read(csv_path);
  std::vector<Tract> tracts;
  std::map<long, std::size_t> by_number;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    Tract t;
    t.id = table.text(r, "tract_id");
    const std::string burdens = table.text(r, "burdens");
    for (const auto& part : csv::split(burdens, ';')) {
      const auto name = csv::trim(part);
      if (name.empty()) continue;
      try {
        t.burdens.insert(parse_burden(name));
      } catch (const DomainError& e) {
        throw ParseError(csv_path, table.line_of(r), e.what());
      }
    }
    long number = 0;
    try {
      number = std::stol(t.id);
    } catch (const std::exception&) {
      throw ParseError(csv_path, table.line_of(r), "tract_id must be the integer used in the tract grid");
    }
    by_number[number] = tracts.size();
    tracts.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = grid[i];
    if (v == grid.nodata() || !(v > 0.0)) continue;
    const auto it = by_number.find(std::lround(v));
    if (it != by_number.end()) tracts[it->second].cells.push_back(i);
  }
  return tracts;
}

const LayerWeights* WeightTable::find(const std::string& layer) const {
  for (const auto& l : layers)
    if (l.layer == layer) return &l;
  return nullptr;
}

void WeightTable::validate() const {
  if (!(base_cost > 0.0)) throw ConfigError("base_cost must be positive");
  if (!(sej_weight > 0.0)) throw ConfigError("sej_weight must be positive");
  for (const auto& l : layers)
    for (const auto& [cat, w] : l.by_category)
      if (!(w > 0.0)) throw ConfigError("weight for layer " + l.layer + " category " + std::to_string(cat) + " must be positive");
}

RasterGrid compose_cost_surface(const std::vector<WeightedLayer>& layers, const Mask* sej, double base_cost,
                                double sej_weight) {
  if (layers.empty() && !sej) throw ConfigError("cost surface needs at least one layer");
  const GridSpec spec = layers.empty() ? sej->spec() : layers.front().grid->spec();
  for (const auto& l : layers) require_aligned(spec, l.grid->spec(), "cost surface layer");
  if (sej) require_aligned(spec, sej->spec(), "SEJ layer");

  RasterGrid out(spec, base_cost);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = base_cost;
    for (const auto& l : layers) {
      const double cat = (*l.grid)[i];
      if (cat == l.grid->nodata() || std::isnan(cat)) continue;
      const auto it = l.weights->by_category.find(static_cast<int>(std::lround(cat)));
      if (it != l.weights->by_category.end()) v *= it->second;
    }
    if (sej && (*sej)[i]) v *= sej_weight;
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("cost surface weight must be positive and finite");
    out[i] = v;
  }
  return out;
}

RasterGrid compose_cost_surface(const std::map<std::string, RasterGrid>& grids, const WeightTable& table,
                                const Mask* sej) {
  table.validate();
  static const LayerWeights neutral;
  std::vector<WeightedLayer> layers;
  for (const auto& [name, grid] : grids) {
    const LayerWeights* w = table.find(name);
    layers.push_back({&grid, w ? w : &neutral});
  }
  return compose_cost_surface(layers, sej, table.base_cost, table.sej_weight);
}

}  // namespace cctskit::costsurface
