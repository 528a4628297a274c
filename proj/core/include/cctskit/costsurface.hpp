#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cctskit/raster.hpp"

namespace cctskit::costsurface {

/// The eight burden categories of the disadvantaged-community screen.
enum class Burden {
  Health,
  WaterWastewater,
  LegacyPollution,
  ClimateChange,
  Energy,
  Housing,
  Transportation,
  WorkforceDevelopment,
};

std::string to_string(Burden b);
Burden parse_burden(const std::string& s);

enum class SejMode { Off, Sej3, Sej8 };

std::string to_string(SejMode m);
SejMode parse_sej_mode(const std::string& s);

struct SejParams {
  double population_threshold = 5.0;  // persons per cell, strict
  double buffer = 182.0;              // m
  std::set<Burden> categories;

  static SejParams sej3();
  static SejParams sej8();
  void validate() const;
};

/// A rasterized census tract and the burdens it is flagged for.
struct Tract {
  std::string id;
  std::vector<std::size_t> cells;  // row-major indices into the population grid
  std::set<Burden> burdens;
};

/// Populated (> threshold) cells of tracts carrying any selected burden,
/// dilated by the buffer.
Mask build_sej_layer(const RasterGrid& population, const std::vector<Tract>& tracts, const SejParams& params);

/// Explicit coarsening: a coarse cell is set iff any of its factor x factor
/// fine cells is set. The fine grid must tile the coarse grid exactly.
Mask coarsen_any(const Mask& fine, const GridSpec& coarse);

/// Tract raster (cell value = tract number, nodata/<=0 = none) plus a CSV
/// tract_id,burdens with burdens separated by ';'.
std::vector<Tract> read_tracts(const std::string& grid_path, const std::string& csv_path);

/// Multiplicative weights of one categorical layer; unlisted categories are neutral.
struct LayerWeights {
  std::string layer;
  std::map<int, double> by_category;
};

struct WeightTable {
  std::vector<LayerWeights> layers;
  double sej_weight = 1.0e6;
  double base_cost = 1.0;  // $/km at weight 1

  const LayerWeights* find(const std::string& layer) const;
  void validate() const;
};

struct WeightedLayer {
  const RasterGrid* grid;
  const LayerWeights* weights;
};

/// Per-cell $/km: base_cost x product of layer weights (x sej_weight on SEJ cells).
RasterGrid compose_cost_surface(const std::vector<WeightedLayer>& layers, const Mask* sej, double base_cost,
                                double sej_weight);

/// Convenience overload resolving each named grid against the weight table.
RasterGrid compose_cost_surface(const std::map<std::string, RasterGrid>& grids, const WeightTable& table,
                                const Mask* sej);

}  // namespace cctskit::costsurface
