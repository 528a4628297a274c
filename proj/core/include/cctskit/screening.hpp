#pragma once

#include <set>
#include <string>
#include <vector>

#include "cctskit/raster.hpp"

namespace cctskit::screening {

/// Land-cover codes used by the bundled fixtures. Any code may be excluded via
/// ScreeningParams; these are only the defaults.
namespace landcover {
inline constexpr int kOpen = 0;
inline constexpr int kDeveloped = 1;
inline constexpr int kWater = 2;
inline constexpr int kRoad = 3;
inline constexpr int kWetland = 4;
inline constexpr int kOffshore = 5;
inline constexpr int kRail = 6;
}  // namespace landcover

struct ScreeningParams {
  std::set<int> excluded_landcover_classes{landcover::kDeveloped, landcover::kWater, landcover::kRoad,
                                           landcover::kOffshore};
  double landcover_buffer = 20'000.0;  // m
  double field_buffer = 5'000.0;       // m
  double min_contiguous_area = 78.5;   // km^2, a 5 km radius circle

  void validate() const;
};

enum class SiteSource { Screened, Announced };

std::string to_string(SiteSource s);
SiteSource parse_site_source(const std::string& s);

struct CandidateSite {
  std::string id;
  double x = 0.0;  // centroid, projected meters
  double y = 0.0;
  double area = 0.0;  // km^2
  std::vector<Cell> cells;  // sorted; empty for announced sites
  SiteSource source = SiteSource::Screened;
};

/// Dilation by a Euclidean disk: a cell is set iff some set cell's center lies
/// within `radius` meters of its center. radius 0 returns the input.
Mask buffer_exclusion(const Mask& mask, double radius);

/// Cell offsets (drow, dcol) inside a disk of `radius` meters.
std::vector<std::pair<int, int>> disk_offsets(double radius, double cellsize);

/// 4-connected components of set cells with area >= min_area (km^2), ordered by
/// centroid (y, then x). Ids are "S001", "S002", ... in that order.
std::vector<CandidateSite> contiguous_candidates(const Mask& free_mask, double min_area);

/// Screened sites followed by the announced sites, which bypass screening.
std::vector<CandidateSite> screen_sites(const RasterGrid& landcover, const Mask& active_fields,
                                        const ScreeningParams& params,
                                        const std::vector<CandidateSite>& announced = {});

/// Free mask used by screen_sites (true where injection wells may be sited).
Mask free_mask(const RasterGrid& landcover, const Mask& active_fields, const ScreeningParams& params);

/// Sites CSV: id,x,y,area_km2,source
std::vector<CandidateSite> read_sites_csv(const std::string& path);
void write_sites_csv(const std::string& path, const std::vector<CandidateSite>& sites);

}  // namespace cctskit::screening
