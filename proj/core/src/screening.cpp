#include "cctskit/screening.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>

#include "cctskit/csv.hpp"
#include "cctskit/error.hpp"

namespace cctskit::screening {

void ScreeningParams::validate() const {
  if (!(landcover_buffer >= 0.0) || !(field_buffer >= 0.0)) throw ConfigError("screening buffers must be >= 0");
  if (!(min_contiguous_area > 0.0)) throw ConfigError("min_contiguous_area must be positive");
}

std::string to_string(SiteSource s) { return s == SiteSource::Screened ? "screened" : "announced"; }

SiteSource parse_site_source(const std::string& s) {
  if (s == "screened") return SiteSource::Screened;
  if (s == "announced") return SiteSource::Announced;
  throw DomainError("unknown site source '" + s + "'");
}

std::vector<std::pair<int, int>> disk_offsets(double radius, double cellsize) {
  if (!(radius >= 0.0)) throw DomainError("buffer radius must be >= 0");
  const int reach = static_cast<int>(std::floor(radius / cellsize + 1e-9));
  const double r2 = radius * radius * (1.0 + 1e-12);
  std::vector<std::pair<int, int>> out;
  for (int dr = -reach; dr <= reach; ++dr) {
    for (int dc = -reach; dc <= reach; ++dc) {
      const double dx = dc * cellsize;
      const double dy = dr * cellsize;
      if (dx * dx + dy * dy <= r2) out.emplace_back(dr, dc);
    }
  }
  return out;
}

Mask buffer_exclusion(const Mask& mask, double radius) {
  if (!(radius >= 0.0)) throw DomainError("buffer radius must be >= 0");
  if (radius == 0.0) return mask;
  const auto offsets = disk_offsets(radius, mask.cellsize());
  const auto& spec = mask.spec();
  Mask out(spec, std::uint8_t{0});
  for (std::size_t r = 0; r < spec.nrows; ++r) {
    for (std::size_t c = 0; c < spec.ncols; ++c) {
      if (!mask(r, c)) continue;
      for (const auto& [dr, dc] : offsets) {
        const long rr = static_cast<long>(r) + dr;
        const long cc = static_cast<long>(c) + dc;
        if (spec.contains(rr, cc)) out(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)) = 1;
      }
    }
  }
  return out;
}

std::vector<CandidateSite> contiguous_candidates(const Mask& free_mask, double min_area) {
  const auto& spec = free_mask.spec();
  std::vector<char> seen(free_mask.size(), 0);
  std::vector<CandidateSite> sites;
  std::vector<std::size_t> first_cell;
  std::deque<std::size_t> queue;

  for (std::size_t start = 0; start < free_mask.size(); ++start) {
    if (!free_mask[start] || seen[start]) continue;
    CandidateSite site;
    seen[start] = 1;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t idx = queue.front();
      queue.pop_front();
      const Cell cell = free_mask.cell(idx);
      site.cells.push_back(cell);
      constexpr int kDr[4] = {-1, 1, 0, 0};
      constexpr int kDc[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        const long rr = static_cast<long>(cell.row) + kDr[k];
        const long cc = static_cast<long>(cell.col) + kDc[k];
        if (!spec.contains(rr, cc)) continue;
        const std::size_t n = free_mask.index(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
        if (free_mask[n] && !seen[n]) {
          seen[n] = 1;
          queue.push_back(n);
        }
      }
    }
    site.area = static_cast<double>(site.cells.size()) * spec.cell_area_km2();
    if (site.area + 1e-9 < min_area) continue;
    std::sort(site.cells.begin(), site.cells.end());
    double sx = 0.0, sy = 0.0;
    for (const auto& c : site.cells) {
      sx += spec.center_x(c.col);
      sy += spec.center_y(c.row);
    }
    site.x = sx / static_cast<double>(site.cells.size());
    site.y = sy / static_cast<double>(site.cells.size());
    site.source = SiteSource::Screened;
    first_cell.push_back(start);
    sites.push_back(std::move(site));
  }

  std::vector<std::size_t> order(sites.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sites[a].y != sites[b].y) return sites[a].y < sites[b].y;
    if (sites[a].x != sites[b].x) return sites[a].x < sites[b].x;
    return first_cell[a] < first_cell[b];
  });
  std::vector<CandidateSite> ordered;
  ordered.reserve(sites.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto s = std::move(sites[order[i]]);
    char buf[24];
    std::snprintf(buf, sizeof buf, "S%03zu", i + 1);
    s.id = buf;
    ordered.push_back(std::move(s));
  }
  return ordered;
}

Mask free_mask(const RasterGrid& landcover, const Mask& active_fields, const ScreeningParams& params) {
  params.validate();
  require_aligned(landcover.spec(), active_fields.spec(), "screening");
  Mask excluded(landcover.spec(), std::uint8_t{0});
  Mask nodata(landcover.spec(), std::uint8_t{0});
  for (std::size_t i = 0; i < landcover.size(); ++i) {
    const double v = landcover[i];
    if (v == landcover.nodata() || std::isnan(v)) {
      nodata[i] = 1;
      continue;
    }
    if (params.excluded_landcover_classes.count(static_cast<int>(std::lround(v)))) excluded[i] = 1;
  }
  const Mask land_buffer = buffer_exclusion(excluded, params.landcover_buffer);
  const Mask field_buffer = buffer_exclusion(active_fields, params.field_buffer);
  Mask free(landcover.spec(), std::uint8_t{0});
  for (std::size_t i = 0; i < free.size(); ++i) free[i] = (!land_buffer[i] && !field_buffer[i] && !nodata[i]) ? 1 : 0;
  return free;
}

std::vector<CandidateSite> screen_sites(const RasterGrid& landcover, const Mask& active_fields,
                                        const ScreeningParams& params, const std::vector<CandidateSite>& announced) {
  auto sites = contiguous_candidates(free_mask(landcover, active_fields, params), params.min_contiguous_area);
  for (auto site : announced) {
    site.source = SiteSource::Announced;
    sites.push_back(std::move(site));
  }
  return sites;
}

std::vector<CandidateSite> read_sites_csv(const std::string& path) {
  const auto t = csv::Table::read(path);
  std::vector<CandidateSite> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    CandidateSite s;
    s.id = t.text(r, "id");
    s.x = t.number(r, "x");
    s.y = t.number(r, "y");
    s.area = t.number(r, "area_km2");
    s.source = t.has_column("source") ? parse_site_source(t.text(r, "source")) : SiteSource::Announced;
    if (!(s.area > 0.0)) throw ParseError(path, t.line_of(r), "site area must be positive");
    out.push_back(std::move(s));
  }
  return out;
}

void write_sites_csv(const std::string& path, const std::vector<CandidateSite>& sites) {
  csv::Writer w(path, {"id", "x", "y", "area_km2", "source"});
  for (const auto& s : sites) {
    w.add(s.id).add(s.x).add(s.y).add(s.area).add(to_string(s.source));
    w.end_row();
  }
}

}  // namespace cctskit::screening
