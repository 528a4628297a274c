#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cctskit/error.hpp"

namespace cctskit {

/// Georeferencing shared by every grid. The origin is the lower-left corner
/// (ESRI `xllcorner`/`yllcorner`); row 0 is the northernmost row.
struct GridSpec {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  double cellsize = 1.0;  // meters
  double x0 = 0.0;
  double y0 = 0.0;

  std::size_t size() const noexcept { return ncols * nrows; }
  double cell_area_km2() const noexcept { return cellsize * cellsize * 1e-6; }
  double center_x(std::size_t col) const noexcept { return x0 + (static_cast<double>(col) + 0.5) * cellsize; }
  double center_y(std::size_t row) const noexcept {
    return y0 + (static_cast<double>(nrows - row) - 0.5) * cellsize;
  }

  bool contains(long row, long col) const noexcept {
    return row >= 0 && col >= 0 && static_cast<std::size_t>(row) < nrows && static_cast<std::size_t>(col) < ncols;
  }

  /// Cell containing a projected point; false when outside the grid.
  bool locate(double x, double y, std::size_t& row, std::size_t& col) const noexcept;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Uniform georeferenced grid with a row-major payload.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(GridSpec spec, T fill) : spec_(spec), values_(spec.size(), fill) { validate(); }
  Grid(GridSpec spec, std::vector<T> values) : spec_(spec), values_(std::move(values)) { validate(); }

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t ncols() const noexcept { return spec_.ncols; }
  std::size_t nrows() const noexcept { return spec_.nrows; }
  double cellsize() const noexcept { return spec_.cellsize; }
  std::size_t size() const noexcept { return values_.size(); }

  std::size_t index(std::size_t row, std::size_t col) const noexcept { return row * spec_.ncols + col; }
  std::size_t index(Cell c) const noexcept { return index(c.row, c.col); }
  Cell cell(std::size_t idx) const noexcept { return {idx / spec_.ncols, idx % spec_.ncols}; }

  T& operator()(std::size_t row, std::size_t col) { return values_[index(row, col)]; }
  const T& operator()(std::size_t row, std::size_t col) const { return values_[index(row, col)]; }
  T& operator[](std::size_t idx) { return values_[idx]; }
  const T& operator[](std::size_t idx) const { return values_[idx]; }

  const std::vector<T>& values() const noexcept { return values_; }
  std::vector<T>& values() noexcept { return values_; }

  double nodata() const noexcept { return nodata_; }
  void set_nodata(double v) noexcept { nodata_ = v; }

  friend bool operator==(const Grid& a, const Grid& b) { return a.spec_ == b.spec_ && a.values_ == b.values_; }

 private:
  void validate() const {
    if (spec_.ncols == 0 || spec_.nrows == 0) throw DomainError("grid dimensions must be positive");
    if (!(spec_.cellsize > 0.0)) throw DomainError("grid cellsize must be positive");
    if (values_.size() != spec_.size()) throw DomainError("grid payload length does not match ncols x nrows");
  }

  GridSpec spec_{};
  std::vector<T> values_;
  double nodata_ = -9999.0;
};

using RasterGrid = Grid<double>;
using Mask = Grid<std::uint8_t>;

/// Throws AlignmentError unless both grids share dimensions, cellsize and origin.
void require_aligned(const GridSpec& a, const GridSpec& b, const std::string& what);

/// ESRI ASCII grid. Parse errors cite file and line.
RasterGrid read_ascii_grid(const std::filesystem::path& path);
void write_ascii_grid(const std::filesystem::path& path, const RasterGrid& grid, int precision = 6);
void write_ascii_grid(const std::filesystem::path& path, const Mask& mask);

/// Nonzero cells (excluding nodata) become true.
Mask to_mask(const RasterGrid& grid);
RasterGrid to_raster(const Mask& mask);

}  // namespace cctskit
