#include "cctskit/raster.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cctskit/csv.hpp"

namespace cctskit {

bool GridSpec::locate(double x, double y, std::size_t& row, std::size_t& col) const noexcept {
  const double fc = std::floor((x - x0) / cellsize);
  const double fr = std::floor((y - y0) / cellsize);
  if (fc < 0 || fr < 0 || fc >= static_cast<double>(ncols) || fr >= static_cast<double>(nrows)) return false;
  col = static_cast<std::size_t>(fc);
  row = nrows - 1 - static_cast<std::size_t>(fr);
  return true;
}

void require_aligned(const GridSpec& a, const GridSpec& b, const std::string& what) {
  if (!(a == b)) {
    std::ostringstream msg;
    msg << what << ": grids are not aligned (" << a.ncols << "x" << a.nrows << " @" << a.cellsize << " vs " << b.ncols
        << "x" << b.nrows << " @" << b.cellsize << ")";
    throw AlignmentError(msg.str());
  }
}

namespace {

double parse_double(const std::string& token, const std::string& file, std::size_t line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError(file, line, "malformed number '" + token + "'");
  return v;
}

}  // namespace

RasterGrid read_ascii_grid(const std::filesystem::path& path) {
  const std::string file = path.string();
  std::ifstream in(path);
  if (!in) throw ParseError(file, 0, "cannot open grid");

  GridSpec spec;
  bool have_x = false, have_y = false, have_cols = false, have_rows = false, have_size = false;
  bool x_center = false, y_center = false;
  double nodata = -9999.0;
  std::size_t line_no = 0;
  std::string line;
  std::vector<double> values;

  // Header: keyword/value lines until the first numeric line.
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string lower;
    for (char ch : key) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (!lower.empty() && (std::isalpha(static_cast<unsigned char>(lower[0])) != 0)) {
      std::string value;
      if (!(ls >> value)) throw ParseError(file, line_no, "missing value for '" + key + "'");
      const double v = parse_double(value, file, line_no);
      if (lower == "ncols") { spec.ncols = static_cast<std::size_t>(v); have_cols = true; }
      else if (lower == "nrows") { spec.nrows = static_cast<std::size_t>(v); have_rows = true; }
      else if (lower == "xllcorner") { spec.x0 = v; have_x = true; }
      else if (lower == "yllcorner") { spec.y0 = v; have_y = true; }
      else if (lower == "xllcenter") { spec.x0 = v; have_x = true; x_center = true; }
      else if (lower == "yllcenter") { spec.y0 = v; have_y = true; y_center = true; }
      else if (lower == "cellsize") { spec.cellsize = v; have_size = true; }
      else if (lower == "nodata_value") { nodata = v; }
      else throw ParseError(file, line_no, "unknown header keyword '" + key + "'");
      continue;
    }
    // First data line.
    values.reserve(spec.size());
    std::istringstream ds(line);
    std::string tok;
    while (ds >> tok) values.push_back(parse_double(tok, file, line_no));
    break;
  }
  if (!(have_cols && have_rows && have_x && have_y && have_size))
    throw ParseError(file, line_no, "incomplete header (need ncols, nrows, xllcorner, yllcorner, cellsize)");
  if (x_center) spec.x0 -= spec.cellsize / 2.0;
  if (y_center) spec.y0 -= spec.cellsize / 2.0;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ds(line);
    std::string tok;
    while (ds >> tok) values.push_back(parse_double(tok, file, line_no));
  }
  if (values.size() != spec.size()) {
    throw ParseError(file, line_no,
                     "expected " + std::to_string(spec.size()) + " values, found " + std::to_string(values.size()));
  }
  RasterGrid grid(spec, std::move(values));
  grid.set_nodata(nodata);
  return grid;
}

namespace {

template <typename Emit>
void write_grid(const std::filesystem::path& path, const GridSpec& spec, double nodata, Emit&& emit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "ncols " << spec.ncols << "\n"
      << "nrows " << spec.nrows << "\n"
      << "xllcorner " << csv::format_number(spec.x0) << "\n"
      << "yllcorner " << csv::format_number(spec.y0) << "\n"
      << "cellsize " << csv::format_number(spec.cellsize) << "\n"
      << "NODATA_value " << csv::format_number(nodata) << "\n";
  for (std::size_t r = 0; r < spec.nrows; ++r) {
    for (std::size_t c = 0; c < spec.ncols; ++c) {
      if (c) out << ' ';
      emit(out, r * spec.ncols + c);
    }
    out << '\n';
  }
}

}  // namespace

void write_ascii_grid(const std::filesystem::path& path, const RasterGrid& grid, int precision) {
  write_grid(path, grid.spec(), grid.nodata(), [&](std::ostream& out, std::size_t i) {
    const double v = grid[i];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
      out << static_cast<long long>(v);
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*g", precision, v);
      out << buf;
    }
  });
}

void write_ascii_grid(const std::filesystem::path& path, const Mask& mask) {
  write_grid(path, mask.spec(), -9999.0, [&](std::ostream& out, std::size_t i) { out << (mask[i] ? '1' : '0'); });
}

Mask to_mask(const RasterGrid& grid) {
  Mask m(grid.spec(), std::uint8_t{0});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = grid[i];
    m[i] = (v != 0.0 && v != grid.nodata() && !std::isnan(v)) ? 1 : 0;
  }
  return m;
}

RasterGrid to_raster(const Mask& mask) {
  RasterGrid g(mask.spec(), 0.0);
  for (std::size_t i = 0; i < mask.size(); ++i) g[i] = mask[i] ? 1.0 : 0.0;
  return g;
}

}  // namespace cctskit
