#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cctskit/raster.hpp"

namespace cctskit::routing {

enum class Connectivity { Eight, Sixteen };

struct RoutingOptions {
  Connectivity connectivity = Connectivity::Eight;
  /// Relative tolerance under which two path costs count as tied.
  double tie_tolerance = 1e-12;
};

struct RoutedPath {
  std::vector<Cell> cells;
  double length = 0.0;       // km
  double routed_cost = 0.0;  // $ (sum of step cost = step km x mean cell weight)
  std::string from;
  std::string to;
};

/// Neighbor offsets (drow, dcol) for a connectivity.
const std::vector<std::pair<int, int>>& neighbor_offsets(Connectivity c);

/// Step length in km between two cells offset by (drow, dcol).
double step_length_km(int drow, int dcol, double cellsize);

/// Cost of moving between two adjacent cells.
double step_cost(const RasterGrid& surface, Cell a, Cell b);

/// Shortest-path tree from one cell over a strictly positive surface.
class PathTree {
 public:
  PathTree(const RasterGrid& surface, Cell source, const RoutingOptions& options = {});

  double cost_to(Cell c) const { return dist_[surface_->index(c)]; }
  bool reachable(Cell c) const;
  /// Cells from the source to `c`, inclusive.
  std::vector<Cell> cells_to(Cell c) const;
  RoutedPath path_to(Cell c) const;

 private:
  const RasterGrid* surface_;
  Cell source_;
  std::vector<double> dist_;
  std::vector<std::size_t> pred_;
};

/// Exact minimum-cost path. src == dst yields a single-cell path of zero cost.
/// Throws DomainError on nonpositive/NaN surfaces or out-of-grid cells.
RoutedPath least_cost_path(const RasterGrid& surface, Cell src, Cell dst, const RoutingOptions& options = {});

/// Recomputes length and cost of an explicit cell sequence.
RoutedPath measure_path(const RasterGrid& surface, const std::vector<Cell>& cells);

/// Km of the path lying in marked cells; each step contributes half its length
/// to each of its two end cells.
double path_sej_km(const std::vector<Cell>& cells, const Mask& sej, double cellsize);

enum class TerminalKind { Source, Sink };

struct Terminal {
  std::string id;
  TerminalKind kind = TerminalKind::Source;
  double x = 0.0;
  double y = 0.0;
};

enum class NodeKind { Source, Sink, SourceSink, Junction };

std::string to_string(NodeKind k);

struct NetworkNode {
  std::string id;
  NodeKind kind = NodeKind::Junction;
  Cell cell;
  double x = 0.0;
  double y = 0.0;
  std::vector<std::string> terminals;  // terminal ids hosted at this cell
};

struct CandidateEdge {
  std::size_t id = 0;
  std::size_t from = 0;  // node index, from < to
  std::size_t to = 0;
  std::vector<Cell> cells;   // ordered from `from` to `to`
  double length = 0.0;       // km
  double routed_cost = 0.0;  // $ at the surface's $/km weights
  double weighted_length = 0.0;  // km x weight product (routed_cost / base_cost)
  std::map<std::string, double> sej_km;  // keyed by layer name ("sej3", "sej8")
};

struct CandidateNetwork {
  GridSpec spec;
  double base_cost = 1.0;
  std::vector<NetworkNode> nodes;
  std::vector<CandidateEdge> edges;

  /// Node index hosting a terminal id; throws DomainError when absent.
  std::size_t node_of(const std::string& terminal_id) const;
  double total_length() const;
};

/// Routes every terminal pair, overlays the paths, and splits them into edges
/// at terminals and at cells where paths meet or part.
CandidateNetwork build_candidate_network(const RasterGrid& surface, const std::vector<Terminal>& sources,
                                         const std::vector<Terminal>& sinks, double base_cost = 1.0,
                                         const RoutingOptions& options = {});

/// Fills edge.sej_km[name] from a marked layer aligned with the network grid.
void measure_sej(CandidateNetwork& network, const std::string& name, const Mask& sej);

void write_network_json(const std::string& path, const CandidateNetwork& network);
CandidateNetwork read_network_json(const std::string& path);
void write_network_geojson(const std::string& path, const CandidateNetwork& network);
/// edge_id,from,to,length_km,weighted_km,routed_cost,sej3_km,sej8_km
void write_edges_csv(const std::string& path, const CandidateNetwork& network);

}  // namespace cctskit::routing
