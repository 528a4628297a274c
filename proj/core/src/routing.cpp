#include "cctskit/routing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include <nlohmann/json.hpp>

#include "cctskit/csv.hpp"
#include "cctskit/error.hpp"

namespace cctskit::routing {

using nlohmann::json;

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void require_surface(const RasterGrid& surface) {
  for (std::size_t i = 0; i < surface.size(); ++i) {
    const double v = surface[i];
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("routing surface must be strictly positive and finite (cell " + std::to_string(i) + ")");
  }
}

void require_inside(const GridSpec& spec, Cell c, const char* what) {
  if (!spec.contains(static_cast<long>(c.row), static_cast<long>(c.col)))
    throw DomainError(std::string(what) + " cell lies outside the grid");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

const std::vector<std::pair<int, int>>& neighbor_offsets(Connectivity c) {
  static const std::vector<std::pair<int, int>> eight{{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                                      {0, 1},   {1, -1}, {1, 0},  {1, 1}};
  static const std::vector<std::pair<int, int>> sixteen = [] {
    auto v = eight;
    for (auto [dr, dc] : std::vector<std::pair<int, int>>{{-2, -1}, {-2, 1}, {-1, -2}, {-1, 2},
                                                          {1, -2},  {1, 2},  {2, -1},  {2, 1}})
      v.emplace_back(dr, dc);
    return v;
  }();
  return c == Connectivity::Eight ? eight : sixteen;
}

double step_length_km(int drow, int dcol, double cellsize) {
  return std::sqrt(static_cast<double>(drow * drow + dcol * dcol)) * cellsize * 1e-3;
}

double step_cost(const RasterGrid& surface, Cell a, Cell b) {
  const int dr = static_cast<int>(b.row) - static_cast<int>(a.row);
  const int dc = static_cast<int>(b.col) - static_cast<int>(a.col);
  return step_length_km(dr, dc, surface.cellsize()) * 0.5 * (surface(a.row, a.col) + surface(b.row, b.col));
}

PathTree::PathTree(const RasterGrid& surface, Cell source, const RoutingOptions& options)
    : surface_(&surface), source_(source) {
  require_surface(surface);
  require_inside(surface.spec(), source, "source");
  const auto& spec = surface.spec();
  const auto& offsets = neighbor_offsets(options.connectivity);
  const double tol = options.tie_tolerance;
  dist_.assign(surface.size(), std::numeric_limits<double>::infinity());
  pred_.assign(surface.size(), kNone);
  std::vector<char> done(surface.size(), 0);

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  const std::size_t s = surface.index(source);
  dist_[s] = 0.0;
  heap.emplace(0.0, s);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u] || d > dist_[u]) continue;
    done[u] = 1;
    const Cell cu = surface.cell(u);
    for (const auto& [dr, dc] : offsets) {
      const long rr = static_cast<long>(cu.row) + dr;
      const long cc = static_cast<long>(cu.col) + dc;
      if (!spec.contains(rr, cc)) continue;
      const Cell cv{static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)};
      const std::size_t v = surface.index(cv);
      if (done[v]) continue;
      const double nd = d + step_length_km(dr, dc, spec.cellsize) * 0.5 * (surface[u] + surface[v]);
      const double slack = tol * std::max(nd, dist_[v] == std::numeric_limits<double>::infinity() ? 0.0 : dist_[v]);
      if (nd < dist_[v] - slack) {
        dist_[v] = nd;
        pred_[v] = u;
        heap.emplace(nd, v);
      } else if (nd <= dist_[v] + slack) {
        // Tie: keep the lower predecessor index.
        if (u < pred_[v]) pred_[v] = u;
        if (nd < dist_[v]) {
          dist_[v] = nd;
          heap.emplace(nd, v);
        }
      }
    }
  }
}

bool PathTree::reachable(Cell c) const { return std::isfinite(dist_[surface_->index(c)]); }

std::vector<Cell> PathTree::cells_to(Cell c) const {
  require_inside(surface_->spec(), c, "destination");
  if (!reachable(c)) throw std::logic_error("destination unreachable on a positive surface");
  std::vector<Cell> cells;
  for (std::size_t i = surface_->index(c); i != kNone; i = pred_[i]) cells.push_back(surface_->cell(i));
  std::reverse(cells.begin(), cells.end());
  return cells;
}

RoutedPath PathTree::path_to(Cell c) const {
  auto path = measure_path(*surface_, cells_to(c));
  return path;
}

RoutedPath least_cost_path(const RasterGrid& surface, Cell src, Cell dst, const RoutingOptions& options) {
  require_inside(surface.spec(), src, "source");
  require_inside(surface.spec(), dst, "destination");
  if (src == dst) {
    require_surface(surface);
    RoutedPath p;
    p.cells = {src};
    return p;
  }
  return PathTree(surface, src, options).path_to(dst);
}

RoutedPath measure_path(const RasterGrid& surface, const std::vector<Cell>& cells) {
  RoutedPath p;
  p.cells = cells;
  const auto& allowed = neighbor_offsets(Connectivity::Sixteen);
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const int dr = static_cast<int>(cells[i].row) - static_cast<int>(cells[i - 1].row);
    const int dc = static_cast<int>(cells[i].col) - static_cast<int>(cells[i - 1].col);
    if (std::find(allowed.begin(), allowed.end(), std::make_pair(dr, dc)) == allowed.end())
      throw DomainError("path cells are not neighbors");
    p.length += step_length_km(dr, dc, surface.cellsize());
    p.routed_cost += step_cost(surface, cells[i - 1], cells[i]);
  }
  return p;
}

double path_sej_km(const std::vector<Cell>& cells, const Mask& sej, double cellsize) {
  double km = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const int dr = static_cast<int>(cells[i].row) - static_cast<int>(cells[i - 1].row);
    const int dc = static_cast<int>(cells[i].col) - static_cast<int>(cells[i - 1].col);
    const double half = 0.5 * step_length_km(dr, dc, cellsize);
    if (sej(cells[i - 1].row, cells[i - 1].col)) km += half;
    if (sej(cells[i].row, cells[i].col)) km += half;
  }
  return km;
}

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Source: return "source";
    case NodeKind::Sink: return "sink";
    case NodeKind::SourceSink: return "source_sink";
    case NodeKind::Junction: return "junction";
  }
  return "junction";
}

namespace {

NodeKind parse_node_kind(const std::string& s) {
  if (s == "source") return NodeKind::Source;
  if (s == "sink") return NodeKind::Sink;
  if (s == "source_sink") return NodeKind::SourceSink;
  if (s == "junction") return NodeKind::Junction;
  throw DomainError("unknown node kind '" + s + "'");
}

}  // namespace

std::size_t CandidateNetwork::node_of(const std::string& terminal_id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (const auto& t : nodes[i].terminals)
      if (t == terminal_id) return i;
  throw DomainError("terminal '" + terminal_id + "' is not in the candidate network");
}

double CandidateNetwork::total_length() const {
  double km = 0.0;
  for (const auto& e : edges) km += e.length;
  return km;
}

CandidateNetwork build_candidate_network(const RasterGrid& surface, const std::vector<Terminal>& sources,
                                         const std::vector<Terminal>& sinks, double base_cost,
                                         const RoutingOptions& options) {
  if (sources.empty() || sinks.empty()) throw DomainError("candidate network needs at least one source and one sink");
  if (!(base_cost > 0.0)) throw DomainError("base_cost must be positive");
  require_surface(surface);
  const auto& spec = surface.spec();

  CandidateNetwork net;
  net.spec = spec;
  net.base_cost = base_cost;

  // Terminal nodes, merged by cell in order of first appearance.
  std::map<std::size_t, std::size_t> node_at;  // cell index -> node
  auto add_terminal = [&](const Terminal& t) {
    std::size_t row = 0, col = 0;
    if (!spec.locate(t.x, t.y, row, col)) throw DomainError("terminal '" + t.id + "' lies outside the cost surface");
    const std::size_t idx = surface.index(row, col);
    auto it = node_at.find(idx);
    if (it == node_at.end()) {
      NetworkNode n;
      n.cell = {row, col};
      n.x = spec.center_x(col);
      n.y = spec.center_y(row);
      n.kind = t.kind == TerminalKind::Source ? NodeKind::Source : NodeKind::Sink;
      it = node_at.emplace(idx, net.nodes.size()).first;
      net.nodes.push_back(std::move(n));
    }
    auto& n = net.nodes[it->second];
    const NodeKind k = t.kind == TerminalKind::Source ? NodeKind::Source : NodeKind::Sink;
    if (!n.terminals.empty() && n.kind != k) n.kind = NodeKind::SourceSink;
    n.terminals.push_back(t.id);
  };
  for (const auto& t : sources) add_terminal(t);
  for (const auto& t : sinks) add_terminal(t);
  for (auto& n : net.nodes) {
    n.id.clear();
    for (const auto& t : n.terminals) n.id += (n.id.empty() ? "" : "+") + t;
  }
  const std::size_t terminal_nodes = net.nodes.size();

  // Union of all pairwise least-cost paths as an undirected cell graph.
  std::set<std::pair<std::size_t, std::size_t>> links;
  for (std::size_t i = 0; i + 1 < terminal_nodes; ++i) {
    const PathTree tree(surface, net.nodes[i].cell, options);
    for (std::size_t j = i + 1; j < terminal_nodes; ++j) {
      const auto cells = tree.cells_to(net.nodes[j].cell);
      for (std::size_t k = 1; k < cells.size(); ++k) {
        std::size_t a = surface.index(cells[k - 1]);
        std::size_t b = surface.index(cells[k]);
        if (a > b) std::swap(a, b);
        links.emplace(a, b);
      }
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> adjacency;
  for (const auto& [a, b] : links) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }

  // Junctions wherever paths meet or part.
  for (const auto& [idx, nbrs] : adjacency) {
    if (nbrs.size() == 2 || node_at.count(idx)) continue;
    NetworkNode n;
    n.cell = surface.cell(idx);
    n.x = spec.center_x(n.cell.col);
    n.y = spec.center_y(n.cell.row);
    n.kind = NodeKind::Junction;
    node_at.emplace(idx, net.nodes.size());
    net.nodes.push_back(std::move(n));
  }
  std::size_t junction = 0;
  for (std::size_t i = terminal_nodes; i < net.nodes.size(); ++i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "J%03zu", ++junction);
    net.nodes[i].id = buf;
  }

  // Degree-2 chains between nodes become edges.
  std::set<std::pair<std::size_t, std::size_t>> used;
  auto link_key = [](std::size_t a, std::size_t b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
  for (std::size_t ni = 0; ni < net.nodes.size(); ++ni) {
    const std::size_t start = surface.index(net.nodes[ni].cell);
    const auto adj = adjacency.find(start);
    if (adj == adjacency.end()) continue;
    for (std::size_t first : adj->second) {
      if (used.count(link_key(start, first))) continue;
      std::vector<std::size_t> chain{start, first};
      used.insert(link_key(start, first));
      while (!node_at.count(chain.back())) {
        const auto& nbrs = adjacency.at(chain.back());
        const std::size_t prev = chain[chain.size() - 2];
        const std::size_t next = nbrs[0] == prev ? nbrs[1] : nbrs[0];
        used.insert(link_key(chain.back(), next));
        chain.push_back(next);
      }
      const std::size_t nj = node_at.at(chain.back());
      if (nj == ni) continue;  // self-loop
      CandidateEdge e;
      e.from = std::min(ni, nj);
      e.to = std::max(ni, nj);
      if (ni > nj) std::reverse(chain.begin(), chain.end());
      for (std::size_t idx : chain) e.cells.push_back(surface.cell(idx));
      const auto measured = measure_path(surface, e.cells);
      e.length = measured.length;
      e.routed_cost = measured.routed_cost;
      e.weighted_length = e.routed_cost / base_cost;
      net.edges.push_back(std::move(e));
    }
  }
  std::sort(net.edges.begin(), net.edges.end(), [](const CandidateEdge& a, const CandidateEdge& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.to != b.to) return a.to < b.to;
    return a.cells < b.cells;
  });
  for (std::size_t i = 0; i < net.edges.size(); ++i) net.edges[i].id = i;
  return net;
}

void measure_sej(CandidateNetwork& network, const std::string& name, const Mask& sej) {
  require_aligned(network.spec, sej.spec(), "SEJ layer");
  for (auto& e : network.edges) e.sej_km[name] = path_sej_km(e.cells, sej, network.spec.cellsize);
}

void write_network_json(const std::string& path, const CandidateNetwork& network) {
  json j;
  const auto& s = network.spec;
  j["grid"] = {{"ncols", s.ncols}, {"nrows", s.nrows}, {"cellsize", s.cellsize}, {"x0", s.x0}, {"y0", s.y0}};
  j["base_cost"] = network.base_cost;
  j["nodes"] = json::array();
  for (const auto& n : network.nodes) {
    j["nodes"].push_back({{"id", n.id},
                          {"kind", to_string(n.kind)},
                          {"row", n.cell.row},
                          {"col", n.cell.col},
                          {"x", n.x},
                          {"y", n.y},
                          {"terminals", n.terminals}});
  }
  j["edges"] = json::array();
  for (const auto& e : network.edges) {
    json cells = json::array();
    for (const auto& c : e.cells) cells.push_back({c.row, c.col});
    j["edges"].push_back({{"id", e.id},
                          {"from", e.from},
                          {"to", e.to},
                          {"length_km", e.length},
                          {"routed_cost", e.routed_cost},
                          {"weighted_km", e.weighted_length},
                          {"sej_km", e.sej_km},
                          {"cells", cells}});
  }
  open_out(path) << j.dump(1) << "\n";
}

CandidateNetwork read_network_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DependencyError("missing network file " + path);
  json j;
  try {
    j = json::parse(in);
    CandidateNetwork net;
    const auto& g = j.at("grid");
    net.spec = {g.at("ncols").get<std::size_t>(), g.at("nrows").get<std::size_t>(), g.at("cellsize").get<double>(),
                g.at("x0").get<double>(), g.at("y0").get<double>()};
    net.base_cost = j.at("base_cost").get<double>();
    for (const auto& n : j.at("nodes")) {
      NetworkNode node;
      node.id = n.at("id").get<std::string>();
      node.kind = parse_node_kind(n.at("kind").get<std::string>());
      node.cell = {n.at("row").get<std::size_t>(), n.at("col").get<std::size_t>()};
      node.x = n.at("x").get<double>();
      node.y = n.at("y").get<double>();
      node.terminals = n.at("terminals").get<std::vector<std::string>>();
      net.nodes.push_back(std::move(node));
    }
    for (const auto& e : j.at("edges")) {
      CandidateEdge edge;
      edge.id = e.at("id").get<std::size_t>();
      edge.from = e.at("from").get<std::size_t>();
      edge.to = e.at("to").get<std::size_t>();
      edge.length = e.at("length_km").get<double>();
      edge.routed_cost = e.at("routed_cost").get<double>();
      edge.weighted_length = e.at("weighted_km").get<double>();
      edge.sej_km = e.at("sej_km").get<std::map<std::string, double>>();
      for (const auto& c : e.at("cells")) edge.cells.push_back({c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>()});
      net.edges.push_back(std::move(edge));
    }
    return net;
  } catch (const json::exception& e) {
    throw ParseError(path, 0, std::string("invalid network JSON: ") + e.what());
  }
}

void write_network_geojson(const std::string& path, const CandidateNetwork& network) {
  json features = json::array();
  for (const auto& n : network.nodes) {
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {n.x, n.y}}}},
                        {"properties", {{"id", n.id}, {"kind", to_string(n.kind)}}}});
  }
  for (const auto& e : network.edges) {
    json coords = json::array();
    for (const auto& c : e.cells) coords.push_back({network.spec.center_x(c.col), network.spec.center_y(c.row)});
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                        {"properties",
                         {{"edge_id", e.id},
                          {"from", network.nodes[e.from].id},
                          {"to", network.nodes[e.to].id},
                          {"length_km", e.length},
                          {"weighted_km", e.weighted_length},
                          {"sej_km", e.sej_km}}}});
  }
  json doc{{"type", "FeatureCollection"}, {"features", features}};
  open_out(path) << doc.dump(1) << "\n";
}

void write_edges_csv(const std::string& path, const CandidateNetwork& network) {
  csv::Writer w(path, {"edge_id", "from", "to", "length_km", "weighted_km", "routed_cost", "sej3_km", "sej8_km"});
  auto sej = [](const CandidateEdge& e, const char* key) {
    const auto it = e.sej_km.find(key);
    return it == e.sej_km.end() ? std::nan("") : it->second;
  };
  for (const auto& e : network.edges) {
    w.add(e.id).add(network.nodes[e.from].id).add(network.nodes[e.to].id).add(e.length).add(e.weighted_length);
    w.add(e.routed_cost).add(sej(e, "sej3")).add(sej(e, "sej8"));
    w.end_row();
  }
}

}  // namespace cctskit::routing
