#include "fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace testfx {

using namespace cctskit;
using netdesign::NetworkProblem;

routing::CandidateNetwork graph(const std::vector<std::pair<double, double>>& nodes, const std::vector<GraphEdge>& edges) {
  routing::CandidateNetwork net;
  net.spec = {10, 10, 1000.0, 0.0, 0.0};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    routing::NetworkNode n;
    n.id = "N" + std::to_string(i);
    n.x = nodes[i].first;
    n.y = nodes[i].second;
    net.nodes.push_back(n);
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    routing::CandidateEdge e;
    e.id = i;
    e.from = std::min(edges[i].u, edges[i].v);
    e.to = std::max(edges[i].u, edges[i].v);
    e.length = edges[i].length;
    e.weighted_length = edges[i].weighted;
    e.routed_cost = edges[i].weighted;
    net.edges.push_back(e);
  }
  return net;
}

netdesign::Economics three_class_economics() {
  netdesign::Economics econ;
  econ.classes = {{2.0, 0.9e6, 0.9e6 * 0.025}, {5.0, 1.6e6, 1.6e6 * 0.025}, {12.0, 2.4e6, 2.4e6 * 0.025}};
  return econ;
}

namespace {

netdesign::SourceInput source(const std::string& id, std::size_t node, double q, double cost,
                              const routing::CandidateNetwork& net) {
  return {id, node, q, cost, 0.1, net.nodes[node].x, net.nodes[node].y};
}

netdesign::SinkInput sink(const std::string& id, std::size_t node, double inj, double cost) {
  return {id, node, inj, cost, 0.0};
}

}  // namespace

NetworkProblem random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto pick = [&](std::size_t a, std::size_t b) { return std::uniform_int_distribution<std::size_t>(a, b)(rng); };

  const std::size_t n = pick(4, 6);
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({uni(0, 100'000), uni(0, 100'000)});
  std::vector<GraphEdge> edges;
  auto add = [&](std::size_t u, std::size_t v) {
    for (const auto& e : edges)
      if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return;
    const double len = uni(10.0, 120.0);
    edges.push_back({u, v, len, len * uni(1.0, 3.0)});
  };
  // Random spanning tree, then extra edges up to the limit.
  for (std::size_t i = 1; i < n; ++i) add(pick(0, i - 1), i);
  const std::size_t extra = pick(0, 8 - edges.size());
  for (std::size_t k = 0; k < extra * 3 && edges.size() < 8; ++k) {
    const std::size_t u = pick(0, n - 1), v = pick(0, n - 1);
    if (u != v) add(u, v);
  }

  NetworkProblem p;
  p.candidate = graph(nodes, edges);
  p.economics = three_class_economics();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t ns = pick(1, 3), nk = pick(1, std::min<std::size_t>(2, n - ns));
  double total_capture = 0.0, total_inj = 0.0;
  for (std::size_t s = 0; s < ns; ++s) {
    p.sources.push_back(source("S" + std::to_string(s + 1), order[s], uni(0.5, 4.0), uni(20.0, 80.0), p.candidate));
    total_capture += p.sources.back().max_capture;
  }
  for (std::size_t k = 0; k < nk; ++k) {
    p.sinks.push_back(sink("K" + std::to_string(k + 1), order[ns + k], uni(2.0, 10.0), uni(5.0, 15.0)));
    total_inj += p.sinks.back().injectivity;
  }
  p.target = std::min(total_capture, total_inj) * uni(0.3, 0.9);
  return p;
}

NetworkProblem three_sources_two_sinks() {
  NetworkProblem p;
  p.candidate = graph({{0, 0}, {40'000, 0}, {80'000, 10'000}, {20'000, 30'000}, {60'000, 40'000}, {100'000, 50'000}},
                      {{0, 3, 36, 40},
                       {1, 3, 36, 45},
                       {1, 4, 45, 50},
                       {2, 4, 36, 44},
                       {3, 4, 41, 41},
                       {4, 5, 42, 60},
                       {2, 5, 45, 90}});
  p.economics = three_class_economics();
  p.sources = {source("S1", 0, 2.5, 30.0, p.candidate), source("S2", 1, 1.5, 45.0, p.candidate),
               source("S3", 2, 3.0, 25.0, p.candidate)};
  p.sinks = {sink("K1", 3, 3.0, 9.0), sink("K2", 5, 6.0, 7.0)};
  p.target = 5.0;
  return p;
}

// Sources A-D along the x axis (A largest), sinks below them:
//   A(0) -10- B(10) -20- C(30) -30- D(60)
//   A-K1 25, B-K1 35, B-K2 22, C-K2 22, C-K3 50, D-K3 25
NetworkProblem dedicated_trace_problem() {
  NetworkProblem p;
  p.candidate = graph({{0, 0}, {10'000, 0}, {30'000, 0}, {60'000, 0}, {0, -20'000}, {20'000, -20'000}, {60'000, -25'000}},
                      {{0, 1, 10, 10},
                       {1, 2, 20, 20},
                       {2, 3, 30, 30},
                       {0, 4, 25, 25},
                       {1, 4, 35, 35},
                       {1, 5, 22, 22},
                       {2, 5, 22, 22},
                       {2, 6, 50, 50},
                       {3, 6, 25, 25}});
  p.economics = netdesign::Economics{};
  p.sources = {source("A", 0, 5.0, 30.0, p.candidate), source("B", 1, 3.0, 30.0, p.candidate),
               source("C", 2, 2.0, 30.0, p.candidate), source("D", 3, 1.0, 30.0, p.candidate)};
  p.sinks = {sink("K1", 4, 6.0, 4.0), sink("K2", 5, 4.0, 6.0), sink("K3", 6, 10.0, 10.0)};
  p.target = 11.0;
  return p;
}

NetworkProblem hub_problem() {
  NetworkProblem p;
  // West cluster: sources 0,1,2 around sink 3. East cluster: sources 4,5 and sink 6.
  // Far north: source 7 alone with sink 8.
  p.candidate = graph({{0, 0},
                       {10'000, 0},
                       {5'000, 10'000},
                       {5'000, -30'000},
                       {200'000, 0},
                       {210'000, 5'000},
                       {205'000, -30'000},
                       {100'000, 300'000},
                       {100'000, 330'000}},
                      {{0, 2, 11, 11},
                       {1, 2, 11, 11},
                       {2, 3, 40, 40},
                       {0, 3, 31, 31},
                       {4, 5, 11, 11},
                       {5, 6, 35, 35},
                       {7, 8, 30, 30}});
  p.economics = netdesign::Economics{};
  p.sources = {source("W1", 0, 1.0, 30.0, p.candidate), source("W2", 1, 1.5, 32.0, p.candidate),
               source("W3", 2, 0.8, 35.0, p.candidate), source("E1", 4, 2.0, 28.0, p.candidate),
               source("E2", 5, 0.6, 40.0, p.candidate), source("N1", 7, 0.7, 33.0, p.candidate)};
  p.sinks = {sink("KW", 3, 5.0, 8.0), sink("KE", 6, 5.0, 8.0), sink("KN", 8, 5.0, 8.0)};
  p.target = 6.6;  // everything
  return p;
}

NetworkProblem routed_problem(const RasterGrid& surface,
                              const std::vector<std::tuple<std::string, Cell, double, double>>& sources,
                              const std::vector<std::tuple<std::string, Cell, double, double>>& sinks, double target) {
  std::vector<routing::Terminal> src_t, sink_t;
  for (const auto& [id, c, q, cost] : sources)
    src_t.push_back({id, routing::TerminalKind::Source, surface.spec().center_x(c.col), surface.spec().center_y(c.row)});
  for (const auto& [id, c, q, cost] : sinks)
    sink_t.push_back({id, routing::TerminalKind::Sink, surface.spec().center_x(c.col), surface.spec().center_y(c.row)});
  NetworkProblem p;
  p.candidate = routing::build_candidate_network(surface, src_t, sink_t, 1.0);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& [id, c, q, cost] = sources[i];
    p.sources.push_back({id, p.candidate.node_of(id), q, cost, 0.1, src_t[i].x, src_t[i].y});
  }
  for (const auto& [id, c, q, cost] : sinks) p.sinks.push_back({id, p.candidate.node_of(id), q, cost, 0.0});
  p.target = target;
  return p;
}

NetworkProblem clustered_line_problem() {
  const RasterGrid surface({60, 60, 1000.0, 0.0, 0.0}, 1.0);
  std::vector<std::tuple<std::string, Cell, double, double>> sources;
  for (int i = 0; i < 5; ++i)
    sources.emplace_back("S" + std::to_string(i + 1), Cell{5, static_cast<std::size_t>(10 + 5 * i)}, 0.8, 30.0);
  return routed_problem(surface, sources, {{"K1", Cell{55, 20}, 10.0, 8.0}}, 4.0);
}

TwoCorridor two_corridor() {
  TwoCorridor f;
  const GridSpec spec{40, 40, 1000.0, 0.0, 0.0};
  f.population = RasterGrid(spec, 0.0);
  costsurface::Tract t;
  t.id = "1";
  t.burdens = {costsurface::Burden::Health};
  for (std::size_t r = 16; r <= 24; ++r)
    for (std::size_t c = 17; c <= 22; ++c) {
      f.population(r, c) = 50.0;
      t.cells.push_back(f.population.index(r, c));
    }
  f.tracts = {t};
  f.source = {20, 2};
  f.sink = {20, 37};
  return f;
}

NetworkProblem two_corridor_problem(const TwoCorridor& f, bool sej_on) {
  const Mask sej = costsurface::build_sej_layer(f.population, f.tracts, costsurface::SejParams::sej3());
  const RasterGrid one(f.population.spec(), 1.0);
  costsurface::LayerWeights none{"base", {}};
  const RasterGrid surface =
      costsurface::compose_cost_surface({{&one, &none}}, sej_on ? &sej : nullptr, 1.0, 1.0e6);
  auto p = routed_problem(surface, {{"S1", f.source, 2.0, 30.0}}, {{"K1", f.sink, 5.0, 8.0}}, 2.0);
  routing::measure_sej(p.candidate, "sej3", sej);
  return p;
}

phasing::PhaseSchedule schedule(const std::vector<double>& targets, int gap) {
  phasing::PhaseSchedule s;
  s.periods.clear();
  for (std::size_t i = 0; i < targets.size(); ++i) s.periods.push_back({2030 + gap * static_cast<int>(i), targets[i]});
  return s;
}

NetworkProblem small_phased_instance(std::uint64_t seed, phasing::PhaseSchedule& sched) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto pick = [&](std::size_t a, std::size_t b) { return std::uniform_int_distribution<std::size_t>(a, b)(rng); };
  const std::size_t n = pick(3, 4);
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({uni(0, 80'000), uni(0, 80'000)});
  std::vector<GraphEdge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const double len = uni(15, 110);
    edges.push_back({pick(0, i - 1), i, len, len * uni(1.0, 2.5)});
  }
  if (edges.size() < 4) {
    const double len = uni(15, 110);
    edges.push_back({0, n - 1, len, len * uni(1.0, 2.5)});
  }
  NetworkProblem p;
  p.candidate = graph(nodes, edges);
  p.economics = three_class_economics();
  const std::size_t ns = pick(1, 2);
  double total = 0;
  for (std::size_t i = 0; i < ns; ++i) {
    p.sources.push_back(source("S" + std::to_string(i + 1), i, uni(1.0, 5.0), uni(20, 70), p.candidate));
    total += p.sources.back().max_capture;
  }
  p.sinks.push_back(sink("K1", n - 1, uni(4.0, 12.0), uni(5, 15)));
  const double top = std::min(total, p.sinks[0].injectivity);
  const double t1 = top * uni(0.2, 0.6);
  sched = schedule({t1, top * uni(0.6, 0.95)});
  p.target = sched.periods.back().target;
  return p;
}

RasterGrid corridor_landcover() {
  using namespace screening;
  RasterGrid g({60, 60, 250.0, 0.0, 0.0}, landcover::kOpen);
  for (std::size_t c = 0; c < 60; ++c) g(30, c) = landcover::kRoad;
  for (std::size_t r = 0; r < 60; ++r) g(r, 12 + r / 6) = landcover::kWater;
  for (std::size_t r = 44; r < 50; ++r)
    for (std::size_t c = 40; c < 47; ++c) g(r, c) = landcover::kDeveloped;
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 50; c < 60; ++c) g(r, c) = landcover::kWetland;
  return g;
}

Mask corridor_fields() {
  Mask m({60, 60, 250.0, 0.0, 0.0}, 0);
  m(10, 45) = 1;
  m(52, 25) = 1;
  return m;
}

screening::ScreeningParams corridor_params() {
  screening::ScreeningParams p;
  p.landcover_buffer = 1'000.0;
  p.field_buffer = 750.0;
  p.min_contiguous_area = 3.0;
  return p;
}

RasterGrid random_surface(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  RasterGrid g({cols, rows, 1000.0, 0.0, 0.0}, 1.0);
  for (auto& v : g.values()) v = d(rng);
  return g;
}

}  // namespace testfx
