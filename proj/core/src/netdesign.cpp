#include "cctskit/netdesign.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include <nlohmann/json.hpp>

#include "cctskit/error.hpp"

namespace cctskit::netdesign {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFlowTol = 1e-9;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

std::vector<CapacityClass> default_capacity_classes(double q_max) {
  if (!(q_max > 9.0)) throw ConfigError("q_max must exceed the 9 Mt/y class breakpoint");
  const double flows[] = {1.0, 3.0, 6.0, 9.0, q_max};
  const double capital[] = {0.80e6, 1.28e6, 1.76e6, 2.40e6, 3.20e6};
  std::vector<CapacityClass> out;
  for (int i = 0; i < 5; ++i) out.push_back({flows[i], capital[i], 0.025 * capital[i]});
  return out;
}

void validate_classes(const std::vector<CapacityClass>& classes) {
  if (classes.empty()) throw ConfigError("at least one pipeline capacity class is required");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    if (!(c.max_flow > 0.0 && c.capital_per_km > 0.0 && c.om_per_km_y >= 0.0))
      throw ConfigError("capacity class values must be positive");
    if (i == 0) continue;
    const auto& p = classes[i - 1];
    if (!(c.max_flow > p.max_flow)) throw ConfigError("capacity class max_flow must increase");
    if (!(c.capital_per_km > p.capital_per_km)) throw ConfigError("capacity class capital must increase");
    if (!(c.capital_per_km / c.max_flow < p.capital_per_km / p.max_flow))
      throw ConfigError("capacity class capital per unit capacity must decrease");
  }
  // Merging two pipes into one must never cost more.
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = i; j < classes.size(); ++j) {
      const int k = smallest_class_for(classes, classes[i].max_flow + classes[j].max_flow);
      if (k < 0) continue;
      const auto& m = classes[static_cast<std::size_t>(k)];
      if (m.capital_per_km > classes[i].capital_per_km + classes[j].capital_per_km ||
          m.om_per_km_y > classes[i].om_per_km_y + classes[j].om_per_km_y)
        throw ConfigError("capacity class costs must be subadditive");
    }
}

int smallest_class_for(const std::vector<CapacityClass>& classes, double flow) {
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].max_flow >= flow - kFlowTol) return static_cast<int>(i);
  return -1;
}

void Economics::validate() const {
  validate_classes(classes);
  if (!(project_years > 0.0)) throw ConfigError("project_years must be positive");
  if (!(fixed_charge_rate > 0.0)) throw ConfigError("fixed_charge_rate must be positive");
  if (!(pump_spacing_km > 0.0)) throw ConfigError("pump_spacing_km must be positive");
  if (!(pump_station_capital >= 0.0 && pump_station_om_y >= 0.0)) throw ConfigError("pump station costs must be >= 0");
  capture_params.validate();
}

long pump_stations(double length_km, double spacing_km) {
  if (!(spacing_km > 0.0)) throw DomainError("pump spacing must be positive");
  if (!(length_km > 0.0)) return 0;
  return std::max(0L, static_cast<long>(std::ceil(length_km / spacing_km - 1e-9)) - 1);
}

EdgeCost pipeline_cost(double length_km, double weighted_km, const CapacityClass& cls, const Economics& econ) {
  EdgeCost c;
  c.capital = cls.capital_per_km * weighted_km;
  c.pumps = pump_stations(length_km, econ.pump_spacing_km);
  c.pump_capital = static_cast<double>(c.pumps) * econ.pump_station_capital;
  c.annual_om = cls.om_per_km_y * length_km + static_cast<double>(c.pumps) * econ.pump_station_om_y;
  c.annualized = econ.fixed_charge_rate * (c.capital + c.pump_capital) + c.annual_om;
  return c;
}

EdgeCost edge_cost(const routing::CandidateEdge& edge, const CapacityClass& cls, const Economics& econ) {
  return pipeline_cost(edge.length, edge.weighted_length, cls, econ);
}

double NetworkProblem::total_capture() const {
  double t = 0.0;
  for (const auto& s : sources) t += s.max_capture;
  return t;
}

double NetworkProblem::total_injectivity() const {
  double t = 0.0;
  for (const auto& s : sinks) t += s.injectivity;
  return t;
}

void NetworkProblem::validate() const {
  economics.validate();
  if (!(target >= 0.0)) throw DomainError("target must be >= 0");
  for (const auto& s : sources) {
    if (s.node >= candidate.nodes.size()) throw DomainError("source " + s.id + " is not on the candidate network");
    if (!(s.max_capture >= 0.0) || !(s.capture_cost >= 0.0)) throw DomainError("source " + s.id + " values invalid");
  }
  for (const auto& k : sinks) {
    if (k.node >= candidate.nodes.size()) throw DomainError("sink " + k.id + " is not on the candidate network");
    if (!(k.injectivity >= 0.0) || !(k.storage_cost >= 0.0)) throw DomainError("sink " + k.id + " values invalid");
  }
  for (const auto& e : candidate.edges)
    if (e.from >= candidate.nodes.size() || e.to >= candidate.nodes.size()) throw DomainError("edge endpoint invalid");
}

NetworkProblem make_problem(routing::CandidateNetwork candidate, const std::vector<capture::FacilityRecord>& facilities,
                            const std::vector<capture::FacilityCapture>& captures,
                            const std::vector<reservoir::StorageSite>& sites, double target, Economics econ) {
  NetworkProblem p;
  for (const auto& c : captures) {
    if (!(c.captured > 0.0)) continue;
    const auto f = std::find_if(facilities.begin(), facilities.end(),
                                [&](const capture::FacilityRecord& r) { return r.id == c.id; });
    if (f == facilities.end()) throw DomainError("capture result for unknown facility " + c.id);
    p.sources.push_back({c.id, candidate.node_of(c.id), c.captured, c.cost_per_tonne, f->co2_concentration, f->x, f->y});
  }
  for (const auto& s : sites) p.sinks.push_back({s.site.id, candidate.node_of(s.site.id), s.injectivity, s.storage_cost, s.capital});
  p.candidate = std::move(candidate);
  p.economics = std::move(econ);
  p.target = target < 0.0 ? p.total_capture() : target;
  p.validate();
  return p;
}

CostReport cost_report(const NetworkProblem& problem, const NetworkSolution& solution) {
  const auto& econ = problem.economics;
  CostReport r;
  for (std::size_t s = 0; s < problem.sources.size(); ++s) {
    const double c = solution.capture.at(s);
    const auto& src = problem.sources[s];
    r.captured += c;
    r.capture_annual += c * src.capture_cost * 1e6;
    if (c > kFlowTol && src.max_capture > 0.0)
      r.capture_capital += capture::capture_capital(src.max_capture, src.concentration, econ.capture_params) * c /
                           src.max_capture;
  }
  for (std::size_t k = 0; k < problem.sinks.size(); ++k) {
    const double q = solution.injection.at(k);
    r.injected += q;
    r.storage_annual += q * problem.sinks[k].storage_cost * 1e6;
    if (q > kFlowTol) {
      r.storage_capital += problem.sinks[k].capital;
      ++r.storage_sites;
    }
  }

  auto add_sej = [&](const routing::CandidateEdge& edge, double times) {
    for (const auto& [layer, km] : edge.sej_km) r.sej_km[layer] += km * times;
  };
  if (!solution.pipelines.empty()) {
    for (const auto& pl : solution.pipelines) {
      const double n = pl.parallel;
      r.transport_annual += pl.cost.annualized * n;
      r.pipeline_capital += (pl.cost.capital + pl.cost.pump_capital) * n;
      r.pump_stations += pl.cost.pumps * pl.parallel;
      r.pipeline_km += pl.length * n;
      r.tonne_km_delivered += pl.flow * pl.length;
      r.tonne_km_nameplate += econ.classes.at(static_cast<std::size_t>(pl.pipe_class)).max_flow * pl.length * n;
      for (std::size_t e : pl.edges) add_sej(problem.candidate.edges.at(e), n);
    }
  } else {
    for (std::size_t e = 0; e < problem.candidate.edges.size(); ++e) {
      const auto& ef = solution.edges.at(e);
      if (ef.pipe_class < 0 || ef.pipes <= 0) continue;
      const auto& edge = problem.candidate.edges[e];
      const auto& cls = econ.classes.at(static_cast<std::size_t>(ef.pipe_class));
      const auto c = edge_cost(edge, cls, econ);
      const double n = ef.pipes;
      r.transport_annual += c.annualized * n;
      r.pipeline_capital += (c.capital + c.pump_capital) * n;
      r.pump_stations += c.pumps * ef.pipes;
      r.pipeline_km += edge.length * n;
      r.tonne_km_delivered += std::abs(ef.flow) * edge.length;
      r.tonne_km_nameplate += cls.max_flow * edge.length * n;
      add_sej(edge, n);
    }
  }
  r.objective = r.capture_annual + r.transport_annual + r.storage_annual;
  if (r.injected > kFlowTol) {
    const double tonnes = r.injected * 1e6;
    r.capture_levelized = r.capture_annual / tonnes;
    r.transport_levelized = r.transport_annual / tonnes;
    r.storage_levelized = r.storage_annual / tonnes;
    r.total_levelized = r.objective / tonnes;
  }
  return r;
}

std::vector<std::string> check_solution(const NetworkProblem& problem, const NetworkSolution& solution,
                                        double tolerance) {
  std::vector<std::string> errors;
  const auto& net = problem.candidate;
  if (solution.capture.size() != problem.sources.size() || solution.injection.size() != problem.sinks.size() ||
      solution.edges.size() != net.edges.size()) {
    errors.push_back("solution does not match the problem dimensions");
    return errors;
  }
  const double scale = std::max(1.0, problem.total_capture());
  const double tol = tolerance * scale;
  std::vector<double> balance(net.nodes.size(), 0.0);
  for (std::size_t s = 0; s < problem.sources.size(); ++s) {
    const double c = solution.capture[s];
    if (c < -tol || c > problem.sources[s].max_capture + tol)
      errors.push_back("source " + problem.sources[s].id + " capture outside [0, max]");
    balance[problem.sources[s].node] += c;
  }
  for (std::size_t k = 0; k < problem.sinks.size(); ++k) {
    const double q = solution.injection[k];
    if (q < -tol || q > problem.sinks[k].injectivity + tol)
      errors.push_back("sink " + problem.sinks[k].id + " injection outside [0, injectivity]");
    balance[problem.sinks[k].node] -= q;
  }
  std::vector<double> capacity(net.edges.size(), 0.0);
  if (!solution.pipelines.empty()) {
    for (const auto& pl : solution.pipelines)
      for (std::size_t e : pl.edges)
        capacity.at(e) += problem.economics.classes.at(static_cast<std::size_t>(pl.pipe_class)).max_flow * pl.parallel;
  } else {
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      const auto& ef = solution.edges[e];
      if (ef.pipe_class >= 0)
        capacity[e] = problem.economics.classes.at(static_cast<std::size_t>(ef.pipe_class)).max_flow * ef.pipes;
    }
  }
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const double f = solution.edges[e].flow;
    if (std::abs(f) > capacity[e] + tol)
      errors.push_back("edge " + std::to_string(e) + " flow exceeds installed capacity");
    balance[net.edges[e].from] -= f;
    balance[net.edges[e].to] += f;
  }
  for (std::size_t n = 0; n < balance.size(); ++n)
    if (std::abs(balance[n]) > tol) errors.push_back("flow not conserved at node " + net.nodes[n].id);
  double injected = 0.0;
  for (double q : solution.injection) injected += q;
  if (solution.unplaced.empty() && injected < problem.target - tol) errors.push_back("injection below target");

  const auto again = cost_report(problem, solution);
  const auto& rep = solution.report;
  const std::pair<const char*, std::pair<double, double>> totals[] = {
      {"objective", {again.objective, rep.objective}},
      {"capture cost", {again.capture_annual, rep.capture_annual}},
      {"transport cost", {again.transport_annual, rep.transport_annual}},
      {"storage cost", {again.storage_annual, rep.storage_annual}},
      {"pipeline km", {again.pipeline_km, rep.pipeline_km}},
  };
  for (const auto& [name, v] : totals)
    if (!close_rel(v.first, v.second, 1e-6)) errors.push_back(std::string("reported ") + name + " does not recompute");
  return errors;
}

solver::DesignProblem to_design_problem(const NetworkProblem& problem) {
  solver::DesignProblem d;
  d.node_count = problem.candidate.nodes.size();
  d.targets = {problem.target};
  for (const auto& edge : problem.candidate.edges) {
    solver::DesignEdge de;
    de.u = edge.from;
    de.v = edge.to;
    for (const auto& cls : problem.economics.classes)
      de.classes.push_back({cls.max_flow, {edge_cost(edge, cls, problem.economics).annualized}});
    d.edges.push_back(std::move(de));
  }
  for (const auto& s : problem.sources)
    d.sources.push_back({s.node, s.max_capture, {s.capture_cost * 1e6}, problem.economics.all_or_nothing_capture, {}});
  for (const auto& k : problem.sinks) d.sinks.push_back({k.node, k.injectivity, {k.storage_cost * 1e6}});
  return d;
}

NetworkSolution solve_shared(const NetworkProblem& problem, const solver::SolverOptions& options) {
  problem.validate();
  const auto design = solver::solve_design(to_design_problem(problem), options);
  NetworkSolution sol;
  sol.design = "shared";
  const auto& flows = design.periods.front();
  sol.capture = flows.capture;
  sol.injection = flows.injection;
  sol.edges.resize(problem.candidate.edges.size());
  for (std::size_t e = 0; e < sol.edges.size(); ++e) {
    auto& ef = sol.edges[e];
    ef.flow = std::abs(flows.edge_flow[e]) > kFlowTol ? flows.edge_flow[e] : 0.0;
    if (!design.builds[e].empty()) {
      ef.pipe_class = design.builds[e].front().pipe_class;
      ef.pipes = static_cast<int>(design.builds[e].size());
      ef.length = problem.candidate.edges[e].length * ef.pipes;
    }
  }
  sol.proven_optimal = design.proven_optimal;
  sol.best_bound = design.best_bound;
  sol.nodes_explored = design.nodes_explored;
  sol.report = cost_report(problem, sol);
  return sol;
}

namespace {

// Cheapest route between two nodes of the candidate graph at one class's unit costs.
std::optional<std::vector<std::size_t>> cheapest_route(const NetworkProblem& problem, std::size_t from, std::size_t to,
                                                       const CapacityClass& cls) {
  const auto& net = problem.candidate;
  const auto& econ = problem.economics;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(net.nodes.size());
  for (const auto& e : net.edges) {
    adj[e.from].emplace_back(e.to, e.id);
    adj[e.to].emplace_back(e.from, e.id);
  }
  std::vector<double> dist(net.nodes.size(), kInf);
  std::vector<std::size_t> via(net.nodes.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> prev(net.nodes.size(), std::numeric_limits<std::size_t>::max());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[from] = 0.0;
  heap.emplace(0.0, from);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, e] : adj[u]) {
      const auto& edge = net.edges[e];
      const double w =
          econ.fixed_charge_rate * cls.capital_per_km * edge.weighted_length + cls.om_per_km_y * edge.length;
      const double nd = d + w;
      if (nd < dist[v] || (nd == dist[v] && u < prev[v])) {
        dist[v] = nd;
        prev[v] = u;
        via[v] = e;
        heap.emplace(nd, v);
      }
    }
  }
  if (!std::isfinite(dist[to])) return std::nullopt;
  std::vector<std::size_t> edges;
  for (std::size_t v = to; v != from; v = prev[v]) edges.push_back(via[v]);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

}  // namespace

DedicatedResult solve_dedicated(const NetworkProblem& problem) {
  problem.validate();
  const auto& econ = problem.economics;
  const auto& net = problem.candidate;
  DedicatedResult out;
  auto& sol = out.solution;
  sol.design = "dedicated";
  sol.capture.assign(problem.sources.size(), 0.0);
  sol.injection.assign(problem.sinks.size(), 0.0);
  sol.edges.resize(net.edges.size());
  sol.proven_optimal = false;

  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < problem.sources.size(); ++s)
    if (problem.sources[s].max_capture > kFlowTol) order.push_back(s);
  if (!order.empty()) {
    const std::size_t largest = *std::min_element(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (problem.sources[a].max_capture != problem.sources[b].max_capture)
        return problem.sources[a].max_capture > problem.sources[b].max_capture;
      return a < b;
    });
    const auto& big = problem.sources[largest];
    auto distance = [&](std::size_t s) { return std::hypot(problem.sources[s].x - big.x, problem.sources[s].y - big.y); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (a == largest || b == largest) return a == largest && b != largest;
      return distance(a) < distance(b);
    });
  }

  const double q_max = econ.classes.back().max_flow;
  std::vector<double> remaining;
  for (const auto& k : problem.sinks) remaining.push_back(k.injectivity);

  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t s = order[i];
    const auto& src = problem.sources[s];
    const double flow = src.max_capture;
    const int parallel = std::max(1, static_cast<int>(std::ceil(flow / q_max - 1e-9)));
    const int cls_index = smallest_class_for(econ.classes, flow / parallel);
    const auto& cls = econ.classes.at(static_cast<std::size_t>(cls_index));

    DedicatedStep step;
    step.order = i + 1;
    step.source = src.id;
    step.flow = flow;
    step.distance_from_largest = std::hypot(src.x - problem.sources[order.front()].x, src.y - problem.sources[order.front()].y);

    double best = kInf;
    std::size_t best_sink = 0;
    Pipeline best_line;
    for (std::size_t k = 0; k < problem.sinks.size(); ++k) {
      if (remaining[k] < flow - kFlowTol) continue;
      auto route = cheapest_route(problem, src.node, problem.sinks[k].node, cls);
      if (!route) continue;
      Pipeline line;
      line.source = src.id;
      line.sink = problem.sinks[k].id;
      line.edges = *route;
      line.pipe_class = cls_index;
      line.parallel = parallel;
      line.flow = flow;
      for (std::size_t e : line.edges) {
        line.length += net.edges[e].length;
        line.weighted_length += net.edges[e].weighted_length;
      }
      line.cost = pipeline_cost(line.length, line.weighted_length, cls, econ);
      const double per_tonne = line.cost.annualized * parallel / (flow * 1e6) + problem.sinks[k].storage_cost;
      if (per_tonne < best) {
        best = per_tonne;
        best_sink = k;
        best_line = std::move(line);
      }
    }
    if (!std::isfinite(best)) {
      sol.unplaced.push_back(src.id);
      out.trace.push_back(step);
      continue;
    }
    step.sink = problem.sinks[best_sink].id;
    step.transport_storage_cost = best;
    out.trace.push_back(step);
    remaining[best_sink] -= flow;
    sol.capture[s] = flow;
    sol.injection[best_sink] += flow;

    // Walk the route to orient each edge's flow.
    std::size_t at = src.node;
    for (std::size_t e : best_line.edges) {
      const auto& edge = net.edges[e];
      auto& ef = sol.edges[e];
      const bool forward = edge.from == at;
      ef.flow += forward ? flow : -flow;
      at = forward ? edge.to : edge.from;
      ef.pipes += parallel;
      ef.pipe_class = std::max(ef.pipe_class, cls_index);
      ef.length += edge.length * parallel;
    }
    sol.pipelines.push_back(std::move(best_line));
  }
  sol.report = cost_report(problem, sol);
  return out;
}

std::vector<ComparisonRow> compare_designs(const NetworkProblem& problem, const NetworkSolution& shared,
                                           const NetworkSolution& dedicated) {
  for (const auto* s : {&shared, &dedicated}) {
    if (s->capture.size() != problem.sources.size() || s->injection.size() != problem.sinks.size() ||
        s->edges.size() != problem.candidate.edges.size())
      throw DomainError("solutions being compared do not come from the same problem");
  }
  // A complete dedicated design fits the shared model when no edge needs more
  // than one top-class pipe, so it bounds the shared optimum.
  bool dedicated_fits = dedicated.unplaced.empty() && shared.proven_optimal;
  for (const auto& ef : dedicated.edges)
    if (std::abs(ef.flow) > problem.economics.classes.back().max_flow + kFlowTol) dedicated_fits = false;
  if (dedicated_fits && shared.report.objective > dedicated.report.objective * (1.0 + 1e-9))
    throw DomainError("shared design costs more than a complete dedicated design");

  const auto& a = shared.report;
  const auto& b = dedicated.report;
  auto per_mt = [](const CostReport& r) { return r.injected > kFlowTol ? r.pipeline_km / r.injected : 0.0; };
  std::vector<ComparisonRow> rows{
      {"captured_mt_y", a.captured, b.captured, 0},
      {"pipeline_km", a.pipeline_km, b.pipeline_km, 0},
      {"km_per_mt_y", per_mt(a), per_mt(b), 0},
      {"pipeline_capital_usd", a.pipeline_capital, b.pipeline_capital, 0},
      {"capture_capital_usd", a.capture_capital, b.capture_capital, 0},
      {"storage_capital_usd", a.storage_capital, b.storage_capital, 0},
      {"pump_stations", static_cast<double>(a.pump_stations), static_cast<double>(b.pump_stations), 0},
      {"storage_sites", static_cast<double>(a.storage_sites), static_cast<double>(b.storage_sites), 0},
      {"capture_usd_t", a.capture_levelized, b.capture_levelized, 0},
      {"transport_usd_t", a.transport_levelized, b.transport_levelized, 0},
      {"storage_usd_t", a.storage_levelized, b.storage_levelized, 0},
      {"total_usd_t", a.total_levelized, b.total_levelized, 0},
      {"objective_usd_y", a.objective, b.objective, 0},
  };
  for (auto& r : rows) r.delta = r.shared - r.dedicated;
  return rows;
}

std::vector<Hub> hub_report(const NetworkProblem& problem, const NetworkSolution& solution) {
  const auto& net = problem.candidate;
  const auto& econ = problem.economics;
  UnionFind uf(net.nodes.size());
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    if (solution.edges.at(e).pipes > 0) uf.unite(net.edges[e].from, net.edges[e].to);

  std::map<std::size_t, Hub> by_root;
  std::map<std::size_t, double> stored, storage_spend, transport_spend, tkm, tkm_nameplate;
  for (std::size_t s = 0; s < problem.sources.size(); ++s) {
    if (solution.capture.at(s) <= kFlowTol) continue;
    auto& h = by_root[uf.find(problem.sources[s].node)];
    h.sources.push_back(problem.sources[s].id);
    h.captured += solution.capture[s];
  }
  for (std::size_t k = 0; k < problem.sinks.size(); ++k) {
    const double q = solution.injection.at(k);
    if (q <= kFlowTol) continue;
    const std::size_t root = uf.find(problem.sinks[k].node);
    by_root[root].sinks.push_back(problem.sinks[k].id);
    stored[root] += q;
    storage_spend[root] += q * problem.sinks[k].storage_cost;
  }
  if (!solution.pipelines.empty()) {
    for (const auto& pl : solution.pipelines) {
      const std::size_t root = uf.find(problem.sources[static_cast<std::size_t>(
          std::find_if(problem.sources.begin(), problem.sources.end(),
                       [&](const SourceInput& s) { return s.id == pl.source; }) -
          problem.sources.begin())].node);
      transport_spend[root] += pl.cost.annualized * pl.parallel;
      tkm[root] += pl.flow * pl.length;
      tkm_nameplate[root] += econ.classes.at(static_cast<std::size_t>(pl.pipe_class)).max_flow * pl.length * pl.parallel;
      by_root[root].pipeline_km += pl.length * pl.parallel;
    }
  } else {
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      const auto& ef = solution.edges[e];
      if (ef.pipes <= 0 || ef.pipe_class < 0) continue;
      const std::size_t root = uf.find(net.edges[e].from);
      const auto& cls = econ.classes.at(static_cast<std::size_t>(ef.pipe_class));
      transport_spend[root] += edge_cost(net.edges[e], cls, econ).annualized * ef.pipes;
      tkm[root] += std::abs(ef.flow) * net.edges[e].length;
      tkm_nameplate[root] += cls.max_flow * net.edges[e].length * ef.pipes;
      by_root[root].pipeline_km += net.edges[e].length * ef.pipes;
    }
  }

  std::vector<std::pair<std::size_t, Hub>> hubs(by_root.begin(), by_root.end());
  for (auto& [root, h] : hubs) {
    // $ per 10^3 t-km: annual spend / (Mt/y x km x 1e6 t/Mt / 1e3).
    if (tkm[root] > 0.0) h.transport_cost_per_tkm = transport_spend[root] / (tkm[root] * 1e3);
    if (tkm_nameplate[root] > 0.0) h.transport_cost_per_tkm_nameplate = transport_spend[root] / (tkm_nameplate[root] * 1e3);
    if (stored[root] > 0.0) h.storage_cost = storage_spend[root] / stored[root];
    h.natural_hub = h.sources.size() >= 2;
  }
  std::stable_sort(hubs.begin(), hubs.end(), [](const auto& a, const auto& b) {
    if (a.second.captured != b.second.captured) return a.second.captured < b.second.captured;
    return a.first < b.first;
  });
  std::vector<Hub> out;
  for (auto& [root, h] : hubs) {
    h.index = out.size() + 1;
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<FlowClassRow> sej_flow_class_table(const NetworkProblem& problem, const NetworkSolution& solution,
                                               const std::string& sej_layer) {
  std::vector<FlowClassRow> rows{{"<1", 0, 0}, {"1-3", 0, 0}, {"3-6", 0, 0}, {"6-9", 0, 0}, {">9", 0, 0}, {"Total", 0, 0}};
  const double bounds[] = {1.0, 3.0, 6.0, 9.0};
  for (std::size_t e = 0; e < problem.candidate.edges.size(); ++e) {
    const auto& ef = solution.edges.at(e);
    if (ef.pipes <= 0) continue;
    const auto& edge = problem.candidate.edges[e];
    const double f = std::abs(ef.flow);
    std::size_t row = 4;
    for (std::size_t i = 0; i < 4; ++i)
      if (f < bounds[i] + kFlowTol) {
        row = i;
        break;
      }
    const auto it = edge.sej_km.find(sej_layer);
    const double sej = it == edge.sej_km.end() ? 0.0 : it->second * ef.pipes;
    rows[row].km += edge.length * ef.pipes;
    rows[row].sej_km += sej;
    rows[5].km += edge.length * ef.pipes;
    rows[5].sej_km += sej;
  }
  return rows;
}

namespace {

json report_json(const CostReport& r) {
  return {{"captured_mt_y", r.captured},
          {"injected_mt_y", r.injected},
          {"capture_usd_y", r.capture_annual},
          {"transport_usd_y", r.transport_annual},
          {"storage_usd_y", r.storage_annual},
          {"objective_usd_y", r.objective},
          {"capture_usd_t", r.capture_levelized},
          {"transport_usd_t", r.transport_levelized},
          {"storage_usd_t", r.storage_levelized},
          {"total_usd_t", r.total_levelized},
          {"pipeline_km", r.pipeline_km},
          {"pipeline_capital_usd", r.pipeline_capital},
          {"capture_capital_usd", r.capture_capital},
          {"storage_capital_usd", r.storage_capital},
          {"pump_stations", r.pump_stations},
          {"storage_sites", r.storage_sites},
          {"tonne_km_delivered", r.tonne_km_delivered},
          {"tonne_km_nameplate", r.tonne_km_nameplate},
          {"sej_km", r.sej_km}};
}

CostReport report_from(const json& j) {
  CostReport r;
  r.captured = j.at("captured_mt_y");
  r.injected = j.at("injected_mt_y");
  r.capture_annual = j.at("capture_usd_y");
  r.transport_annual = j.at("transport_usd_y");
  r.storage_annual = j.at("storage_usd_y");
  r.objective = j.at("objective_usd_y");
  r.capture_levelized = j.at("capture_usd_t");
  r.transport_levelized = j.at("transport_usd_t");
  r.storage_levelized = j.at("storage_usd_t");
  r.total_levelized = j.at("total_usd_t");
  r.pipeline_km = j.at("pipeline_km");
  r.pipeline_capital = j.at("pipeline_capital_usd");
  r.capture_capital = j.at("capture_capital_usd");
  r.storage_capital = j.at("storage_capital_usd");
  r.pump_stations = j.at("pump_stations");
  r.storage_sites = j.at("storage_sites");
  r.tonne_km_delivered = j.at("tonne_km_delivered");
  r.tonne_km_nameplate = j.at("tonne_km_nameplate");
  r.sej_km = j.at("sej_km").get<std::map<std::string, double>>();
  return r;
}

}  // namespace

void write_solution_json(const std::string& path, const NetworkProblem& problem, const NetworkSolution& solution) {
  json j;
  j["design"] = solution.design;
  j["target_mt_y"] = problem.target;
  j["proven_optimal"] = solution.proven_optimal;
  j["best_bound"] = solution.best_bound;
  j["nodes_explored"] = solution.nodes_explored;
  j["report"] = report_json(solution.report);
  j["capture"] = json::array();
  for (std::size_t s = 0; s < problem.sources.size(); ++s)
    j["capture"].push_back({{"id", problem.sources[s].id}, {"mt_y", solution.capture[s]}});
  j["injection"] = json::array();
  for (std::size_t k = 0; k < problem.sinks.size(); ++k)
    j["injection"].push_back({{"id", problem.sinks[k].id}, {"mt_y", solution.injection[k]}});
  j["edges"] = json::array();
  for (std::size_t e = 0; e < solution.edges.size(); ++e) {
    const auto& ef = solution.edges[e];
    j["edges"].push_back(
        {{"id", e}, {"class", ef.pipe_class}, {"flow", ef.flow}, {"pipes", ef.pipes}, {"length_km", ef.length}});
  }
  j["pipelines"] = json::array();
  for (const auto& pl : solution.pipelines) {
    j["pipelines"].push_back({{"source", pl.source},
                              {"sink", pl.sink},
                              {"edges", pl.edges},
                              {"class", pl.pipe_class},
                              {"parallel", pl.parallel},
                              {"flow", pl.flow},
                              {"length_km", pl.length},
                              {"weighted_km", pl.weighted_length},
                              {"capital_usd", pl.cost.capital},
                              {"pump_capital_usd", pl.cost.pump_capital},
                              {"annual_om_usd", pl.cost.annual_om},
                              {"annualized_usd", pl.cost.annualized},
                              {"pumps", pl.cost.pumps}});
  }
  j["unplaced"] = solution.unplaced;
  open_out(path) << j.dump(1) << "\n";
}

NetworkSolution read_solution_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DependencyError("missing solution file " + path);
  try {
    const json j = json::parse(in);
    NetworkSolution s;
    s.design = j.at("design");
    s.proven_optimal = j.at("proven_optimal");
    s.best_bound = j.at("best_bound");
    s.nodes_explored = j.at("nodes_explored");
    s.report = report_from(j.at("report"));
    for (const auto& c : j.at("capture")) s.capture.push_back(c.at("mt_y"));
    for (const auto& c : j.at("injection")) s.injection.push_back(c.at("mt_y"));
    for (const auto& e : j.at("edges"))
      s.edges.push_back({e.at("class"), e.at("flow"), e.at("pipes"), e.at("length_km")});
    for (const auto& p : j.at("pipelines")) {
      Pipeline pl;
      pl.source = p.at("source");
      pl.sink = p.at("sink");
      pl.edges = p.at("edges").get<std::vector<std::size_t>>();
      pl.pipe_class = p.at("class");
      pl.parallel = p.at("parallel");
      pl.flow = p.at("flow");
      pl.length = p.at("length_km");
      pl.weighted_length = p.at("weighted_km");
      pl.cost.capital = p.at("capital_usd");
      pl.cost.pump_capital = p.at("pump_capital_usd");
      pl.cost.annual_om = p.at("annual_om_usd");
      pl.cost.annualized = p.at("annualized_usd");
      pl.cost.pumps = p.at("pumps");
      s.pipelines.push_back(std::move(pl));
    }
    s.unplaced = j.at("unplaced").get<std::vector<std::string>>();
    return s;
  } catch (const json::exception& e) {
    throw ParseError(path, 0, std::string("invalid solution JSON: ") + e.what());
  }
}

void write_solution_geojson(const std::string& path, const NetworkProblem& problem, const NetworkSolution& solution) {
  const auto& net = problem.candidate;
  json features = json::array();
  for (std::size_t s = 0; s < problem.sources.size(); ++s) {
    const auto& n = net.nodes[problem.sources[s].node];
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {n.x, n.y}}}},
                        {"properties", {{"id", problem.sources[s].id}, {"role", "source"}, {"capture_mt_y", solution.capture[s]}}}});
  }
  for (std::size_t k = 0; k < problem.sinks.size(); ++k) {
    const auto& n = net.nodes[problem.sinks[k].node];
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {n.x, n.y}}}},
                        {"properties", {{"id", problem.sinks[k].id}, {"role", "sink"}, {"injection_mt_y", solution.injection[k]}}}});
  }
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto& ef = solution.edges[e];
    if (ef.pipes <= 0) continue;
    const auto& edge = net.edges[e];
    json coords = json::array();
    for (const auto& c : edge.cells) coords.push_back({net.spec.center_x(c.col), net.spec.center_y(c.row)});
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                        {"properties",
                         {{"edge_id", e},
                          {"from", net.nodes[edge.from].id},
                          {"to", net.nodes[edge.to].id},
                          {"class", ef.pipe_class},
                          {"max_flow_mt_y", problem.economics.classes.at(static_cast<std::size_t>(ef.pipe_class)).max_flow},
                          {"flow_mt_y", ef.flow},
                          {"pipes", ef.pipes},
                          {"length_km", edge.length}}}});
  }
  json doc{{"type", "FeatureCollection"}, {"features", features}};
  open_out(path) << doc.dump(1) << "\n";
}

void write_problem_json(const std::string& path, const NetworkProblem& problem) {
  json j;
  j["target_mt_y"] = problem.target;
  j["sources"] = json::array();
  for (const auto& s : problem.sources)
    j["sources"].push_back({{"id", s.id},
                            {"node", problem.candidate.nodes[s.node].id},
                            {"max_capture_mt_y", s.max_capture},
                            {"capture_usd_t", s.capture_cost}});
  j["sinks"] = json::array();
  for (const auto& k : problem.sinks)
    j["sinks"].push_back({{"id", k.id},
                          {"node", problem.candidate.nodes[k.node].id},
                          {"injectivity_mt_y", k.injectivity},
                          {"storage_usd_t", k.storage_cost}});
  const auto& econ = problem.economics;
  j["economics"] = {{"project_years", econ.project_years},
                    {"fixed_charge_rate", econ.fixed_charge_rate},
                    {"pump_spacing_km", econ.pump_spacing_km},
                    {"pump_station_capital_usd", econ.pump_station_capital},
                    {"pump_station_om_usd_y", econ.pump_station_om_y},
                    {"pressure_window_barg", {econ.min_pressure_barg, econ.max_pressure_barg}},
                    {"all_or_nothing_capture", econ.all_or_nothing_capture}};
  j["economics"]["classes"] = json::array();
  for (const auto& c : econ.classes)
    j["economics"]["classes"].push_back(
        {{"max_flow_mt_y", c.max_flow}, {"capital_usd_km", c.capital_per_km}, {"om_usd_km_y", c.om_per_km_y}});
  open_out(path) << j.dump(1) << "\n";
}

}  // namespace cctskit::netdesign
