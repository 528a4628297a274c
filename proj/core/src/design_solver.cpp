#include "cctskit/design_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>

#include "cctskit/error.hpp"

namespace cctskit::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNoArc = std::numeric_limits<std::size_t>::max();
constexpr int kContinuous = -1;
constexpr int kUndecided = -2;

enum class SourceMode { Off, Forced, Optional };

bool enough(double sent, double wanted) { return sent >= wanted - 1e-9 * std::max(1.0, wanted); }

double class_capacity_max(const DesignEdge& e) {
  double q = 0.0;
  for (const auto& c : e.classes) q = std::max(q, c.capacity);
  return q;
}

double existing_capacity(const DesignEdge& e) {
  double q = 0.0;
  for (double c : e.existing) q += c;
  return q;
}

struct EdgeArcs {
  double base_cap = 0.0;
  double extra_cap = 0.0;
  double extra_cost = 0.0;
};

struct PeriodResult {
  PeriodFlows flows;
  std::vector<double> extra_flow;  // per edge, flow on the relaxed-capacity arcs
  double cost = 0.0;               // full min-cost-flow cost incl. extra arcs
};

// One period's min-cost flow. Forced sources are routed first and frozen.
std::optional<PeriodResult> solve_period(const DesignProblem& problem, std::size_t p, const std::vector<EdgeArcs>& arcs,
                                         const std::vector<SourceMode>& modes) {
  const std::size_t n = problem.node_count;
  const std::size_t s_forced = n, s_optional = n + 1, sink = n + 2;
  MinCostFlow mcf(n + 3);

  struct EdgeIds {
    std::size_t base_f = kNoArc, base_b = kNoArc, extra_f = kNoArc, extra_b = kNoArc;
  };
  std::vector<EdgeIds> ids(problem.edges.size());
  for (std::size_t e = 0; e < problem.edges.size(); ++e) {
    const auto& edge = problem.edges[e];
    if (arcs[e].base_cap > 0.0) {
      ids[e].base_f = mcf.add_arc(edge.u, edge.v, arcs[e].base_cap, 0.0);
      ids[e].base_b = mcf.add_arc(edge.v, edge.u, arcs[e].base_cap, 0.0);
    }
    if (arcs[e].extra_cap > 0.0) {
      ids[e].extra_f = mcf.add_arc(edge.u, edge.v, arcs[e].extra_cap, arcs[e].extra_cost);
      ids[e].extra_b = mcf.add_arc(edge.v, edge.u, arcs[e].extra_cap, arcs[e].extra_cost);
    }
  }
  std::vector<std::size_t> source_arc(problem.sources.size(), kNoArc);
  double forced = 0.0;
  for (std::size_t s = 0; s < problem.sources.size(); ++s) {
    const auto& src = problem.sources[s];
    if (modes[s] == SourceMode::Off || !(src.max_capture > 0.0)) continue;
    const bool is_forced = modes[s] == SourceMode::Forced;
    source_arc[s] = mcf.add_arc(is_forced ? s_forced : s_optional, src.node, src.max_capture,
                                src.unit_cost_by_period[p]);
    if (is_forced) forced += src.max_capture;
  }
  std::vector<std::size_t> sink_arc(problem.sinks.size(), kNoArc);
  for (std::size_t k = 0; k < problem.sinks.size(); ++k) {
    const auto& snk = problem.sinks[k];
    if (!(snk.capacity > 0.0)) continue;
    sink_arc[k] = mcf.add_arc(snk.node, sink, snk.capacity, snk.unit_cost_by_period[p]);
  }

  if (forced > 0.0) {
    if (!enough(mcf.push(s_forced, sink, forced), forced)) return std::nullopt;
    for (std::size_t s = 0; s < problem.sources.size(); ++s)
      if (modes[s] == SourceMode::Forced && source_arc[s] != kNoArc) mcf.freeze(source_arc[s]);
  }
  const double optional = std::max(0.0, problem.targets[p] - forced);
  if (optional > 0.0 && !enough(mcf.push(s_optional, sink, optional), optional)) return std::nullopt;

  PeriodResult r;
  r.flows.edge_flow.assign(problem.edges.size(), 0.0);
  r.extra_flow.assign(problem.edges.size(), 0.0);
  for (std::size_t e = 0; e < problem.edges.size(); ++e) {
    auto f = [&](std::size_t id) { return id == kNoArc ? 0.0 : mcf.flow(id); };
    r.flows.edge_flow[e] = f(ids[e].base_f) - f(ids[e].base_b) + f(ids[e].extra_f) - f(ids[e].extra_b);
    r.extra_flow[e] = f(ids[e].extra_f) + f(ids[e].extra_b);
  }
  r.flows.capture.assign(problem.sources.size(), 0.0);
  for (std::size_t s = 0; s < problem.sources.size(); ++s) {
    if (source_arc[s] == kNoArc) continue;
    r.flows.capture[s] = mcf.flow(source_arc[s]);
    r.flows.flow_cost += r.flows.capture[s] * problem.sources[s].unit_cost_by_period[p];
  }
  r.flows.injection.assign(problem.sinks.size(), 0.0);
  for (std::size_t k = 0; k < problem.sinks.size(); ++k) {
    if (sink_arc[k] == kNoArc) continue;
    r.flows.injection[k] = mcf.flow(sink_arc[k]);
    r.flows.flow_cost += r.flows.injection[k] * problem.sinks[k].unit_cost_by_period[p];
  }
  r.cost = mcf.cost();
  return r;
}

std::vector<SourceMode> modes_for(const DesignProblem& problem, std::size_t p, const std::vector<int>& starts) {
  std::vector<SourceMode> modes(problem.sources.size(), SourceMode::Optional);
  for (std::size_t s = 0; s < problem.sources.size(); ++s) {
    const int start = starts[s];
    if (start >= 0) modes[s] = static_cast<int>(p) >= start ? SourceMode::Forced : SourceMode::Off;
  }
  return modes;
}

// Search node: per edge, builds are decided for periods < decided[e].
struct Node {
  double bound = 0.0;
  std::uint64_t seq = 0;
  std::vector<std::int8_t> decided;
  std::vector<std::int8_t> choice;  // edge * periods + period -> class or -1
  std::vector<int> starts;          // per source: start, kContinuous or kUndecided
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

struct Relaxation {
  double bound = 0.0;
  std::vector<PeriodResult> periods;
  std::vector<double> edge_cost;  // relaxed build cost per edge, undecided part
};

class BranchAndBound {
 public:
  BranchAndBound(const DesignProblem& problem, const SolverOptions& options)
      : problem_(problem), options_(options), periods_(problem.periods()) {}

  DesignSolution run();

 private:
  std::optional<Relaxation> relax(const Node& node) const;
  double decided_cost(const Node& node) const;
  std::vector<Build> builds_of(const Node& node, std::size_t e) const;
  // Cheapest completion of edge e covering the relaxed flows; cost is +inf if none.
  std::pair<double, std::vector<Build>> round_edge(const Node& node, std::size_t e, const Relaxation& r) const;
  void try_incumbent(const Node& node, const Relaxation& r);
  std::vector<Node> branch(const Node& node, const Relaxation& r) const;
  void push_child(Node child);

  const DesignProblem& problem_;
  const SolverOptions& options_;
  std::size_t periods_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue_;
  std::uint64_t seq_ = 0;
  double incumbent_ = kInf;
  std::optional<DesignSolution> best_;
  std::size_t explored_ = 0;
};

double BranchAndBound::decided_cost(const Node& node) const {
  double cost = 0.0;
  for (std::size_t e = 0; e < problem_.edges.size(); ++e)
    for (std::size_t q = 0; q < static_cast<std::size_t>(node.decided[e]); ++q) {
      const int c = node.choice[e * periods_ + q];
      if (c >= 0) cost += problem_.edges[e].classes[static_cast<std::size_t>(c)].cost_by_period[q];
    }
  return cost;
}

std::vector<Build> BranchAndBound::builds_of(const Node& node, std::size_t e) const {
  std::vector<Build> out;
  for (std::size_t q = 0; q < static_cast<std::size_t>(node.decided[e]); ++q) {
    const int c = node.choice[e * periods_ + q];
    if (c >= 0) out.push_back({static_cast<int>(q), c});
  }
  return out;
}

std::optional<Relaxation> BranchAndBound::relax(const Node& node) const {
  const std::size_t E = problem_.edges.size();
  Relaxation r;
  r.edge_cost.assign(E, 0.0);
  r.bound = decided_cost(node);

  // rho[e][p] for undecided periods: running minimum of cost per capacity.
  std::vector<std::vector<double>> rho(E, std::vector<double>(periods_ + 1, 0.0));
  std::vector<double> base(E, 0.0), extra(E, 0.0);
  for (std::size_t e = 0; e < E; ++e) {
    const auto& edge = problem_.edges[e];
    const std::size_t d = static_cast<std::size_t>(node.decided[e]);
    int built = 0;
    base[e] = existing_capacity(edge);
    for (std::size_t q = 0; q < d; ++q) {
      const int c = node.choice[e * periods_ + q];
      if (c >= 0) {
        base[e] += edge.classes[static_cast<std::size_t>(c)].capacity;
        ++built;
      }
    }
    extra[e] = static_cast<double>(std::max(0, edge.max_new_pipes - built)) * class_capacity_max(edge);
    double running = kInf;
    for (std::size_t q = d; q < periods_; ++q) {
      for (const auto& c : edge.classes) running = std::min(running, c.cost_by_period[q] / c.capacity);
      rho[e][q] = running;
    }
  }

  for (std::size_t p = 0; p < periods_; ++p) {
    std::vector<EdgeArcs> arcs(E);
    for (std::size_t e = 0; e < E; ++e) {
      const auto& edge = problem_.edges[e];
      const std::size_t d = static_cast<std::size_t>(node.decided[e]);
      if (p < d) {
        arcs[e].base_cap = edge_capacity(edge, builds_of(node, e), p);
      } else {
        arcs[e].base_cap = base[e];
        arcs[e].extra_cap = extra[e];
        arcs[e].extra_cost = rho[e][p] - rho[e][p + 1];
      }
    }
    auto res = solve_period(problem_, p, arcs, modes_for(problem_, p, node.starts));
    if (!res) return std::nullopt;
    for (std::size_t e = 0; e < E; ++e) r.edge_cost[e] += arcs[e].extra_cost * res->extra_flow[e];
    r.bound += res->cost;
    r.periods.push_back(std::move(*res));
  }
  return r;
}

std::pair<double, std::vector<Build>> BranchAndBound::round_edge(const Node& node, std::size_t e,
                                                                 const Relaxation& r) const {
  const auto& edge = problem_.edges[e];
  const std::size_t d = static_cast<std::size_t>(node.decided[e]);
  double cap = existing_capacity(edge);
  int built = 0;
  for (const auto& b : builds_of(node, e)) {
    cap += edge.classes[static_cast<std::size_t>(b.pipe_class)].capacity;
    ++built;
  }
  const double tol = options_.flow_tolerance;
  double best = kInf;
  std::vector<Build> best_builds, current;

  auto dfs = [&](auto&& self, std::size_t q, double capacity, int left, double cost) -> void {
    if (cost >= best) return;
    if (q == periods_) {
      best = cost;
      best_builds = current;
      return;
    }
    const double need = std::abs(r.periods[q].flows.edge_flow[e]);
    if (capacity >= need - tol) self(self, q + 1, capacity, left, cost);
    if (left <= 0) return;
    for (std::size_t c = 0; c < edge.classes.size(); ++c) {
      const auto& cls = edge.classes[c];
      if (capacity + cls.capacity < need - tol) continue;
      current.push_back({static_cast<int>(q), static_cast<int>(c)});
      self(self, q + 1, capacity + cls.capacity, left - 1, cost + cls.cost_by_period[q]);
      current.pop_back();
    }
  };
  dfs(dfs, d, cap, edge.max_new_pipes - built, 0.0);
  return {best, best_builds};
}

void BranchAndBound::try_incumbent(const Node& node, const Relaxation& r) {
  std::vector<std::vector<Build>> builds(problem_.edges.size());
  for (std::size_t e = 0; e < problem_.edges.size(); ++e) {
    builds[e] = builds_of(node, e);
    auto [cost, extra] = round_edge(node, e, r);
    if (!std::isfinite(cost)) return;
    builds[e].insert(builds[e].end(), extra.begin(), extra.end());
  }
  std::vector<std::optional<int>> starts(problem_.sources.size());
  for (std::size_t s = 0; s < problem_.sources.size(); ++s) {
    const int st = node.starts[s];
    if (st >= 0) {
      starts[s] = st;
    } else if (st == kUndecided) {
      int first = static_cast<int>(periods_);
      for (std::size_t p = 0; p < periods_; ++p) {
        if (r.periods[p].flows.capture[s] > options_.flow_tolerance) {
          first = static_cast<int>(p);
          break;
        }
      }
      starts[s] = first;
    }
  }
  auto sol = evaluate_builds(problem_, builds, starts);
  if (sol && sol->objective < incumbent_) {
    incumbent_ = sol->objective;
    best_ = std::move(sol);
  }
}

std::vector<Node> BranchAndBound::branch(const Node& node, const Relaxation& r) const {
  const double tol = options_.flow_tolerance;
  std::vector<Node> children;

  // Fractional or non-monotone all-or-nothing sources first.
  double best_score = tol;
  std::size_t pick = kNoArc;
  for (std::size_t s = 0; s < problem_.sources.size(); ++s) {
    if (node.starts[s] != kUndecided) continue;
    const double max = problem_.sources[s].max_capture;
    double score = 0.0;
    bool on = false, monotone = true;
    for (std::size_t p = 0; p < periods_; ++p) {
      const double c = r.periods[p].flows.capture[s];
      score += std::min(c, std::max(0.0, max - c));
      const bool now_on = c > max * 0.5;
      if (on && !now_on) monotone = false;
      on = now_on;
    }
    if (!monotone) score += max;
    if (score > best_score) {
      best_score = score;
      pick = s;
    }
  }
  if (pick != kNoArc) {
    for (int start = 0; start <= static_cast<int>(periods_); ++start) {
      Node child = node;
      child.starts[pick] = start;
      children.push_back(std::move(child));
    }
    return children;
  }

  // Edge whose rounding exceeds its relaxed cost the most.
  const double gap_tol = options_.relative_gap * std::max(1.0, std::abs(r.bound));
  double best_gap = gap_tol;
  std::size_t edge = kNoArc;
  for (std::size_t e = 0; e < problem_.edges.size(); ++e) {
    if (static_cast<std::size_t>(node.decided[e]) >= periods_) continue;
    const double gap = round_edge(node, e, r).first - r.edge_cost[e];
    if (gap > best_gap) {
      best_gap = gap;
      edge = e;
    }
  }
  if (edge == kNoArc) {
    // Tight everywhere; split any edge still carrying relaxed flow.
    for (std::size_t e = 0; e < problem_.edges.size() && edge == kNoArc; ++e) {
      if (static_cast<std::size_t>(node.decided[e]) >= periods_) continue;
      for (const auto& pr : r.periods)
        if (pr.extra_flow[e] > tol) edge = e;
    }
  }
  if (edge == kNoArc) return children;

  const auto& de = problem_.edges[edge];
  const std::size_t q = static_cast<std::size_t>(node.decided[edge]);
  int built = static_cast<int>(builds_of(node, edge).size());
  Node none = node;
  none.decided[edge] = static_cast<std::int8_t>(q + 1);
  none.choice[edge * periods_ + q] = -1;
  children.push_back(std::move(none));
  if (built < de.max_new_pipes) {
    for (std::size_t c = 0; c < de.classes.size(); ++c) {
      Node child = node;
      child.decided[edge] = static_cast<std::int8_t>(q + 1);
      child.choice[edge * periods_ + q] = static_cast<std::int8_t>(c);
      children.push_back(std::move(child));
    }
  }
  return children;
}

void BranchAndBound::push_child(Node child) {
  child.seq = seq_++;
  queue_.push(std::move(child));
}

DesignSolution BranchAndBound::run() {
  const bool single = periods_ == 1;
  Node root;
  root.decided.assign(problem_.edges.size(), 0);
  root.choice.assign(problem_.edges.size() * periods_, -1);
  root.starts.assign(problem_.sources.size(), kContinuous);
  for (std::size_t s = 0; s < problem_.sources.size(); ++s) {
    const auto& src = problem_.sources[s];
    if (src.fixed_start) {
      root.starts[s] = *src.fixed_start;
    } else if (src.all_or_nothing) {
      root.starts[s] = kUndecided;
    }
  }

  auto root_relax = relax(root);
  if (!root_relax) {
    for (std::size_t p = 0; p < periods_; ++p) {
      double capture = 0.0, inject = 0.0;
      for (const auto& s : problem_.sources) capture += s.max_capture;
      for (const auto& k : problem_.sinks) inject += k.capacity;
      const double target = problem_.targets[p];
      const int period = single ? -1 : static_cast<int>(p);
      if (capture < target - 1e-9 * std::max(1.0, target))
        throw InfeasibleError("capture", "target exceeds total capturable CO2", period);
      if (inject < target - 1e-9 * std::max(1.0, target))
        throw InfeasibleError("injectivity", "target exceeds total storage injectivity", period);
    }
    throw InfeasibleError("network", "candidate network cannot carry the target to storage",
                          single ? -1 : 0);
  }
  root.bound = root_relax->bound;
  push_child(std::move(root));

  bool exhausted = true;
  double open_bound = kInf;
  while (!queue_.empty()) {
    Node node = queue_.top();
    queue_.pop();
    const double cutoff = incumbent_ - options_.relative_gap * std::abs(incumbent_);
    if (std::isfinite(incumbent_) && node.bound >= cutoff) continue;
    if (explored_ >= options_.node_limit) {
      exhausted = false;
      open_bound = std::min(open_bound, node.bound);
      break;
    }
    ++explored_;
    auto r = relax(node);
    if (!r) continue;
    try_incumbent(node, *r);
    const double cut = incumbent_ - options_.relative_gap * std::abs(incumbent_);
    if (std::isfinite(incumbent_) && r->bound >= cut) continue;
    for (auto& child : branch(node, *r)) {
      auto cr = relax(child);
      if (!cr) continue;
      child.bound = std::max(cr->bound, r->bound);
      const double c2 = incumbent_ - options_.relative_gap * std::abs(incumbent_);
      if (std::isfinite(incumbent_) && child.bound >= c2) continue;
      push_child(std::move(child));
    }
  }
  if (!exhausted) {
    while (!queue_.empty()) {
      open_bound = std::min(open_bound, queue_.top().bound);
      queue_.pop();
    }
  }

  if (!best_) {
    if (!exhausted) throw InfeasibleError("network", "no feasible design found within the node limit", single ? -1 : 0);
    throw InfeasibleError("capture", "no all-or-nothing selection of sources meets the target", single ? -1 : 0);
  }
  DesignSolution out = std::move(*best_);
  out.nodes_explored = explored_;
  out.proven_optimal = exhausted;
  out.best_bound = exhausted ? out.objective : std::min(open_bound, out.objective);
  return out;
}

}  // namespace

void DesignProblem::validate() const {
  if (targets.empty()) throw DomainError("design problem needs at least one period");
  const std::size_t P = periods();
  for (double t : targets)
    if (!(t >= 0.0)) throw DomainError("targets must be >= 0");
  for (const auto& e : edges) {
    if (e.u >= node_count || e.v >= node_count || e.u == e.v) throw DomainError("edge endpoints invalid");
    if (e.classes.empty() && e.max_new_pipes > 0) throw DomainError("edge has no pipe classes");
    if (e.max_new_pipes < 0) throw DomainError("max_new_pipes must be >= 0");
    if (static_cast<std::size_t>(e.max_new_pipes) > P && P > 1)
      throw DomainError("max_new_pipes exceeds the number of periods (one build per period)");
    for (const auto& c : e.classes) {
      if (!(c.capacity > 0.0)) throw DomainError("pipe class capacity must be positive");
      if (c.cost_by_period.size() != P) throw DomainError("pipe class cost needs one entry per period");
      for (double v : c.cost_by_period)
        if (!(v >= 0.0)) throw DomainError("pipe class cost must be >= 0");
    }
    for (double x : e.existing)
      if (!(x > 0.0)) throw DomainError("existing pipe capacity must be positive");
  }
  for (const auto& s : sources) {
    if (s.node >= node_count) throw DomainError("source node invalid");
    if (!(s.max_capture >= 0.0)) throw DomainError("max_capture must be >= 0");
    if (s.unit_cost_by_period.size() != P) throw DomainError("source cost needs one entry per period");
    if (s.fixed_start && (*s.fixed_start < 0 || *s.fixed_start > static_cast<int>(P)))
      throw DomainError("source fixed_start out of range");
  }
  for (const auto& k : sinks) {
    if (k.node >= node_count) throw DomainError("sink node invalid");
    if (!(k.capacity >= 0.0)) throw DomainError("sink capacity must be >= 0");
    if (k.unit_cost_by_period.size() != P) throw DomainError("sink cost needs one entry per period");
  }
}

double edge_capacity(const DesignEdge& edge, const std::vector<Build>& builds, std::size_t period) {
  double cap = existing_capacity(edge);
  for (const auto& b : builds)
    if (static_cast<std::size_t>(b.period) <= period) cap += edge.classes.at(static_cast<std::size_t>(b.pipe_class)).capacity;
  return cap;
}

std::optional<DesignSolution> evaluate_builds(const DesignProblem& problem,
                                              const std::vector<std::vector<Build>>& builds,
                                              const std::vector<std::optional<int>>& source_starts) {
  problem.validate();
  const std::size_t P = problem.periods();
  if (builds.size() != problem.edges.size()) throw DomainError("builds must list every edge");
  if (!source_starts.empty() && source_starts.size() != problem.sources.size())
    throw DomainError("source_starts must list every source");
  DesignSolution sol;
  sol.builds = builds;
  for (std::size_t e = 0; e < builds.size(); ++e) {
    const auto& edge = problem.edges[e];
    if (builds[e].size() > static_cast<std::size_t>(edge.max_new_pipes)) throw DomainError("too many pipes on an edge");
    for (std::size_t i = 0; i < builds[e].size(); ++i) {
      const auto& b = builds[e][i];
      if (b.period < 0 || static_cast<std::size_t>(b.period) >= P) throw DomainError("build period out of range");
      if (b.pipe_class < 0 || static_cast<std::size_t>(b.pipe_class) >= edge.classes.size())
        throw DomainError("build class out of range");
      if (i > 0 && builds[e][i - 1].period >= b.period) throw DomainError("builds must be one per period, in order");
      sol.build_cost += edge.classes[static_cast<std::size_t>(b.pipe_class)].cost_by_period[static_cast<std::size_t>(b.period)];
    }
  }
  std::vector<int> starts(problem.sources.size(), kContinuous);
  for (std::size_t s = 0; s < problem.sources.size(); ++s) {
    if (!source_starts.empty() && source_starts[s]) starts[s] = *source_starts[s];
    else if (problem.sources[s].fixed_start) starts[s] = *problem.sources[s].fixed_start;
  }
  sol.objective = sol.build_cost;
  for (std::size_t p = 0; p < P; ++p) {
    std::vector<EdgeArcs> arcs(problem.edges.size());
    for (std::size_t e = 0; e < problem.edges.size(); ++e) arcs[e].base_cap = edge_capacity(problem.edges[e], builds[e], p);
    auto res = solve_period(problem, p, arcs, modes_for(problem, p, starts));
    if (!res) return std::nullopt;
    sol.objective += res->flows.flow_cost;
    sol.periods.push_back(std::move(res->flows));
  }
  sol.best_bound = sol.objective;
  sol.proven_optimal = true;
  return sol;
}

DesignSolution solve_design(const DesignProblem& problem, const SolverOptions& options) {
  problem.validate();
  return BranchAndBound(problem, options).run();
}

MinCostFlow::MinCostFlow(std::size_t nodes) : graph_(nodes) {}

std::size_t MinCostFlow::add_arc(std::size_t from, std::size_t to, double capacity, double cost) {
  if (from >= graph_.size() || to >= graph_.size()) throw DomainError("arc endpoint out of range");
  if (!(capacity >= 0.0)) throw DomainError("arc capacity must be >= 0");
  graph_[from].push_back({to, graph_[to].size() + (from == to ? 1 : 0), capacity, cost, false});
  graph_[to].push_back({from, graph_[from].size() - 1, 0.0, -cost, false});
  arcs_.emplace_back(from, graph_[from].size() - 1);
  initial_cap_.push_back(capacity);
  return arcs_.size() - 1;
}

void MinCostFlow::freeze(std::size_t arc) {
  const auto [from, idx] = arcs_.at(arc);
  const Arc& a = graph_[from][idx];
  graph_[a.to][a.rev].frozen = true;
}

double MinCostFlow::flow(std::size_t arc) const {
  const auto [from, idx] = arcs_.at(arc);
  return initial_cap_[arc] - graph_[from][idx].cap;
}

double MinCostFlow::cost() const {
  double c = 0.0;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const auto [from, idx] = arcs_[i];
    c += flow(i) * graph_[from][idx].cost;
  }
  return c;
}

double MinCostFlow::push(std::size_t s, std::size_t t, double amount, double tolerance) {
  const std::size_t n = graph_.size();
  double sent = 0.0;
  std::vector<double> dist(n);
  std::vector<std::size_t> prev_node(n), prev_arc(n), relax_count(n);
  std::vector<char> in_queue(n);
  while (amount - sent > tolerance) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev_node.begin(), prev_node.end(), kNoArc);
    std::fill(in_queue.begin(), in_queue.end(), 0);
    std::fill(relax_count.begin(), relax_count.end(), 0);
    std::deque<std::size_t> queue{s};
    dist[s] = 0.0;
    in_queue[s] = 1;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      in_queue[u] = 0;
      for (std::size_t i = 0; i < graph_[u].size(); ++i) {
        const Arc& a = graph_[u][i];
        if (a.cap <= tolerance || a.frozen) continue;
        const double nd = dist[u] + a.cost;
        if (nd < dist[a.to] - 1e-12 * (1.0 + std::abs(nd))) {
          dist[a.to] = nd;
          prev_node[a.to] = u;
          prev_arc[a.to] = i;
          if (!in_queue[a.to] && ++relax_count[a.to] <= n) {
            in_queue[a.to] = 1;
            queue.push_back(a.to);
          }
        }
      }
    }
    if (!std::isfinite(dist[t])) break;
    double bottleneck = amount - sent;
    for (std::size_t v = t; v != s; v = prev_node[v]) bottleneck = std::min(bottleneck, graph_[prev_node[v]][prev_arc[v]].cap);
    if (bottleneck <= tolerance) break;
    for (std::size_t v = t; v != s; v = prev_node[v]) {
      Arc& a = graph_[prev_node[v]][prev_arc[v]];
      a.cap -= bottleneck;
      graph_[a.to][a.rev].cap += bottleneck;
    }
    sent += bottleneck;
  }
  return sent;
}

}  // namespace cctskit::solver
