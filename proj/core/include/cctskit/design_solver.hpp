#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

// Exact branch-and-bound for multi-period fixed-charge network design.
//
// Each period's flows form a min-cost flow from a super source (capture) to a
// super sink (storage) over undirected edges. An edge carries pipes; each pipe
// has a capacity class whose cost depends on the period it is built in. The
// relaxation of an undecided edge charges (rho_p - rho_{p+1}) per unit of flow
// above its committed capacity in period p, where rho_p is the cheapest
// cost-per-capacity of any pipe that could be built at or before p. That bound
// is exact for flows that never shrink and a valid underestimate otherwise, so
// every relaxation is a set of independent min-cost flows.

namespace cctskit::solver {

struct PipeClass {
  double capacity = 0.0;              // Mt/y
  std::vector<double> cost_by_period;  // objective cost of building in period p
};

struct DesignEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::vector<PipeClass> classes;
  std::vector<double> existing;  // capacities of pipes already in service
  int max_new_pipes = 1;  // at most one build per period
};

struct DesignSource {
  std::size_t node = 0;
  double max_capture = 0.0;                // Mt/y
  std::vector<double> unit_cost_by_period;  // objective cost per Mt/y in period p
  bool all_or_nothing = false;
  /// For all-or-nothing sources already committed: first period captured.
  std::optional<int> fixed_start;
};

struct DesignSink {
  std::size_t node = 0;
  double capacity = 0.0;                   // Mt/y
  std::vector<double> unit_cost_by_period;
};

struct DesignProblem {
  std::size_t node_count = 0;
  std::vector<DesignEdge> edges;
  std::vector<DesignSource> sources;
  std::vector<DesignSink> sinks;
  std::vector<double> targets;  // Mt/y per period; injection must reach each

  std::size_t periods() const noexcept { return targets.size(); }
  void validate() const;
};

struct SolverOptions {
  std::size_t node_limit = 2'000'000;
  double relative_gap = 1e-9;
  double flow_tolerance = 1e-9;
};

struct Build {
  int period = 0;
  int pipe_class = 0;

  friend bool operator==(const Build&, const Build&) = default;
};

struct PeriodFlows {
  std::vector<double> edge_flow;  // signed, positive from u to v
  std::vector<double> capture;    // per source
  std::vector<double> injection;  // per sink
  double flow_cost = 0.0;         // capture + storage part of the objective
};

struct DesignSolution {
  std::vector<std::vector<Build>> builds;  // per edge, in period order
  std::vector<PeriodFlows> periods;
  double objective = 0.0;
  double build_cost = 0.0;
  double best_bound = 0.0;
  bool proven_optimal = false;
  std::size_t nodes_explored = 0;
};

/// Throws InfeasibleError (binding "capture", "injectivity" or "network", with
/// the offending period) when some period cannot meet its target.
DesignSolution solve_design(const DesignProblem& problem, const SolverOptions& options = {});

/// Optimal flows for fixed builds (no branching). nullopt when infeasible.
/// `source_starts[s]` fixes an all-or-nothing source's first captured period
/// (periods() = never); empty means every source is continuous.
std::optional<DesignSolution> evaluate_builds(const DesignProblem& problem,
                                              const std::vector<std::vector<Build>>& builds,
                                              const std::vector<std::optional<int>>& source_starts = {});

/// Capacity installed on an edge in period p under the given builds.
double edge_capacity(const DesignEdge& edge, const std::vector<Build>& builds, std::size_t period);

/// Min-cost flow with real capacities (successive shortest paths).
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t nodes);

  /// Returns the arc index.
  std::size_t add_arc(std::size_t from, std::size_t to, double capacity, double cost);
  /// Pushes up to `amount` from s to t along successive cheapest paths.
  /// Returns the amount sent.
  double push(std::size_t s, std::size_t t, double amount, double tolerance = 1e-12);
  /// Forbids later augmentations from cancelling flow already on `arc`.
  void freeze(std::size_t arc);

  double flow(std::size_t arc) const;
  double cost() const;

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;
    double cap;
    double cost;
    bool frozen;
  };
  std::vector<std::vector<Arc>> graph_;
  std::vector<std::pair<std::size_t, std::size_t>> arcs_;
  std::vector<double> initial_cap_;
};

}  // namespace cctskit::solver
