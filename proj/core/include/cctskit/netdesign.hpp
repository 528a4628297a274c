#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cctskit/capture.hpp"
#include "cctskit/design_solver.hpp"
#include "cctskit/reservoir.hpp"
#include "cctskit/routing.hpp"

namespace cctskit::netdesign {

struct CapacityClass {
  double max_flow = 0.0;       // Mt/y
  double capital_per_km = 0.0; // $/km of cost-weighted length
  double om_per_km_y = 0.0;    // $/km/y of physical length
};

/// Classes <1, 1-3, 3-6, 6-9, >9 Mt/y with the top class capped at q_max.
/// Capital/km grows sub-linearly with capacity (calibration defaults).
std::vector<CapacityClass> default_capacity_classes(double q_max = 25.0);

/// Throws ConfigError unless capacities increase, capital increases, and
/// capital per unit capacity decreases.
void validate_classes(const std::vector<CapacityClass>& classes);

/// Index of the smallest class carrying `flow`; -1 when none is large enough.
int smallest_class_for(const std::vector<CapacityClass>& classes, double flow);

struct Economics {
  std::vector<CapacityClass> classes = default_capacity_classes();
  double project_years = 30.0;
  double fixed_charge_rate = 0.106;
  double pump_spacing_km = 80.0;
  double pump_station_capital = 8.0e6;    // $ per station, calibration default
  double pump_station_om_y = 0.3e6;       // $/y per station
  double min_pressure_barg = 86.0;        // metadata only
  double max_pressure_barg = 150.0;       // metadata only
  bool all_or_nothing_capture = false;
  capture::CaptureCostParams capture_params;

  void validate() const;
};

/// max(0, ceil(length / spacing) - 1): stations along the line, termini excluded.
long pump_stations(double length_km, double spacing_km = 80.0);

struct EdgeCost {
  double capital = 0.0;      // pipe capital, $
  double pump_capital = 0.0; // $
  double annual_om = 0.0;    // pipe + pump O&M, $/y
  double annualized = 0.0;   // fixed_charge_rate x capital + O&M, $/y
  long pumps = 0;
};

EdgeCost edge_cost(const routing::CandidateEdge& edge, const CapacityClass& cls, const Economics& econ);
/// Cost of one pipeline of `length_km` physical and `weighted_km` cost-weighted length.
EdgeCost pipeline_cost(double length_km, double weighted_km, const CapacityClass& cls, const Economics& econ);

struct SourceInput {
  std::string id;
  std::size_t node = 0;
  double max_capture = 0.0;   // Mt/y
  double capture_cost = 0.0;  // $/t
  double concentration = 0.1;
  double x = 0.0;
  double y = 0.0;
};

struct SinkInput {
  std::string id;
  std::size_t node = 0;
  double injectivity = 0.0;   // Mt/y
  double storage_cost = 0.0;  // $/t
  double capital = 0.0;       // $
};

struct NetworkProblem {
  routing::CandidateNetwork candidate;
  std::vector<SourceInput> sources;
  std::vector<SinkInput> sinks;
  double target = 0.0;  // Mt/y
  Economics economics;

  double total_capture() const;
  double total_injectivity() const;
  void validate() const;
};

/// Attaches facility capture results and storage sites to their network nodes.
/// Facilities capturing nothing are left out.
NetworkProblem make_problem(routing::CandidateNetwork candidate, const std::vector<capture::FacilityRecord>& facilities,
                            const std::vector<capture::FacilityCapture>& captures,
                            const std::vector<reservoir::StorageSite>& sites, double target, Economics econ);

struct EdgeFlow {
  int pipe_class = -1;  // -1: not built (dedicated designs: class of the widest pipe)
  double flow = 0.0;    // signed, positive from candidate `from` to `to`
  int pipes = 0;        // pipelines laid on this edge
  double length = 0.0;  // km of pipe laid (length x pipes)
};

/// One dedicated pipeline (shared designs have none).
struct Pipeline {
  std::string source;
  std::string sink;
  std::vector<std::size_t> edges;  // candidate edge ids from source to sink
  int pipe_class = 0;
  int parallel = 1;
  double flow = 0.0;
  double length = 0.0;           // km
  double weighted_length = 0.0;  // km
  EdgeCost cost;
};

struct CostReport {
  double captured = 0.0;  // Mt/y
  double injected = 0.0;  // Mt/y
  double capture_annual = 0.0;    // $/y
  double transport_annual = 0.0;  // $/y
  double storage_annual = 0.0;    // $/y
  double objective = 0.0;         // $/y, sum of the three
  double capture_levelized = 0.0;   // $/t of injected CO2
  double transport_levelized = 0.0;
  double storage_levelized = 0.0;
  double total_levelized = 0.0;
  double pipeline_km = 0.0;
  double pipeline_capital = 0.0;  // incl. pump stations
  double capture_capital = 0.0;
  double storage_capital = 0.0;
  long pump_stations = 0;
  long storage_sites = 0;
  double tonne_km_delivered = 0.0;  // Mt/y x km
  double tonne_km_nameplate = 0.0;
  std::map<std::string, double> sej_km;
};

struct NetworkSolution {
  std::string design;  // "shared" or "dedicated"
  std::vector<double> capture;    // per source, Mt/y
  std::vector<EdgeFlow> edges;    // per candidate edge
  std::vector<double> injection;  // per sink, Mt/y
  std::vector<Pipeline> pipelines;
  std::vector<std::string> unplaced;  // dedicated: sources left without a sink
  CostReport report;
  bool proven_optimal = false;
  double best_bound = 0.0;
  std::size_t nodes_explored = 0;
};

/// Recomputes the cost report from the decision variables.
CostReport cost_report(const NetworkProblem& problem, const NetworkSolution& solution);

/// Independent feasibility checker; returns one message per violated
/// constraint (empty when feasible).
std::vector<std::string> check_solution(const NetworkProblem& problem, const NetworkSolution& solution,
                                        double tolerance = 1e-7);

/// Translates the single-period problem for the generic solver.
solver::DesignProblem to_design_problem(const NetworkProblem& problem);

NetworkSolution solve_shared(const NetworkProblem& problem, const solver::SolverOptions& options = {});

struct DedicatedStep {
  std::size_t order = 0;
  std::string source;
  std::string sink;  // empty when unplaced
  double flow = 0.0;
  double distance_from_largest = 0.0;  // m, straight line
  double transport_storage_cost = 0.0; // $/t
};

struct DedicatedResult {
  NetworkSolution solution;
  std::vector<DedicatedStep> trace;
};

/// Sequential one-pipeline-per-source matching: the largest source first, then
/// by increasing straight-line distance from it; each takes the sink with the
/// cheapest transport + storage cost among those with injectivity left.
DedicatedResult solve_dedicated(const NetworkProblem& problem);

struct ComparisonRow {
  std::string metric;
  double shared = 0.0;
  double dedicated = 0.0;
  double delta = 0.0;  // shared - dedicated
};

/// Table-4 style metrics. Throws DomainError when the solutions do not come
/// from the same problem, or when a complete dedicated design is cheaper.
std::vector<ComparisonRow> compare_designs(const NetworkProblem& problem, const NetworkSolution& shared,
                                           const NetworkSolution& dedicated);

struct Hub {
  std::size_t index = 0;
  std::vector<std::string> sources;
  std::vector<std::string> sinks;
  double captured = 0.0;     // Mt/y
  double pipeline_km = 0.0;
  double transport_cost_per_tkm = 0.0;  // $ per 10^3 t-km delivered
  double transport_cost_per_tkm_nameplate = 0.0;
  double storage_cost = 0.0;  // $/t, injection-weighted
  bool natural_hub = false;   // >= 2 capture facilities sharing infrastructure
};

/// Connected components of the built network, by increasing captured tonnes.
std::vector<Hub> hub_report(const NetworkProblem& problem, const NetworkSolution& solution);

/// Flow-class rows (<1, 1-3, 3-6, 6-9, >9 Mt/y) plus "Total": km and km in SEJ cells.
struct FlowClassRow {
  std::string label;
  double km = 0.0;
  double sej_km = 0.0;
};

std::vector<FlowClassRow> sej_flow_class_table(const NetworkProblem& problem, const NetworkSolution& solution,
                                               const std::string& sej_layer);

void write_solution_json(const std::string& path, const NetworkProblem& problem, const NetworkSolution& solution);
NetworkSolution read_solution_json(const std::string& path);
void write_solution_geojson(const std::string& path, const NetworkProblem& problem, const NetworkSolution& solution);
void write_problem_json(const std::string& path, const NetworkProblem& problem);

}  // namespace cctskit::netdesign
