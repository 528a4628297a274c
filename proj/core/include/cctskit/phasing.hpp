#pragma once

#include <map>
#include <string>
#include <vector>

#include "cctskit/netdesign.hpp"

namespace cctskit::phasing {

struct Period {
  int online_year = 0;
  double target = 0.0;  // Mt/y stored
};

struct PhaseSchedule {
  std::vector<Period> periods{{2030, 5.0}, {2035, 31.0}, {2040, 62.0}, {2045, 72.0}, {2050, 73.0}};
  int construction_lead = 4;    // years
  int operating_life = 30;      // years
  double discount_rate = 0.106;
  int max_parallel_pipes = 2;   // pipes per candidate edge, original included

  /// First year of capital disbursement; all present values are taken here.
  int base_year() const;
  /// Last operating year of the evaluation horizon (first online year + life - 1).
  int horizon_end() const;
  void validate() const;
};

struct CreditPolicy {
  double bonus_rate = 85.0;  // $/t
  double base_rate = 17.0;   // $/t
  int credit_years = 12;
  int bonus_construction_deadline = 2033;  // construction must start before this year

  double rate_for(int construction_start_year) const;
  void validate(int operating_life) const;
};

struct LevelizedCost {
  double pre_credit = 0.0;   // $/t
  double post_credit = 0.0;  // $/t
  double credit_rate = 0.0;  // $/t applied
};

/// pre = PV(capital + annual costs over the operating life) / PV(tonnes);
/// post = pre - rate x A(credit_years) / A(operating_life).
LevelizedCost levelized_phase_cost(double capital, double annual_costs, double annual_tonnes,
                                   const PhaseSchedule& schedule, const CreditPolicy& policy,
                                   int construction_start_year);

struct EdgeBuild {
  std::size_t edge = 0;
  int pipe_class = 0;
  double capital = 0.0;  // pipe + pumps, $
};

struct PhaseRecord {
  int online_year = 0;
  int construction_start = 0;
  double target = 0.0;
  std::vector<EdgeBuild> new_edges;
  std::vector<double> edge_flow;      // signed, per candidate edge
  std::vector<double> capture;        // per source
  std::vector<double> injection;      // per sink
  std::vector<std::string> new_sources;  // sources capturing for the first time
  std::vector<std::string> new_sinks;
  double new_tonnes = 0.0;            // Mt/y coming online this period
  double capture_capital = 0.0;       // $ for capacity coming online
  double transport_capital = 0.0;
  double storage_capital = 0.0;
  LevelizedCost levelized;            // for the capacity coming online (NaN when none)
};

struct PhasePlan {
  std::vector<PhaseRecord> phases;
  std::map<int, double> capital_by_year;  // $ disbursed per calendar year
  double discounted_cost = 0.0;           // objective, $ at base_year
  bool proven_optimal = false;
  std::size_t nodes_explored = 0;
};

/// Discounted objective weights used by the phased model.
struct PhaseWeights {
  std::vector<double> operating_pv;  // PV at base year of 1 $/y across each period's operating years
  std::vector<double> build_pv;      // PV factor of capital disbursed for a build online in period p
  std::vector<double> om_pv;         // PV of 1 $/y O&M from period p to the horizon end
};

PhaseWeights phase_weights(const PhaseSchedule& schedule);

solver::DesignProblem to_phased_design(const netdesign::NetworkProblem& problem, const PhaseSchedule& schedule);

/// Perfect-foresight plan minimizing discounted cost subject to every
/// period's target. Throws InfeasibleError naming the period.
PhasePlan solve_phased(const netdesign::NetworkProblem& problem, const PhaseSchedule& schedule,
                       const CreditPolicy& policy = {}, const solver::SolverOptions& options = {});

/// Period-by-period plan that only sees the current target and keeps earlier builds.
PhasePlan solve_myopic(const netdesign::NetworkProblem& problem, const PhaseSchedule& schedule,
                       const CreditPolicy& policy = {}, const solver::SolverOptions& options = {});

/// Builds the plan report from solver output (shared by both planners).
PhasePlan make_plan(const netdesign::NetworkProblem& problem, const PhaseSchedule& schedule,
                    const CreditPolicy& policy, const solver::DesignSolution& solution);

/// period,online_year,construction_start,target_mt_y,new_tonnes_mt_y,capture_capital_usd,...
void write_phase_csv(const std::string& path, const PhasePlan& plan);
void write_capital_by_year_csv(const std::string& path, const PhasePlan& plan);
void write_phase_geojson(const std::string& path, const netdesign::NetworkProblem& problem, const PhasePlan& plan,
                         std::size_t phase);

}  // namespace cctskit::phasing
