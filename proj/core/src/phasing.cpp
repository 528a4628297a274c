#include "cctskit/phasing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "cctskit/csv.hpp"
#include "cctskit/error.hpp"
#include "cctskit/finance.hpp"

namespace cctskit::phasing {

using nlohmann::json;

namespace {

constexpr double kFlowTol = 1e-9;

// PV at the schedule's base year of 1 $ paid in calendar year y.
double discount_to_base(const PhaseSchedule& s, int year) {
  return finance::discount_factor(s.discount_rate, static_cast<double>(year - s.base_year()));
}

int period_end_year(const PhaseSchedule& s, std::size_t p) {
  return p + 1 < s.periods.size() ? s.periods[p + 1].online_year - 1 : s.horizon_end();
}

double sum(const std::vector<double>& v) {
  double t = 0.0;
  for (double x : v) t += x;
  return t;
}

}  // namespace

int PhaseSchedule::base_year() const { return periods.front().online_year - construction_lead; }

int PhaseSchedule::horizon_end() const { return periods.front().online_year + operating_life - 1; }

void PhaseSchedule::validate() const {
  if (periods.empty()) throw ConfigError("phase schedule needs at least one period");
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (!(periods[i].target >= 0.0)) throw ConfigError("phase targets must be >= 0");
    if (i == 0) continue;
    if (periods[i].online_year <= periods[i - 1].online_year) throw ConfigError("phase online years must increase");
    if (periods[i].target < periods[i - 1].target) throw ConfigError("phase targets must be nondecreasing");
  }
  if (construction_lead < 1) throw ConfigError("construction_lead must be >= 1");
  if (operating_life < 1) throw ConfigError("operating_life must be >= 1");
  if (periods.back().online_year > horizon_end()) throw ConfigError("last phase comes online after the horizon ends");
  if (!(discount_rate >= 0.0)) throw ConfigError("discount_rate must be >= 0");
  if (max_parallel_pipes < 1) throw ConfigError("max_parallel_pipes must be >= 1");
}

double CreditPolicy::rate_for(int construction_start_year) const {
  return construction_start_year < bonus_construction_deadline ? bonus_rate : base_rate;
}

void CreditPolicy::validate(int operating_life) const {
  if (!(bonus_rate >= 0.0 && base_rate >= 0.0)) throw ConfigError("credit rates must be >= 0");
  if (credit_years < 0 || credit_years > operating_life) throw ConfigError("credit_years must lie in [0, operating_life]");
}

LevelizedCost levelized_phase_cost(double capital, double annual_costs, double annual_tonnes,
                                   const PhaseSchedule& schedule, const CreditPolicy& policy,
                                   int construction_start_year) {
  if (!(annual_tonnes > 0.0)) throw DomainError("levelized cost needs positive annual tonnes");
  policy.validate(schedule.operating_life);
  const double life = finance::annuity_factor(schedule.discount_rate, schedule.operating_life);
  const double credit = finance::annuity_factor(schedule.discount_rate, policy.credit_years);
  LevelizedCost out;
  out.pre_credit = (capital + annual_costs * life) / (annual_tonnes * life);
  out.credit_rate = policy.rate_for(construction_start_year);
  out.post_credit = out.pre_credit - out.credit_rate * credit / life;
  return out;
}

PhaseWeights phase_weights(const PhaseSchedule& schedule) {
  schedule.validate();
  PhaseWeights w;
  const int end = schedule.horizon_end();
  for (std::size_t p = 0; p < schedule.periods.size(); ++p) {
    const int online = schedule.periods[p].online_year;
    double op = 0.0, om = 0.0, build = 0.0;
    for (int y = online; y <= period_end_year(schedule, p); ++y) op += discount_to_base(schedule, y);
    for (int y = online; y <= end; ++y) om += discount_to_base(schedule, y);
    for (int y = online - schedule.construction_lead; y < online; ++y) build += discount_to_base(schedule, y);
    w.operating_pv.push_back(op);
    w.om_pv.push_back(om);
    w.build_pv.push_back(build / schedule.construction_lead);
  }
  return w;
}

namespace {

std::vector<double> edge_class_costs(const netdesign::NetworkProblem& problem, const routing::CandidateEdge& edge,
                                     const netdesign::CapacityClass& cls, const PhaseWeights& w) {
  const auto c = netdesign::edge_cost(edge, cls, problem.economics);
  std::vector<double> out;
  for (std::size_t p = 0; p < w.build_pv.size(); ++p)
    out.push_back((c.capital + c.pump_capital) * w.build_pv[p] + c.annual_om * w.om_pv[p]);
  return out;
}

}  // namespace

solver::DesignProblem to_phased_design(const netdesign::NetworkProblem& problem, const PhaseSchedule& schedule) {
  const auto w = phase_weights(schedule);
  solver::DesignProblem d;
  d.node_count = problem.candidate.nodes.size();
  for (const auto& p : schedule.periods) d.targets.push_back(p.target);
  for (const auto& edge : problem.candidate.edges) {
    solver::DesignEdge de;
    de.u = edge.from;
    de.v = edge.to;
    de.max_new_pipes = std::min<int>(schedule.max_parallel_pipes, static_cast<int>(schedule.periods.size()));
    for (const auto& cls : problem.economics.classes) de.classes.push_back({cls.max_flow, edge_class_costs(problem, edge, cls, w)});
    d.edges.push_back(std::move(de));
  }
  for (const auto& s : problem.sources) {
    solver::DesignSource ds{s.node, s.max_capture, {}, problem.economics.all_or_nothing_capture, {}};
    for (double pv : w.operating_pv) ds.unit_cost_by_period.push_back(s.capture_cost * 1e6 * pv);
    d.sources.push_back(std::move(ds));
  }
  for (const auto& k : problem.sinks) {
    solver::DesignSink dk{k.node, k.injectivity, {}};
    for (double pv : w.operating_pv) dk.unit_cost_by_period.push_back(k.storage_cost * 1e6 * pv);
    d.sinks.push_back(std::move(dk));
  }
  return d;
}

PhasePlan solve_phased(const netdesign::NetworkProblem& problem, const PhaseSchedule& schedule,
                       const CreditPolicy& policy, const solver::SolverOptions& options) {
  problem.validate();
  schedule.validate();
  policy.validate(schedule.operating_life);
  const auto design = to_phased_design(problem, schedule);
  return make_plan(problem, schedule, policy, solver::solve_design(design, options));
}

PhasePlan solve_myopic(const netdesign::NetworkProblem& problem, const PhaseSchedule& schedule,
                       const CreditPolicy& policy, const solver::SolverOptions& options) {
  problem.validate();
  schedule.validate();
  policy.validate(schedule.operating_life);
  const auto full = to_phased_design(problem, schedule);
  const std::size_t P = schedule.periods.size();
  std::vector<std::vector<solver::Build>> builds(full.edges.size());
  std::vector<std::optional<int>> starts(full.sources.size());
  std::size_t explored = 0;
  bool proven = true;

  for (std::size_t p = 0; p < P; ++p) {
    solver::DesignProblem step;
    step.node_count = full.node_count;
    step.targets = {full.targets[p]};
    for (std::size_t e = 0; e < full.edges.size(); ++e) {
      const auto& fe = full.edges[e];
      solver::DesignEdge de{fe.u, fe.v, {}, {}, 0};
      for (const auto& b : builds[e]) de.existing.push_back(fe.classes[static_cast<std::size_t>(b.pipe_class)].capacity);
      de.max_new_pipes = static_cast<int>(de.existing.size()) < fe.max_new_pipes ? 1 : 0;
      for (const auto& c : fe.classes) de.classes.push_back({c.capacity, {c.cost_by_period[p]}});
      step.edges.push_back(std::move(de));
    }
    for (std::size_t s = 0; s < full.sources.size(); ++s) {
      const auto& fs = full.sources[s];
      solver::DesignSource ds{fs.node, fs.max_capture, {fs.unit_cost_by_period[p]}, fs.all_or_nothing, {}};
      if (starts[s] && *starts[s] < static_cast<int>(p)) ds.fixed_start = 0;
      step.sources.push_back(std::move(ds));
    }
    for (const auto& fk : full.sinks) step.sinks.push_back({fk.node, fk.capacity, {fk.unit_cost_by_period[p]}});

    solver::DesignSolution sol;
    try {
      sol = solver::solve_design(step, options);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError(e.binding(), e.what(), static_cast<int>(p));
    }
    explored += sol.nodes_explored;
    proven = proven && sol.proven_optimal;
    for (std::size_t e = 0; e < builds.size(); ++e)
      for (const auto& b : sol.builds[e]) builds[e].push_back({static_cast<int>(p), b.pipe_class});
    for (std::size_t s = 0; s < full.sources.size(); ++s) {
      if (!full.sources[s].all_or_nothing) continue;
      if (!starts[s] && sol.periods.front().capture[s] > kFlowTol) starts[s] = static_cast<int>(p);
    }
  }
  if (problem.economics.all_or_nothing_capture)
    for (auto& s : starts)
      if (!s) s = static_cast<int>(P);
  auto evaluated = solver::evaluate_builds(full, builds, problem.economics.all_or_nothing_capture
                                                              ? starts
                                                              : std::vector<std::optional<int>>{});
  if (!evaluated) throw InfeasibleError("network", "myopic builds cannot carry the later targets");
  evaluated->nodes_explored = explored;
  evaluated->proven_optimal = false;
  auto plan = make_plan(problem, schedule, policy, *evaluated);
  plan.proven_optimal = false;
  (void)proven;
  return plan;
}

PhasePlan make_plan(const netdesign::NetworkProblem& problem, const PhaseSchedule& schedule,
                    const CreditPolicy& policy, const solver::DesignSolution& solution) {
  const auto& econ = problem.economics;
  const std::size_t P = schedule.periods.size();
  PhasePlan plan;
  plan.discounted_cost = solution.objective;
  plan.proven_optimal = solution.proven_optimal;
  plan.nodes_explored = solution.nodes_explored;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t p = 0; p < P; ++p) {
    const auto& flows = solution.periods.at(p);
    PhaseRecord rec;
    rec.online_year = schedule.periods[p].online_year;
    rec.construction_start = rec.online_year - schedule.construction_lead;
    rec.target = schedule.periods[p].target;
    rec.edge_flow = flows.edge_flow;
    rec.capture = flows.capture;
    rec.injection = flows.injection;

    double new_om = 0.0;
    for (std::size_t e = 0; e < solution.builds.size(); ++e) {
      for (const auto& b : solution.builds[e]) {
        if (b.period != static_cast<int>(p)) continue;
        const auto c = netdesign::edge_cost(problem.candidate.edges[e], econ.classes.at(static_cast<std::size_t>(b.pipe_class)), econ);
        rec.new_edges.push_back({e, b.pipe_class, c.capital + c.pump_capital});
        rec.transport_capital += c.capital + c.pump_capital;
        new_om += c.annual_om;
      }
    }
    double annual = new_om;
    for (std::size_t s = 0; s < problem.sources.size(); ++s) {
      const double before = p == 0 ? 0.0 : solution.periods[p - 1].capture[s];
      const double delta = flows.capture[s] - before;
      const auto& src = problem.sources[s];
      if (flows.capture[s] > kFlowTol && before <= kFlowTol) rec.new_sources.push_back(src.id);
      if (delta > kFlowTol) {
        annual += delta * src.capture_cost * 1e6;
        if (src.max_capture > 0.0)
          rec.capture_capital += capture::capture_capital(src.max_capture, src.concentration, econ.capture_params) *
                                 delta / src.max_capture;
      }
    }
    for (std::size_t k = 0; k < problem.sinks.size(); ++k) {
      const double before = p == 0 ? 0.0 : solution.periods[p - 1].injection[k];
      const double delta = flows.injection[k] - before;
      if (flows.injection[k] > kFlowTol && before <= kFlowTol) {
        rec.new_sinks.push_back(problem.sinks[k].id);
        rec.storage_capital += problem.sinks[k].capital;
      }
      if (delta > kFlowTol) {
        annual += delta * problem.sinks[k].storage_cost * 1e6;
        rec.new_tonnes += delta;
      }
    }
    if (rec.new_tonnes > kFlowTol) {
      rec.levelized = levelized_phase_cost(rec.transport_capital, annual, rec.new_tonnes * 1e6, schedule, policy,
                                           rec.construction_start);
    } else {
      rec.levelized = {nan, nan, policy.rate_for(rec.construction_start)};
    }
    const double cohort_capital = rec.capture_capital + rec.transport_capital + rec.storage_capital;
    for (int y = rec.construction_start; y < rec.online_year; ++y)
      plan.capital_by_year[y] += cohort_capital / schedule.construction_lead;
    plan.phases.push_back(std::move(rec));
  }
  return plan;
}

void write_phase_csv(const std::string& path, const PhasePlan& plan) {
  csv::Writer w(path, {"period", "online_year", "construction_start", "target_mt_y", "injected_mt_y",
                       "new_tonnes_mt_y", "new_edges", "new_sources", "new_sinks", "capture_capital_usd",
                       "transport_capital_usd", "storage_capital_usd", "pre_credit_usd_t", "credit_usd_t",
                       "post_credit_usd_t"});
  for (std::size_t p = 0; p < plan.phases.size(); ++p) {
    const auto& r = plan.phases[p];
    w.add(p + 1).add(r.online_year).add(r.construction_start).add(r.target).add(sum(r.injection));
    w.add(r.new_tonnes).add(r.new_edges.size()).add(r.new_sources.size()).add(r.new_sinks.size());
    w.add(r.capture_capital).add(r.transport_capital).add(r.storage_capital);
    w.add(r.levelized.pre_credit).add(r.levelized.credit_rate).add(r.levelized.post_credit);
    w.end_row();
  }
}

void write_capital_by_year_csv(const std::string& path, const PhasePlan& plan) {
  csv::Writer w(path, {"year", "capital_usd"});
  for (const auto& [year, capital] : plan.capital_by_year) {
    w.add(year).add(capital);
    w.end_row();
  }
}

void write_phase_geojson(const std::string& path, const netdesign::NetworkProblem& problem, const PhasePlan& plan,
                         std::size_t phase) {
  const auto& net = problem.candidate;
  const auto& rec = plan.phases.at(phase);
  std::map<std::size_t, std::vector<std::pair<int, int>>> built;  // edge -> (online year, class)
  for (std::size_t p = 0; p <= phase; ++p)
    for (const auto& b : plan.phases[p].new_edges) built[b.edge].emplace_back(plan.phases[p].online_year, b.pipe_class);

  json features = json::array();
  for (const auto& [e, pipes] : built) {
    const auto& edge = net.edges[e];
    json coords = json::array();
    for (const auto& c : edge.cells) coords.push_back({net.spec.center_x(c.col), net.spec.center_y(c.row)});
    json classes = json::array(), years = json::array();
    double capacity = 0.0;
    for (const auto& [year, cls] : pipes) {
      years.push_back(year);
      classes.push_back(cls);
      capacity += problem.economics.classes.at(static_cast<std::size_t>(cls)).max_flow;
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "LineString"}, {"coordinates", coords}}},
                        {"properties",
                         {{"edge_id", e},
                          {"from", net.nodes[edge.from].id},
                          {"to", net.nodes[edge.to].id},
                          {"classes", classes},
                          {"online_years", years},
                          {"capacity_mt_y", capacity},
                          {"flow_mt_y", rec.edge_flow.at(e)},
                          {"length_km", edge.length}}}});
  }
  for (std::size_t s = 0; s < problem.sources.size(); ++s) {
    if (rec.capture.at(s) <= kFlowTol) continue;
    const auto& n = net.nodes[problem.sources[s].node];
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {n.x, n.y}}}},
                        {"properties", {{"id", problem.sources[s].id}, {"role", "source"}, {"capture_mt_y", rec.capture[s]}}}});
  }
  for (std::size_t k = 0; k < problem.sinks.size(); ++k) {
    if (rec.injection.at(k) <= kFlowTol) continue;
    const auto& n = net.nodes[problem.sinks[k].node];
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {n.x, n.y}}}},
                        {"properties", {{"id", problem.sinks[k].id}, {"role", "sink"}, {"injection_mt_y", rec.injection[k]}}}});
  }
  json doc{{"type", "FeatureCollection"},
           {"properties", {{"phase", phase + 1}, {"online_year", rec.online_year}}},
           {"features", features}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(1) << "\n";
}

}  // namespace cctskit::phasing
