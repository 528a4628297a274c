#include "cctskit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "cctskit/csv.hpp"
#include "cctskit/error.hpp"

namespace cctskit::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const std::vector<std::pair<Stage, std::string>>& stage_names() {
  static const std::vector<std::pair<Stage, std::string>> names{
      {Stage::Capture, "capture"},
      {Stage::Screen, "screen"},
      {Stage::Characterize, "characterize"},
      {Stage::Surface, "surface"},
      {Stage::Route, "route"},
      {Stage::SolveShared, "solve-shared"},
      {Stage::SolveDedicated, "solve-dedicated"},
      {Stage::Compare, "compare"},
      {Stage::Phase, "phase"},
      {Stage::All, "all"},
  };
  return names;
}

// Artifact file names, relative to the output directory.
constexpr const char* kCapture = "capture.csv";
constexpr const char* kSites = "sites.csv";
constexpr const char* kStorage = "storage_sites.csv";
constexpr const char* kStorageDiagnostics = "storage_diagnostics.csv";
constexpr const char* kSurface = "cost_surface.asc";
constexpr const char* kNetwork = "network.json";
constexpr const char* kShared = "shared_solution.json";
constexpr const char* kDedicated = "dedicated_solution.json";
constexpr const char* kSejTable = "sej_km_table.csv";
constexpr const char* kPhases = "phases.csv";
constexpr const char* kMetadata = "run_metadata.json";

const std::vector<std::string> kSejLayers{"sej3", "sej8"};

class Context {
 public:
  Context(const Scenario& s, std::ostream& log) : s_(s), log_(log), out_(s.output_dir) {
    fs::create_directories(out_);
  }

  const Scenario& scenario() const { return s_; }
  std::ostream& log() { return log_; }

  std::string artifact(const std::string& name) const { return (out_ / name).string(); }

  std::string require(const std::string& name, Stage upstream) const {
    const auto path = out_ / name;
    if (!fs::exists(path))
      throw DependencyError("missing upstream artifact " + path.string() + " (run stage '" + to_string(upstream) +
                            "' first)");
    return path.string();
  }

  std::string input(const std::string& key, const std::string& value) const {
    if (value.empty()) throw ConfigError("scenario has no paths." + key);
    const auto path = s_.resolve(value);
    if (!fs::exists(path)) throw DependencyError("missing input " + path.string() + " (paths." + key + ")");
    return path.string();
  }

  void wrote(const std::string& name) { log_ << "  wrote " << name << "\n"; }

  ordered_json stats = ordered_json::object();

 private:
  const Scenario& s_;
  std::ostream& log_;
  fs::path out_;
};

solver::SolverOptions solver_options(const Scenario& s) {
  solver::SolverOptions o;
  o.node_limit = s.node_limit;
  return o;
}

// capture.csv carries everything later stages need about the sources.
void write_capture_csv(const std::string& path, const std::vector<capture::FacilityRecord>& facilities,
                       const std::vector<capture::FacilityCapture>& captures) {
  csv::Writer w(path, {"id", "name", "x", "y", "sector", "emitted_mt", "capturable_fraction", "co2_concentration",
                       "biogenic_fraction", "captured_mt_y", "cost_usd_t", "capital_usd",
                       "effective_abatement_mt_y", "below_floor"});
  for (std::size_t i = 0; i < facilities.size(); ++i) {
    const auto& f = facilities[i];
    const auto& c = captures[i];
    w.add(f.id).add(f.name).add(f.x).add(f.y).add(capture::to_string(f.sector)).add(f.emitted);
    w.add(f.capturable_fraction).add(f.co2_concentration).add(f.biogenic_fraction);
    w.add(c.captured).add(c.cost_per_tonne).add(c.capital).add(c.effective_abatement).add(c.below_floor ? 1L : 0L);
    w.end_row();
  }
}

void read_capture_csv(const std::string& path, std::vector<capture::FacilityRecord>& facilities,
                      std::vector<capture::FacilityCapture>& captures) {
  const auto t = csv::Table::read(path);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    capture::FacilityRecord f;
    f.id = t.text(r, "id");
    f.name = t.text(r, "name");
    f.x = t.number(r, "x");
    f.y = t.number(r, "y");
    f.sector = capture::parse_sector(t.text(r, "sector"));
    f.emitted = t.number(r, "emitted_mt");
    f.capturable_fraction = t.number(r, "capturable_fraction");
    f.co2_concentration = t.number(r, "co2_concentration");
    f.biogenic_fraction = t.number(r, "biogenic_fraction");
    capture::FacilityCapture c;
    c.id = f.id;
    c.captured = t.number(r, "captured_mt_y");
    c.cost_per_tonne = t.number(r, "cost_usd_t");
    c.capital = t.number(r, "capital_usd");
    c.effective_abatement = t.number(r, "effective_abatement_mt_y");
    c.below_floor = t.integer(r, "below_floor") != 0;
    facilities.push_back(std::move(f));
    captures.push_back(std::move(c));
  }
}

void stage_capture(Context& ctx) {
  const auto& s = ctx.scenario();
  const auto facilities = capture::read_facilities_csv(ctx.input("facilities", s.paths.facilities));
  const auto captures = capture::evaluate_facilities(facilities, s.capture);
  write_capture_csv(ctx.artifact(kCapture), facilities, captures);
  ctx.wrote(kCapture);

  csv::Writer w(ctx.artifact("capture_supply.csv"), {"id", "cumulative_mt_y", "cost_usd_t"});
  for (const auto& p : capture::cost_supply_curve(facilities, s.capture)) {
    w.add(p.id).add(p.cumulative).add(p.cost);
    w.end_row();
  }
  ctx.wrote("capture_supply.csv");
  double total = 0.0;
  for (const auto& c : captures) total += c.captured;
  ctx.stats["capture"] = {{"facilities", facilities.size()}, {"captured_mt_y", total}};
}

void stage_screen(Context& ctx) {
  const auto& s = ctx.scenario();
  const auto landcover = read_ascii_grid(ctx.input("landcover", s.paths.landcover));
  const auto fields = to_mask(read_ascii_grid(ctx.input("active_fields", s.paths.active_fields)));
  std::vector<screening::CandidateSite> announced;
  if (!s.paths.announced_sites.empty())
    announced = screening::read_sites_csv(ctx.input("announced_sites", s.paths.announced_sites));
  const auto sites = screening::screen_sites(landcover, fields, s.screening, announced);
  screening::write_sites_csv(ctx.artifact(kSites), sites);
  ctx.wrote(kSites);
  write_ascii_grid(ctx.artifact("free_mask.asc"), screening::free_mask(landcover, fields, s.screening));
  ctx.wrote("free_mask.asc");
  ctx.stats["screen"] = {{"sites", sites.size()}, {"announced", announced.size()}};
}

std::vector<reservoir::SiteFormations> site_formations(const Context& ctx,
                                                       const std::vector<screening::CandidateSite>& sites,
                                                       const std::vector<reservoir::FormationParams>& formations) {
  const auto& s = ctx.scenario();
  std::vector<reservoir::SiteFormations> out;
  if (!s.paths.adjacency.empty()) {
    const auto adjacency = reservoir::read_adjacency_csv(ctx.input("adjacency", s.paths.adjacency));
    for (const auto& site : sites) {
      reservoir::SiteFormations sf{site, {}};
      const auto [lo, hi] = adjacency.equal_range(site.id);
      for (auto it = lo; it != hi; ++it) {
        const auto f = std::find_if(formations.begin(), formations.end(),
                                    [&](const reservoir::FormationParams& p) { return p.name == it->second; });
        if (f == formations.end()) throw ConfigError("adjacency names unknown formation " + it->second);
        sf.formations.push_back(*f);
      }
      out.push_back(std::move(sf));
    }
    return out;
  }
  if (!s.paths.formation_extents.empty()) {
    const auto extents = read_ascii_grid(ctx.input("formation_extents", s.paths.formation_extents));
    for (const auto& site : sites) {
      unsigned long bits = 0;
      auto add_cell = [&](std::size_t row, std::size_t col) {
        const double v = extents(row, col);
        if (v == extents.nodata() || !(v > 0.0)) return;
        bits |= static_cast<unsigned long>(std::lround(v));
      };
      if (!site.cells.empty()) {
        for (const auto& c : site.cells) add_cell(c.row, c.col);
      } else {
        std::size_t row = 0, col = 0;
        if (extents.spec().locate(site.x, site.y, row, col)) add_cell(row, col);
      }
      reservoir::SiteFormations sf{site, {}};
      for (std::size_t i = 0; i < formations.size() && i < 8 * sizeof bits; ++i)
        if (bits & (1ul << i)) sf.formations.push_back(formations[i]);
      out.push_back(std::move(sf));
    }
    return out;
  }
  for (const auto& site : sites) out.push_back({site, formations});
  return out;
}

void stage_characterize(Context& ctx) {
  const auto& s = ctx.scenario();
  const auto sites = screening::read_sites_csv(ctx.require(kSites, Stage::Screen));
  const auto formations = reservoir::read_formations_csv(ctx.input("formations", s.paths.formations));
  const auto inputs = site_formations(ctx, sites, formations);
  const auto run = reservoir::characterize_sites(inputs, s.monte_carlo_samples, s.seed, s.storage, s.sampling,
                                                 s.formation_mode);
  reservoir::write_storage_sites_csv(ctx.artifact(kStorage), run.sites);
  ctx.wrote(kStorage);
  csv::Writer w(ctx.artifact(kStorageDiagnostics), {"message"});
  for (const auto& d : run.diagnostics) {
    w.add(d);
    w.end_row();
  }
  ctx.wrote(kStorageDiagnostics);

  csv::Writer supply(ctx.artifact("storage_supply.csv"), {"id", "cumulative_mt_y", "cost_usd_t"});
  for (const auto& p : reservoir::storage_supply_curve(run.sites)) {
    supply.add(p.id).add(p.cumulative).add(p.cost);
    supply.end_row();
  }
  ctx.wrote("storage_supply.csv");
  double injectivity = 0.0;
  for (const auto& site : run.sites) injectivity += site.injectivity;
  ctx.stats["characterize"] = {{"sites", run.sites.size()},
                               {"dropped", run.diagnostics.size()},
                               {"injectivity_mt_y", injectivity},
                               {"co2_table", reservoir::co2_table_version()}};
}

std::optional<Mask> sej_layer(const Context& ctx, costsurface::SejMode mode, const GridSpec& target) {
  const auto& p = ctx.scenario().paths;
  if (p.population.empty() || p.tract_grid.empty() || p.tract_burdens.empty()) return std::nullopt;
  const auto population = read_ascii_grid(ctx.input("population", p.population));
  const auto tracts = costsurface::read_tracts(ctx.input("tract_grid", p.tract_grid),
                                               ctx.input("tract_burdens", p.tract_burdens));
  auto params = mode == costsurface::SejMode::Sej8 ? costsurface::SejParams::sej8() : costsurface::SejParams::sej3();
  params.population_threshold = ctx.scenario().sej_population_threshold;
  params.buffer = ctx.scenario().sej_buffer;
  auto marked = costsurface::build_sej_layer(population, tracts, params);
  if (marked.spec() == target) return marked;
  return costsurface::coarsen_any(marked, target);
}

void stage_surface(Context& ctx) {
  const auto& s = ctx.scenario();
  std::map<std::string, RasterGrid> grids;
  for (const auto& [layer, file] : s.paths.cost_layers) grids[layer] = read_ascii_grid(ctx.input("cost_layers." + layer, file));
  if (grids.empty()) grids["landcover"] = read_ascii_grid(ctx.input("landcover", s.paths.landcover));
  const GridSpec spec = grids.begin()->second.spec();

  std::map<std::string, Mask> layers;
  for (const auto& name : kSejLayers) {
    const auto mode = costsurface::parse_sej_mode(name);
    if (auto m = sej_layer(ctx, mode, spec)) {
      write_ascii_grid(ctx.artifact(name + ".asc"), *m);
      ctx.wrote(name + ".asc");
      layers.emplace(name, std::move(*m));
    }
  }
  const Mask* active = nullptr;
  if (s.sej_mode != costsurface::SejMode::Off) {
    const auto it = layers.find(costsurface::to_string(s.sej_mode));
    if (it == layers.end()) throw ConfigError("SEJ mode needs paths.population, paths.tract_grid and paths.tract_burdens");
    active = &it->second;
  }
  const auto surface = costsurface::compose_cost_surface(grids, s.weights, active);
  write_ascii_grid(ctx.artifact(kSurface), surface, 9);
  ctx.wrote(kSurface);
  ctx.stats["surface"] = {{"sej_mode", costsurface::to_string(s.sej_mode)}, {"layers", grids.size()}};
}

void stage_route(Context& ctx) {
  const auto& s = ctx.scenario();
  std::vector<capture::FacilityRecord> facilities;
  std::vector<capture::FacilityCapture> captures;
  read_capture_csv(ctx.require(kCapture, Stage::Capture), facilities, captures);
  const auto sites = reservoir::read_storage_sites_csv(ctx.require(kStorage, Stage::Characterize));
  const auto surface = read_ascii_grid(ctx.require(kSurface, Stage::Surface));

  std::vector<routing::Terminal> sources, sinks;
  for (std::size_t i = 0; i < facilities.size(); ++i)
    if (captures[i].captured > 0.0)
      sources.push_back({facilities[i].id, routing::TerminalKind::Source, facilities[i].x, facilities[i].y});
  for (const auto& site : sites) sinks.push_back({site.site.id, routing::TerminalKind::Sink, site.site.x, site.site.y});

  routing::RoutingOptions options;
  options.connectivity = s.connectivity;
  auto network = routing::build_candidate_network(surface, sources, sinks, s.weights.base_cost, options);
  for (const auto& name : kSejLayers) {
    const auto path = fs::path(ctx.artifact(name + ".asc"));
    if (fs::exists(path)) routing::measure_sej(network, name, to_mask(read_ascii_grid(path)));
  }
  routing::write_network_json(ctx.artifact(kNetwork), network);
  ctx.wrote(kNetwork);
  routing::write_network_geojson(ctx.artifact("network.geojson"), network);
  ctx.wrote("network.geojson");
  routing::write_edges_csv(ctx.artifact("edges.csv"), network);
  ctx.wrote("edges.csv");
  ctx.stats["route"] = {{"nodes", network.nodes.size()}, {"edges", network.edges.size()}, {"km", network.total_length()}};
}

netdesign::NetworkProblem load_problem(const Context& ctx) {
  const auto& s = ctx.scenario();
  std::vector<capture::FacilityRecord> facilities;
  std::vector<capture::FacilityCapture> captures;
  read_capture_csv(ctx.require(kCapture, Stage::Capture), facilities, captures);
  const auto sites = reservoir::read_storage_sites_csv(ctx.require(kStorage, Stage::Characterize));
  auto network = routing::read_network_json(ctx.require(kNetwork, Stage::Route));
  auto econ = s.economics;
  econ.capture_params = s.capture;
  return netdesign::make_problem(std::move(network), facilities, captures, sites, s.target, econ);
}

void write_hubs_csv(const std::string& path, const std::vector<netdesign::Hub>& hubs) {
  csv::Writer w(path, {"hub", "sources", "sinks", "captured_mt_y", "pipeline_km", "transport_usd_per_kt_km",
                       "transport_usd_per_kt_km_nameplate", "storage_usd_t", "natural_hub"});
  auto join = [](const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : ";") + id;
    return out;
  };
  for (const auto& h : hubs) {
    w.add(h.index).add(join(h.sources)).add(join(h.sinks)).add(h.captured).add(h.pipeline_km);
    w.add(h.transport_cost_per_tkm).add(h.transport_cost_per_tkm_nameplate).add(h.storage_cost);
    w.add(h.natural_hub ? 1L : 0L);
    w.end_row();
  }
}

void write_sej_table(const std::string& path, const netdesign::NetworkProblem& problem,
                     const netdesign::NetworkSolution& solution) {
  const auto t3 = netdesign::sej_flow_class_table(problem, solution, "sej3");
  const auto t8 = netdesign::sej_flow_class_table(problem, solution, "sej8");
  csv::Writer w(path, {"flow_class_mt_y", "km", "sej3_km", "sej8_km"});
  for (std::size_t i = 0; i < t3.size(); ++i) {
    w.add(t3[i].label).add(t3[i].km).add(t3[i].sej_km).add(t8[i].sej_km);
    w.end_row();
  }
}

ordered_json report_json(const netdesign::NetworkSolution& sol) {
  const auto& r = sol.report;
  return {{"objective_usd_y", r.objective},
          {"captured_mt_y", r.captured},
          {"injected_mt_y", r.injected},
          {"pipeline_km", r.pipeline_km},
          {"total_levelized_usd_t", r.total_levelized},
          {"proven_optimal", sol.proven_optimal},
          {"nodes_explored", sol.nodes_explored}};
}

void stage_solve_shared(Context& ctx) {
  const auto problem = load_problem(ctx);
  const auto sol = netdesign::solve_shared(problem, solver_options(ctx.scenario()));
  netdesign::write_solution_json(ctx.artifact(kShared), problem, sol);
  ctx.wrote(kShared);
  netdesign::write_solution_geojson(ctx.artifact("shared.geojson"), problem, sol);
  ctx.wrote("shared.geojson");
  write_hubs_csv(ctx.artifact("shared_hubs.csv"), netdesign::hub_report(problem, sol));
  ctx.wrote("shared_hubs.csv");
  write_sej_table(ctx.artifact(kSejTable), problem, sol);
  ctx.wrote(kSejTable);
  netdesign::write_problem_json(ctx.artifact("problem.json"), problem);
  ctx.wrote("problem.json");
  const auto violations = netdesign::check_solution(problem, sol);
  if (!violations.empty()) throw std::logic_error("shared solution fails the feasibility check: " + violations.front());
  ctx.stats["solve-shared"] = report_json(sol);
}

void stage_solve_dedicated(Context& ctx) {
  const auto problem = load_problem(ctx);
  const auto result = netdesign::solve_dedicated(problem);
  netdesign::write_solution_json(ctx.artifact(kDedicated), problem, result.solution);
  ctx.wrote(kDedicated);
  netdesign::write_solution_geojson(ctx.artifact("dedicated.geojson"), problem, result.solution);
  ctx.wrote("dedicated.geojson");
  csv::Writer w(ctx.artifact("dedicated_trace.csv"),
                {"order", "source", "sink", "flow_mt_y", "distance_from_largest_m", "transport_storage_usd_t"});
  for (const auto& step : result.trace) {
    w.add(step.order).add(step.source).add(step.sink).add(step.flow).add(step.distance_from_largest);
    w.add(step.transport_storage_cost);
    w.end_row();
  }
  ctx.wrote("dedicated_trace.csv");
  write_hubs_csv(ctx.artifact("dedicated_hubs.csv"), netdesign::hub_report(problem, result.solution));
  ctx.wrote("dedicated_hubs.csv");
  auto stats = report_json(result.solution);
  stats["unplaced"] = result.solution.unplaced;
  ctx.stats["solve-dedicated"] = stats;
}

void stage_compare(Context& ctx) {
  const auto problem = load_problem(ctx);
  const auto shared = netdesign::read_solution_json(ctx.require(kShared, Stage::SolveShared));
  const auto dedicated = netdesign::read_solution_json(ctx.require(kDedicated, Stage::SolveDedicated));
  const auto rows = netdesign::compare_designs(problem, shared, dedicated);
  csv::Writer w(ctx.artifact("comparison.csv"), {"metric", "shared", "dedicated", "delta"});
  for (const auto& r : rows) {
    w.add(r.metric).add(r.shared).add(r.dedicated).add(r.delta);
    w.end_row();
  }
  ctx.wrote("comparison.csv");
}

// Candidate network restricted to the edges a solution builds.
routing::CandidateNetwork built_subnetwork(const routing::CandidateNetwork& net, const netdesign::NetworkSolution& sol) {
  routing::CandidateNetwork out;
  out.spec = net.spec;
  out.base_cost = net.base_cost;
  out.nodes = net.nodes;
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    if (sol.edges.at(e).pipes <= 0) continue;
    auto edge = net.edges[e];
    edge.id = out.edges.size();
    out.edges.push_back(std::move(edge));
  }
  return out;
}

void stage_phase(Context& ctx) {
  const auto& s = ctx.scenario();
  auto problem = load_problem(ctx);
  if (s.phase_on_shared_edges) {
    const auto shared = netdesign::read_solution_json(ctx.require(kShared, Stage::SolveShared));
    problem.candidate = built_subnetwork(problem.candidate, shared);
  }
  const auto options = solver_options(s);
  const auto plan = phasing::solve_phased(problem, s.schedule, s.credits, options);
  phasing::write_phase_csv(ctx.artifact(kPhases), plan);
  ctx.wrote(kPhases);
  phasing::write_capital_by_year_csv(ctx.artifact("capital_by_year.csv"), plan);
  ctx.wrote("capital_by_year.csv");
  for (std::size_t p = 0; p < plan.phases.size(); ++p) {
    const auto name = "phase_" + std::to_string(p + 1) + ".geojson";
    phasing::write_phase_geojson(ctx.artifact(name), problem, plan, p);
    ctx.wrote(name);
  }

  ordered_json summary{{"perfect_foresight_usd", plan.discounted_cost},
                       {"proven_optimal", plan.proven_optimal},
                       {"nodes_explored", plan.nodes_explored}};
  try {
    const auto myopic = phasing::solve_myopic(problem, s.schedule, s.credits, options);
    phasing::write_phase_csv(ctx.artifact("myopic_phases.csv"), myopic);
    ctx.wrote("myopic_phases.csv");
    summary["myopic_usd"] = myopic.discounted_cost;
  } catch (const InfeasibleError& e) {
    summary["myopic_usd"] = nullptr;
    summary["myopic_infeasible"] = {{"binding", e.binding()}, {"period", e.period() + 1}, {"message", e.what()}};
  }
  ctx.stats["phase"] = summary;
}

void write_metadata(Context& ctx, Stage stage) {
  const auto& s = ctx.scenario();
  ordered_json meta{{"toolkit_version", kToolkitVersion},
                    {"stage", to_string(stage)},
                    {"config_hash", config_hash(s)},
                    {"seed", s.seed},
                    {"co2_table", reservoir::co2_table_version()},
                    {"results", ctx.stats},
                    {"scenario", ordered_json::parse(to_json(s))}};
  meta["scenario"].erase("output_dir");
  std::ofstream out(ctx.artifact(kMetadata));
  if (!out) throw std::runtime_error("cannot write " + ctx.artifact(kMetadata));
  out << meta.dump(2) << "\n";
}

// Plot series helpers: each series is written even when its source is missing.
std::optional<csv::Table> maybe_table(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  return csv::Table::read(path.string());
}

}  // namespace

std::string to_string(Stage s) {
  for (const auto& [stage, name] : stage_names())
    if (stage == s) return name;
  return "?";
}

Stage parse_stage(const std::string& s) {
  for (const auto& [stage, name] : stage_names())
    if (name == s) return stage;
  throw ConfigError("unknown stage '" + s + "'");
}

void run_stage(const Scenario& scenario, Stage stage, std::ostream& log) {
  scenario.validate();
  Context ctx(scenario, log);
  const std::vector<Stage> order{Stage::Capture, Stage::Screen, Stage::Characterize, Stage::Surface, Stage::Route,
                                 Stage::SolveShared, Stage::SolveDedicated, Stage::Compare, Stage::Phase};
  std::vector<Stage> todo = stage == Stage::All ? order : std::vector<Stage>{stage};
  for (Stage st : todo) {
    log << to_string(st) << "\n";
    switch (st) {
      case Stage::Capture: stage_capture(ctx); break;
      case Stage::Screen: stage_screen(ctx); break;
      case Stage::Characterize: stage_characterize(ctx); break;
      case Stage::Surface: stage_surface(ctx); break;
      case Stage::Route: stage_route(ctx); break;
      case Stage::SolveShared: stage_solve_shared(ctx); break;
      case Stage::SolveDedicated: stage_solve_dedicated(ctx); break;
      case Stage::Compare: stage_compare(ctx); break;
      case Stage::Phase: stage_phase(ctx); break;
      case Stage::All: break;
    }
  }
  emit_plots(scenario.output_dir);
  write_metadata(ctx, stage);
}

int run(const Scenario& scenario, Stage stage, std::ostream& log, std::ostream& err) {
  try {
    run_stage(scenario, stage, log);
    return kExitOk;
  } catch (const InfeasibleError& e) {
    err << "infeasible (" << e.binding();
    if (e.period() >= 0) err << ", period " << e.period() + 1;
    err << "): " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

void emit_plots(const fs::path& out_dir) {
  const fs::path dir = out_dir / "plots";
  fs::create_directories(dir);

  {
    csv::Writer w((dir / "emissions_rank.csv").string(), {"rank", "id", "emitted_mt", "cumulative_mt"});
    if (auto t = maybe_table(out_dir / kCapture)) {
      std::vector<std::pair<double, std::string>> rows;
      for (std::size_t r = 0; r < t->rows(); ++r) rows.emplace_back(t->number(r, "emitted_mt"), t->text(r, "id"));
      std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      double cum = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        cum += rows[i].first;
        w.add(i + 1).add(rows[i].second).add(rows[i].first).add(cum);
        w.end_row();
      }
    }
  }

  auto copy_series = [&](const char* artifact, const std::string& series, const std::vector<std::string>& header) {
    csv::Writer w((dir / series).string(), header);
    if (auto t = maybe_table(out_dir / artifact)) {
      for (std::size_t r = 0; r < t->rows(); ++r) {
        for (const auto& h : header) w.add(t->text(r, h));
        w.end_row();
      }
    }
  };
  copy_series("capture_supply.csv", "capture_supply.csv", {"id", "cumulative_mt_y", "cost_usd_t"});
  copy_series(kStorage, "injectivity_by_site.csv", {"site_id", "injectivity_mt_y"});
  copy_series("storage_supply.csv", "storage_supply.csv", {"id", "cumulative_mt_y", "cost_usd_t"});
  copy_series(kSejTable, "sej_km_table.csv", {"flow_class_mt_y", "km", "sej3_km", "sej8_km"});

  csv::Writer w((dir / "phase_costs.csv").string(),
                {"period", "online_year", "capital_usd", "pre_credit_usd_t", "post_credit_usd_t"});
  if (auto t = maybe_table(out_dir / kPhases)) {
    for (std::size_t r = 0; r < t->rows(); ++r) {
      const double capital = t->number(r, "capture_capital_usd") + t->number(r, "transport_capital_usd") +
                             t->number(r, "storage_capital_usd");
      w.add(t->text(r, "period")).add(t->text(r, "online_year")).add(capital);
      w.add(t->text(r, "pre_credit_usd_t")).add(t->text(r, "post_credit_usd_t"));
      w.end_row();
    }
  }
}

}  // namespace cctskit::pipeline
