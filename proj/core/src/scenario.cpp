#include "cctskit/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include <nlohmann/json.hpp>

#define TOML_ENABLE_FORMATTERS 0
#include "toml.hpp"

#include "cctskit/csv.hpp"
#include "cctskit/error.hpp"

namespace cctskit {

namespace {

// Intermediate form shared by the TOML and JSON writers.
using StringMap = std::map<std::string, std::string>;
using NumberMap = std::map<std::string, double>;
using Value = std::variant<bool, long long, double, std::string, std::vector<double>, std::vector<long long>,
                           std::vector<std::vector<double>>, NumberMap, StringMap>;

struct Entry {
  std::string key;
  Value value;
  std::string comment;
};

struct Section {
  std::string name;  // dotted; empty for the root table
  bool array_item = false;
  std::vector<Entry> entries;
};

std::string toml_number(double v) {
  std::string s = csv::format_number(v);
  if (s == "nan") return "nan";
  if (s == "inf") return "inf";
  if (s == "-inf") return "-inf";
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string render(const Value& v) {
  struct Visitor {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(double d) const { return toml_number(d); }
    std::string operator()(const std::string& s) const { return quoted(s); }
    std::string operator()(const std::vector<double>& a) const {
      std::string out = "[";
      for (std::size_t i = 0; i < a.size(); ++i) out += (i ? ", " : "") + toml_number(a[i]);
      return out + "]";
    }
    std::string operator()(const std::vector<long long>& a) const {
      std::string out = "[";
      for (std::size_t i = 0; i < a.size(); ++i) out += (i ? ", " : "") + std::to_string(a[i]);
      return out + "]";
    }
    std::string operator()(const std::vector<std::vector<double>>& rows) const {
      std::string out = "[";
      for (std::size_t i = 0; i < rows.size(); ++i) out += (i ? ", " : "") + (*this)(rows[i]);
      return out + "]";
    }
    std::string operator()(const NumberMap& m) const {
      std::string out = "{";
      bool first = true;
      for (const auto& [k, d] : m) {
        out += (first ? " " : ", ") + quoted(k) + " = " + toml_number(d);
        first = false;
      }
      return out + (first ? "}" : " }");
    }
    std::string operator()(const StringMap& m) const {
      std::string out = "{";
      bool first = true;
      for (const auto& [k, s] : m) {
        out += (first ? " " : ", ") + quoted(k) + " = " + quoted(s);
        first = false;
      }
      return out + (first ? "}" : " }");
    }
  };
  return std::visit(Visitor{}, v);
}

nlohmann::json to_json_value(const Value& v) {
  return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

std::string mode_name(reservoir::FormationMode m) { return m == reservoir::FormationMode::Multi ? "multi" : "single"; }
std::string connectivity_name(routing::Connectivity c) {
  return c == routing::Connectivity::Sixteen ? "sixteen" : "eight";
}

std::vector<Section> describe(const Scenario& s) {
  std::vector<Section> out;

  out.push_back({"", false,
                 {{"name", s.name, ""},
                  {"seed", static_cast<long long>(s.seed), "global Monte Carlo seed"},
                  {"output_dir", s.output_dir, ""},
                  {"target", s.target, "Mt/y stored by the single-period designs; negative = all capture"},
                  {"node_limit", static_cast<long long>(s.node_limit), "branch-and-bound node budget per solve"},
                  {"phase_on_shared_edges", s.phase_on_shared_edges,
                   "phasing only considers edges of the final shared design"}}});

  Section paths{"paths", false, {}};
  const auto& p = s.paths;
  for (const auto& [key, value] : std::vector<std::pair<std::string, std::string>>{
           {"facilities", p.facilities},
           {"landcover", p.landcover},
           {"active_fields", p.active_fields},
           {"formations", p.formations},
           {"formation_extents", p.formation_extents},
           {"adjacency", p.adjacency},
           {"announced_sites", p.announced_sites},
           {"population", p.population},
           {"tract_grid", p.tract_grid},
           {"tract_burdens", p.tract_burdens}})
    paths.entries.push_back({key, value, ""});
  paths.entries.push_back({"cost_layers", StringMap(p.cost_layers.begin(), p.cost_layers.end()), "layer name = grid"});
  out.push_back(std::move(paths));

  std::vector<std::vector<double>> rows;
  for (const auto& r : s.capture.rows) rows.push_back({r.concentration, r.c0, r.exponent});
  const auto& c = s.capture;
  out.push_back({"capture", false,
                 {{"scaling_rows", rows, "[concentration, $/t at 1 Mt/y, exponent]; NOAK amine anchors"},
                  {"capacity_factor", c.capacity_factor, ""},
                  {"capital_charge_rate", c.capital_charge_rate, "1/y"},
                  {"design_capture_fraction", c.design_capture_fraction, ""},
                  {"effective_capture_ratio", c.effective_capture_ratio, "reported only"},
                  {"capex_fraction_of_levelized", c.capex_fraction_of_levelized, "calibration default"},
                  {"capture_floor", c.capture_floor, "Mt/y"}}});

  std::vector<long long> excluded(s.screening.excluded_landcover_classes.begin(),
                                  s.screening.excluded_landcover_classes.end());
  out.push_back({"screening", false,
                 {{"excluded_landcover_classes", excluded, ""},
                  {"landcover_buffer", s.screening.landcover_buffer, "m"},
                  {"field_buffer", s.screening.field_buffer, "m"},
                  {"min_contiguous_area", s.screening.min_contiguous_area, "km2, a 5 km radius circle"}}});

  const auto& m = s.sampling;
  out.push_back({"sampling", false,
                 {{"samples", static_cast<long long>(s.monte_carlo_samples), "Monte Carlo draws per formation"},
                  {"formation_mode", mode_name(s.formation_mode), "single | multi"},
                  {"depth_sd_fraction", m.depth_sd_fraction, ""},
                  {"temperature_sd_fraction", m.temperature_sd_fraction, ""},
                  {"other_sd_fraction", m.other_sd_fraction, "thickness, permeability, porosity"},
                  {"max_thickness", m.max_thickness, "m"},
                  {"min_thickness", m.min_thickness, "m"},
                  {"max_permeability", m.max_permeability, "m2 (1000 mD)"},
                  {"min_permeability", m.min_permeability, "m2 (0.01 mD)"},
                  {"min_porosity", m.min_porosity, ""},
                  {"max_porosity", m.max_porosity, ""},
                  {"eligible_depth_min", m.eligible_depth_min, "m (3,000 ft)"},
                  {"eligible_depth_max", m.eligible_depth_max, "m (13,000 ft)"}}});

  const auto& st = s.storage;
  out.push_back({"storage", false,
                 {{"per_well_cap", st.per_well_cap, "Mt/y"},
                  {"injection_years", st.injection_years, ""},
                  {"discount_rate", st.discount_rate, ""},
                  {"pressure_fraction_of_fracture", st.pressure_fraction_of_fracture, ""},
                  {"water_disposal_cost", st.water_disposal_cost, "$/m3"},
                  {"storage_efficiency", st.storage_efficiency, "calibration default"},
                  {"well_density_cap", st.well_density_cap, "wells/km2, calibration default"},
                  {"wellbore_radius", st.wellbore_radius, "m"},
                  {"site_characterization", st.site_characterization, "$ per site, calibration default"},
                  {"injection_well_fixed", st.injection_well_fixed, "$ per well"},
                  {"injection_well_per_m", st.injection_well_per_m, "$ per m of depth"},
                  {"water_well_fixed", st.water_well_fixed, "$ per well"},
                  {"water_well_per_m", st.water_well_per_m, "$ per m of depth"},
                  {"pump", st.pump, "$ per injection pump"},
                  {"monitoring_per_year", st.monitoring_per_year, "$/y per site"},
                  {"om_per_well_year", st.om_per_well_year, "$/y per well pair"},
                  {"plugging_per_well", st.plugging_per_well, "$ per well"}}});

  out.push_back({"surface", false,
                 {{"base_cost", s.weights.base_cost, "$/km at weight 1"},
                  {"sej_mode", costsurface::to_string(s.sej_mode), "off | sej3 | sej8"},
                  {"sej_weight", s.weights.sej_weight, ""},
                  {"sej_population_threshold", s.sej_population_threshold, "persons per cell"},
                  {"sej_buffer", s.sej_buffer, "m"},
                  {"connectivity", connectivity_name(s.connectivity), "eight | sixteen"}}});
  for (const auto& layer : s.weights.layers) {
    NumberMap w;
    for (const auto& [cat, value] : layer.by_category) w[std::to_string(cat)] = value;
    out.push_back({"surface.layers", true, {{"layer", layer.layer, ""}, {"weights", w, "category = multiplier"}}});
  }

  const auto& e = s.economics;
  std::vector<std::vector<double>> classes;
  for (const auto& cl : e.classes) classes.push_back({cl.max_flow, cl.capital_per_km, cl.om_per_km_y});
  out.push_back({"economics", false,
                 {{"classes", classes, "[Mt/y, $/km, $/km/y]; calibration defaults"},
                  {"project_years", e.project_years, ""},
                  {"fixed_charge_rate", e.fixed_charge_rate, "1/y"},
                  {"pump_spacing_km", e.pump_spacing_km, ""},
                  {"pump_station_capital", e.pump_station_capital, "$ per station, calibration default"},
                  {"pump_station_om_y", e.pump_station_om_y, "$/y per station"},
                  {"min_pressure_barg", e.min_pressure_barg, "metadata only"},
                  {"max_pressure_barg", e.max_pressure_barg, "metadata only"},
                  {"all_or_nothing_capture", e.all_or_nothing_capture, ""}}});

  std::vector<long long> years;
  std::vector<double> targets;
  for (const auto& period : s.schedule.periods) {
    years.push_back(period.online_year);
    targets.push_back(period.target);
  }
  out.push_back({"phasing", false,
                 {{"online_years", years, ""},
                  {"targets", targets, "Mt/y"},
                  {"construction_lead", static_cast<long long>(s.schedule.construction_lead), "years"},
                  {"operating_life", static_cast<long long>(s.schedule.operating_life), "years"},
                  {"discount_rate", s.schedule.discount_rate, ""},
                  {"max_parallel_pipes", static_cast<long long>(s.schedule.max_parallel_pipes), ""}}});

  out.push_back({"credits", false,
                 {{"bonus_rate", s.credits.bonus_rate, "$/t"},
                  {"base_rate", s.credits.base_rate, "$/t"},
                  {"credit_years", static_cast<long long>(s.credits.credit_years), ""},
                  {"bonus_construction_deadline", static_cast<long long>(s.credits.bonus_construction_deadline),
                   "construction must start before this year"}}});
  return out;
}

// Reads one TOML table, recording every key touched so leftovers can be rejected.
class TableReader {
 public:
  TableReader(const toml::table& table, std::string path, const std::string& source)
      : table_(table), path_(std::move(path)), source_(source) {}

  template <typename T>
  void read(const std::string& key, T& out) {
    const toml::node* node = take(key);
    if (node) out = convert<T>(*node, key);
  }

  const toml::node* take(const std::string& key) {
    seen_.insert(key);
    return table_.get(key);
  }

  const toml::table* subtable(const std::string& key) {
    const toml::node* n = take(key);
    if (!n) return nullptr;
    if (!n->is_table()) fail(*n, key, "expected a table");
    return n->as_table();
  }

  void finish() const {
    for (const auto& [k, node] : table_) {
      const std::string key(k.str());
      if (!seen_.count(key)) fail(node, key, "unknown key");
    }
  }

  [[noreturn]] void fail(const toml::node& node, const std::string& key, const std::string& what) const {
    const std::string full = path_.empty() ? key : path_ + "." + key;
    throw ParseError(source_, node.source().begin.line, full + ": " + what);
  }

 private:
  double number(const toml::node& n, const std::string& key) const {
    if (auto d = n.value_exact<double>()) return *d;
    if (auto i = n.value_exact<int64_t>()) return static_cast<double>(*i);
    fail(n, key, "expected a number");
  }

  long long integer(const toml::node& n, const std::string& key) const {
    if (auto i = n.value_exact<int64_t>()) return *i;
    fail(n, key, "expected an integer");
  }

  const toml::array& array(const toml::node& n, const std::string& key) const {
    if (!n.is_array()) fail(n, key, "expected an array");
    return *n.as_array();
  }

  template <typename T>
  T convert(const toml::node& n, const std::string& key) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (auto b = n.value_exact<bool>()) return *b;
      fail(n, key, "expected true or false");
    } else if constexpr (std::is_same_v<T, double>) {
      return number(n, key);
    } else if constexpr (std::is_integral_v<T>) {
      const long long v = integer(n, key);
      if constexpr (std::is_unsigned_v<T>) {
        if (v < 0) fail(n, key, "expected a nonnegative integer");
      }
      return static_cast<T>(v);
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (auto s = n.value_exact<std::string>()) return *s;
      fail(n, key, "expected a string");
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      std::vector<double> out;
      for (const auto& x : array(n, key)) out.push_back(number(x, key));
      return out;
    } else if constexpr (std::is_same_v<T, std::vector<long long>>) {
      std::vector<long long> out;
      for (const auto& x : array(n, key)) out.push_back(integer(x, key));
      return out;
    } else if constexpr (std::is_same_v<T, std::vector<std::vector<double>>>) {
      std::vector<std::vector<double>> out;
      for (const auto& row : array(n, key)) out.push_back(convert<std::vector<double>>(row, key));
      return out;
    } else if constexpr (std::is_same_v<T, StringMap>) {
      if (!n.is_table()) fail(n, key, "expected a table");
      StringMap out;
      for (const auto& [k, v] : *n.as_table()) out[std::string(k.str())] = convert<std::string>(v, key + "." + std::string(k.str()));
      return out;
    } else {
      static_assert(std::is_same_v<T, NumberMap>);
      if (!n.is_table()) fail(n, key, "expected a table");
      NumberMap out;
      for (const auto& [k, v] : *n.as_table()) out[std::string(k.str())] = number(v, key + "." + std::string(k.str()));
      return out;
    }
  }

  const toml::table& table_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> seen_;
};

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::filesystem::path Scenario::resolve(const std::string& p) const {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

void Scenario::validate() const {
  capture.validate();
  screening.validate();
  sampling.validate();
  storage.validate();
  weights.validate();
  economics.validate();
  schedule.validate();
  credits.validate(schedule.operating_life);
  if (monte_carlo_samples < 1) throw ConfigError("sampling.samples must be >= 1");
  if (!(sej_buffer >= 0.0)) throw ConfigError("surface.sej_buffer must be >= 0");
  if (std::isnan(sej_population_threshold)) throw ConfigError("surface.sej_population_threshold is NaN");
  if (node_limit < 1) throw ConfigError("node_limit must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  std::set<std::string> names;
  for (const auto& l : weights.layers)
    if (!names.insert(l.layer).second) throw ConfigError("duplicate weight layer " + l.layer);
}

Scenario parse_scenario(const std::string& toml_text, const std::filesystem::path& base_dir, const std::string& source) {
  toml::table doc;
  try {
    doc = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    throw ParseError(source, e.source().begin.line, std::string(e.description()));
  }

  Scenario s;
  s.base_dir = base_dir;
  TableReader root(doc, "", source);
  root.read("name", s.name);
  root.read("seed", s.seed);
  root.read("output_dir", s.output_dir);
  root.read("target", s.target);
  root.read("node_limit", s.node_limit);
  root.read("phase_on_shared_edges", s.phase_on_shared_edges);

  if (const auto* t = root.subtable("paths")) {
    TableReader r(*t, "paths", source);
    auto& p = s.paths;
    r.read("facilities", p.facilities);
    r.read("landcover", p.landcover);
    r.read("active_fields", p.active_fields);
    r.read("formations", p.formations);
    r.read("formation_extents", p.formation_extents);
    r.read("adjacency", p.adjacency);
    r.read("announced_sites", p.announced_sites);
    r.read("population", p.population);
    r.read("tract_grid", p.tract_grid);
    r.read("tract_burdens", p.tract_burdens);
    StringMap layers;
    r.read("cost_layers", layers);
    p.cost_layers.insert(layers.begin(), layers.end());
    r.finish();
  }

  if (const auto* t = root.subtable("capture")) {
    TableReader r(*t, "capture", source);
    auto& c = s.capture;
    if (const auto* n = r.take("scaling_rows")) {
      std::vector<std::vector<double>> rows;
      r.read("scaling_rows", rows);
      c.rows.clear();
      for (const auto& row : rows) {
        if (row.size() != 3) r.fail(*n, "scaling_rows", "rows need [concentration, c0, exponent]");
        c.rows.push_back({row[0], row[1], row[2]});
      }
    }
    r.read("capacity_factor", c.capacity_factor);
    r.read("capital_charge_rate", c.capital_charge_rate);
    r.read("design_capture_fraction", c.design_capture_fraction);
    r.read("effective_capture_ratio", c.effective_capture_ratio);
    r.read("capex_fraction_of_levelized", c.capex_fraction_of_levelized);
    r.read("capture_floor", c.capture_floor);
    r.finish();
  }

  if (const auto* t = root.subtable("screening")) {
    TableReader r(*t, "screening", source);
    if (r.take("excluded_landcover_classes")) {
      std::vector<long long> classes;
      r.read("excluded_landcover_classes", classes);
      s.screening.excluded_landcover_classes.clear();
      for (long long v : classes) s.screening.excluded_landcover_classes.insert(static_cast<int>(v));
    }
    r.read("landcover_buffer", s.screening.landcover_buffer);
    r.read("field_buffer", s.screening.field_buffer);
    r.read("min_contiguous_area", s.screening.min_contiguous_area);
    r.finish();
  }

  if (const auto* t = root.subtable("sampling")) {
    TableReader r(*t, "sampling", source);
    auto& m = s.sampling;
    r.read("samples", s.monte_carlo_samples);
    if (const auto* n = r.take("formation_mode")) {
      std::string mode;
      r.read("formation_mode", mode);
      if (mode == "single") s.formation_mode = reservoir::FormationMode::Single;
      else if (mode == "multi") s.formation_mode = reservoir::FormationMode::Multi;
      else r.fail(*n, "formation_mode", "expected single or multi");
    }
    r.read("depth_sd_fraction", m.depth_sd_fraction);
    r.read("temperature_sd_fraction", m.temperature_sd_fraction);
    r.read("other_sd_fraction", m.other_sd_fraction);
    r.read("max_thickness", m.max_thickness);
    r.read("min_thickness", m.min_thickness);
    r.read("max_permeability", m.max_permeability);
    r.read("min_permeability", m.min_permeability);
    r.read("min_porosity", m.min_porosity);
    r.read("max_porosity", m.max_porosity);
    r.read("eligible_depth_min", m.eligible_depth_min);
    r.read("eligible_depth_max", m.eligible_depth_max);
    r.finish();
  }

  if (const auto* t = root.subtable("storage")) {
    TableReader r(*t, "storage", source);
    auto& st = s.storage;
    r.read("per_well_cap", st.per_well_cap);
    r.read("injection_years", st.injection_years);
    r.read("discount_rate", st.discount_rate);
    r.read("pressure_fraction_of_fracture", st.pressure_fraction_of_fracture);
    r.read("water_disposal_cost", st.water_disposal_cost);
    r.read("storage_efficiency", st.storage_efficiency);
    r.read("well_density_cap", st.well_density_cap);
    r.read("wellbore_radius", st.wellbore_radius);
    r.read("site_characterization", st.site_characterization);
    r.read("injection_well_fixed", st.injection_well_fixed);
    r.read("injection_well_per_m", st.injection_well_per_m);
    r.read("water_well_fixed", st.water_well_fixed);
    r.read("water_well_per_m", st.water_well_per_m);
    r.read("pump", st.pump);
    r.read("monitoring_per_year", st.monitoring_per_year);
    r.read("om_per_well_year", st.om_per_well_year);
    r.read("plugging_per_well", st.plugging_per_well);
    r.finish();
  }

  if (const auto* t = root.subtable("surface")) {
    TableReader r(*t, "surface", source);
    r.read("base_cost", s.weights.base_cost);
    r.read("sej_weight", s.weights.sej_weight);
    r.read("sej_population_threshold", s.sej_population_threshold);
    r.read("sej_buffer", s.sej_buffer);
    if (const auto* n = r.take("sej_mode")) {
      std::string mode;
      r.read("sej_mode", mode);
      try {
        s.sej_mode = costsurface::parse_sej_mode(mode);
      } catch (const std::exception& e) {
        r.fail(*n, "sej_mode", e.what());
      }
    }
    if (const auto* n = r.take("connectivity")) {
      std::string c;
      r.read("connectivity", c);
      if (c == "eight") s.connectivity = routing::Connectivity::Eight;
      else if (c == "sixteen") s.connectivity = routing::Connectivity::Sixteen;
      else r.fail(*n, "connectivity", "expected eight or sixteen");
    }
    if (const auto* n = r.take("layers")) {
      if (!n->is_array_of_tables()) r.fail(*n, "layers", "expected an array of tables");
      for (const auto& item : *n->as_array()) {
        TableReader lr(*item.as_table(), "surface.layers", source);
        costsurface::LayerWeights lw;
        lr.read("layer", lw.layer);
        NumberMap weights;
        const auto* wn = lr.take("weights");
        lr.read("weights", weights);
        for (const auto& [k, v] : weights) {
          std::size_t used = 0;
          int cat = 0;
          try {
            cat = std::stoi(k, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used != k.size() || k.empty()) lr.fail(wn ? *wn : item, "weights", "category keys must be integers");
          lw.by_category[cat] = v;
        }
        lr.finish();
        s.weights.layers.push_back(std::move(lw));
      }
    }
    r.finish();
  }

  if (const auto* t = root.subtable("economics")) {
    TableReader r(*t, "economics", source);
    auto& e = s.economics;
    if (const auto* n = r.take("classes")) {
      std::vector<std::vector<double>> rows;
      r.read("classes", rows);
      e.classes.clear();
      for (const auto& row : rows) {
        if (row.size() != 3) r.fail(*n, "classes", "rows need [max_flow, capital_per_km, om_per_km_y]");
        e.classes.push_back({row[0], row[1], row[2]});
      }
    }
    r.read("project_years", e.project_years);
    r.read("fixed_charge_rate", e.fixed_charge_rate);
    r.read("pump_spacing_km", e.pump_spacing_km);
    r.read("pump_station_capital", e.pump_station_capital);
    r.read("pump_station_om_y", e.pump_station_om_y);
    r.read("min_pressure_barg", e.min_pressure_barg);
    r.read("max_pressure_barg", e.max_pressure_barg);
    r.read("all_or_nothing_capture", e.all_or_nothing_capture);
    r.finish();
  }

  if (const auto* t = root.subtable("phasing")) {
    TableReader r(*t, "phasing", source);
    auto& sch = s.schedule;
    const auto* yn = r.take("online_years");
    const auto* tn = r.take("targets");
    if (yn || tn) {
      if (!yn || !tn) r.fail(yn ? *yn : *tn, "online_years", "online_years and targets go together");
      std::vector<long long> years;
      std::vector<double> targets;
      r.read("online_years", years);
      r.read("targets", targets);
      if (years.size() != targets.size()) r.fail(*tn, "targets", "needs one value per online year");
      sch.periods.clear();
      for (std::size_t i = 0; i < years.size(); ++i) sch.periods.push_back({static_cast<int>(years[i]), targets[i]});
    }
    r.read("construction_lead", sch.construction_lead);
    r.read("operating_life", sch.operating_life);
    r.read("discount_rate", sch.discount_rate);
    r.read("max_parallel_pipes", sch.max_parallel_pipes);
    r.finish();
  }

  if (const auto* t = root.subtable("credits")) {
    TableReader r(*t, "credits", source);
    r.read("bonus_rate", s.credits.bonus_rate);
    r.read("base_rate", s.credits.base_rate);
    r.read("credit_years", s.credits.credit_years);
    r.read("bonus_construction_deadline", s.credits.bonus_construction_deadline);
    r.finish();
  }
  root.finish();

  s.economics.capture_params = s.capture;
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario s = parse_scenario(buf.str(), path.parent_path().empty() ? "." : path.parent_path(), path.string());
  s.validate();

  std::vector<std::pair<std::string, std::string>> required{{"paths.facilities", s.paths.facilities},
                                                            {"paths.landcover", s.paths.landcover},
                                                            {"paths.active_fields", s.paths.active_fields},
                                                            {"paths.formations", s.paths.formations}};
  if (s.sej_mode != costsurface::SejMode::Off) {
    required.push_back({"paths.population", s.paths.population});
    required.push_back({"paths.tract_grid", s.paths.tract_grid});
    required.push_back({"paths.tract_burdens", s.paths.tract_burdens});
  }
  for (const auto& [key, value] : required)
    if (value.empty()) throw ConfigError(path.string() + ": " + key + " is required");
  std::vector<std::pair<std::string, std::string>> all = required;
  for (const auto& [key, value] : std::vector<std::pair<std::string, std::string>>{
           {"paths.formation_extents", s.paths.formation_extents},
           {"paths.adjacency", s.paths.adjacency},
           {"paths.announced_sites", s.paths.announced_sites}})
    if (!value.empty()) all.push_back({key, value});
  for (const auto& [layer, file] : s.paths.cost_layers) all.push_back({"paths.cost_layers." + layer, file});
  for (const auto& [key, value] : all)
    if (!std::filesystem::exists(s.resolve(value)))
      throw ConfigError(path.string() + ": " + key + " refers to missing file " + s.resolve(value).string());
  return s;
}

std::string to_toml(const Scenario& s) {
  std::ostringstream out;
  bool first = true;
  for (const auto& section : describe(s)) {
    if (!section.name.empty()) {
      if (!first) out << "\n";
      out << (section.array_item ? "[[" : "[") << section.name << (section.array_item ? "]]" : "]") << "\n";
    }
    first = false;
    for (const auto& e : section.entries) {
      out << e.key << " = " << render(e.value);
      if (!e.comment.empty()) out << "  # " << e.comment;
      out << "\n";
    }
  }
  return out.str();
}

std::string to_json(const Scenario& s) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& section : describe(s)) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& e : section.entries) obj[e.key] = to_json_value(e.value);
    if (section.name.empty()) {
      for (auto it = obj.begin(); it != obj.end(); ++it) doc[it.key()] = it.value();
      continue;
    }
    nlohmann::ordered_json* target = &doc;
    const auto parts = csv::split(section.name, '.');
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) target = &(*target)[parts[i]];
    if (section.array_item) (*target)[parts.back()].push_back(obj);
    else (*target)[parts.back()] = obj;
  }
  return doc.dump(2) + "\n";
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.base_dir == b.base_dir && to_toml(a) == to_toml(b);
}

std::string config_hash(const Scenario& s) {
  Scenario located = s;
  located.output_dir = "";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_toml(located))));
  return buf;
}

}  // namespace cctskit
