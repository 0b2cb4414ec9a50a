#include <fstream>
#include <sstream>

#include "varns/error.hpp"
#include "varns/harness.hpp"

namespace varns {

using nlohmann::json;

namespace {

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <class T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null())
    out.reset();
  else
    out = j.at(key).get<T>();
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// Wraps JSON library errors so callers see one exception type.
template <class F>
auto parse_guard(const std::string& what, F&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::invalid_argument, what + ": " + e.what());
  }
}

}  // namespace

// ---- Grids and exponents ------------------------------------------------------------

json to_json(const GridSpec& g) {
  json j;
  j["dimension"] = g.dimension;
  j["topology"] = to_string(g.topology);
  j["resolution"] = std::vector<std::size_t>(g.resolution.begin(), g.resolution.begin() + g.dimension);
  j["extents"] = std::vector<double>(g.extents.begin(), g.extents.begin() + g.dimension);
  j["origin"] = std::vector<double>(g.origin.begin(), g.origin.begin() + g.dimension);
  return j;
}

GridSpec grid_from_json(const json& j) {
  return parse_guard("grid", [&] {
    GridSpec g;
    g.dimension = j.at("dimension").get<int>();
    require(g.dimension == 1 || g.dimension == 3, "grid dimension must be 1 or 3");
    g.topology = topology_from_string(j.value("topology", std::string("truncated")));
    const auto res = j.at("resolution").get<std::vector<std::size_t>>();
    const auto ext = j.at("extents").get<std::vector<double>>();
    const auto org = j.value("origin", std::vector<double>(g.dimension, 0.0));
    require(res.size() == static_cast<std::size_t>(g.dimension) && ext.size() == res.size() &&
                org.size() == res.size(),
            "grid arrays must have one entry per axis");
    for (int a = 0; a < g.dimension; ++a) {
      g.resolution[a] = res[a];
      g.extents[a] = ext[a];
      g.origin[a] = org[a];
    }
    g.validate();
    return g;
  });
}

json to_json(const ExponentSpec& e) {
  return json{{"family", to_string(e.family)}, {"params", e.params}};
}

ExponentSpec exponent_spec_from_json(const json& j) {
  return parse_guard("exponent", [&] {
    ExponentSpec e;
    e.family = exponent_family_from_string(j.at("family").get<std::string>());
    e.params = j.value("params", std::vector<double>{});
    return e;
  });
}

// ---- Campaigns --------------------------------------------------------------------

json to_json(const CampaignConfig& c) {
  json j;
  j["target"] = to_string(c.target);
  j["corpus"] = to_string(c.corpus);
  j["corpus_size"] = c.corpus_size;
  j["seed"] = c.seed;
  j["grids"] = json::array();
  for (const auto& g : c.grids) j["grids"].push_back(to_json(g));
  j["refinement_levels"] = c.refinement_levels;
  j["exponent_specs"] = json::array();
  for (const auto& e : c.exponent_specs) j["exponent_specs"].push_back(to_json(e));
  j["bound"] = c.bound;
  j["lower_bound"] = c.lower_bound;
  j["drift_limit"] = c.drift_limit;
  j["sigma"] = c.sigma;
  j["frak_p"] = c.frak_p;
  j["candidates"] = c.candidates;
  j["T_min"] = c.T_min;
  j["T_max"] = c.T_max;
  j["tol"] = c.tol;
  return j;
}

CampaignConfig campaign_config_from_json(const json& j) {
  return parse_guard("campaign config", [&] {
    require(j.is_object(), "campaign config must be a JSON object");
    CampaignConfig c = default_campaign(
        campaign_target_from_string(j.value("target", std::string("holder"))));
    if (j.contains("corpus")) c.corpus = corpus_kind_from_string(j.at("corpus").get<std::string>());
    read_if(j, "corpus_size", c.corpus_size);
    read_if(j, "seed", c.seed);
    if (j.contains("grids")) {
      c.grids.clear();
      for (const auto& g : j.at("grids")) c.grids.push_back(grid_from_json(g));
    }
    if (j.contains("grid")) c.grids = {grid_from_json(j.at("grid"))};
    read_if(j, "refinement_levels", c.refinement_levels);
    if (j.contains("exponent_specs")) {
      c.exponent_specs.clear();
      for (const auto& e : j.at("exponent_specs")) c.exponent_specs.push_back(exponent_spec_from_json(e));
    }
    read_if(j, "bound", c.bound);
    read_if(j, "lower_bound", c.lower_bound);
    read_if(j, "drift_limit", c.drift_limit);
    read_if(j, "sigma", c.sigma);
    read_if(j, "frak_p", c.frak_p);
    read_if(j, "candidates", c.candidates);
    read_if(j, "T_min", c.T_min);
    read_if(j, "T_max", c.T_max);
    read_if(j, "tol", c.tol);
    c.validate();
    return c;
  });
}

json to_json(const InequalityReport& r) {
  json j;
  j["schema"] = report_schema;
  j["target"] = to_string(r.target);
  j["citation"] = r.citation;
  j["bound"] = r.bound;
  j["lower_bound"] = r.lower_bound;
  j["observed_max_ratio"] = r.observed_max_ratio;
  j["observed_min_ratio"] = r.observed_min_ratio;
  j["per_level_max"] = r.per_level_max;
  j["drift"] = r.drift;
  j["drift_limit"] = r.drift_limit;
  j["pass"] = r.pass;
  j["drift_pass"] = r.drift_pass;
  j["worst_case"] = {{"level", r.worst_case.level},
                     {"element", r.worst_case.element},
                     {"ratio", r.worst_case.ratio},
                     {"grid", to_json(r.worst_case.grid)}};
  j["evaluations"] = json::array();
  for (const auto& e : r.evaluations)
    j["evaluations"].push_back({{"level", e.level}, {"element", e.element}, {"ratio", e.ratio}});
  j["config"] = to_json(r.config);
  return j;
}

InequalityReport report_from_json(const json& j) {
  return parse_guard("report", [&] {
    require(j.value("schema", std::string()) == report_schema,
            std::string("report schema must be ") + report_schema);
    InequalityReport r;
    r.target = campaign_target_from_string(j.at("target").get<std::string>());
    r.citation = j.at("citation").get<std::string>();
    r.bound = j.at("bound").get<double>();
    r.lower_bound = j.at("lower_bound").get<double>();
    r.observed_max_ratio = j.at("observed_max_ratio").get<double>();
    r.observed_min_ratio = j.at("observed_min_ratio").get<double>();
    r.per_level_max = j.at("per_level_max").get<std::vector<double>>();
    r.drift = j.at("drift").get<double>();
    r.drift_limit = j.at("drift_limit").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.drift_pass = j.at("drift_pass").get<bool>();
    const auto& w = j.at("worst_case");
    r.worst_case = {w.at("level").get<std::size_t>(), w.at("element").get<std::size_t>(),
                    w.at("ratio").get<double>(), grid_from_json(w.at("grid"))};
    for (const auto& e : j.at("evaluations"))
      r.evaluations.push_back({e.at("level").get<std::size_t>(), e.at("element").get<std::size_t>(),
                               e.at("ratio").get<double>()});
    r.config = campaign_config_from_json(j.at("config"));
    return r;
  });
}

// ---- Solver -------------------------------------------------------------------------

json to_json(const SolverConfig& c) {
  json j;
  j["regime"] = to_string(c.regime);
  j["resolution"] = c.resolution;
  j["length"] = c.length;
  j["T"] = c.T;
  j["steps"] = c.steps;
  j["exponent"] = to_json(c.exponent);
  j["q"] = c.q;
  j["frak_p"] = c.frak_p;
  j["tol_fixedpoint"] = c.tol_fixedpoint;
  j["max_iters"] = c.max_iters;
  j["tol_norm"] = c.tol_norm;
  j["u0"] = {{"kind", to_string(c.u0.kind)},
             {"amplitude", c.u0.amplitude},
             {"seed", c.u0.seed},
             {"band", c.u0.band},
             {"path", c.u0.path}};
  j["force"] = {{"kind", to_string(c.force.kind)}, {"amplitude", c.force.amplitude}};
  j["cb_trials"] = c.cb_trials;
  j["cb_seed"] = c.cb_seed;
  j["cb_override"] = optional_json(c.cb_override);
  j["smallness_target"] = optional_json(c.smallness_target);
  j["override_smallness"] = c.override_smallness;
  j["disable_bilinear"] = c.disable_bilinear;
  j["ladder_T_max"] = c.ladder_T_max;
  j["ladder_count"] = c.ladder_count;
  j["ladder_ratio"] = c.ladder_ratio;
  return j;
}

SolverConfig solver_config_from_json(const json& j) {
  return parse_guard("solver config", [&] {
    require(j.is_object(), "solver config must be a JSON object");
    SolverConfig c;
    if (j.contains("regime")) c.regime = regime_from_string(j.at("regime").get<std::string>());
    if (c.regime == Regime::thm2) c.exponent = {ExponentFamily::sinusoidal, {3.0, 1.0, 1.0, 2.0}};
    read_if(j, "resolution", c.resolution);
    read_if(j, "length", c.length);
    read_if(j, "T", c.T);
    read_if(j, "steps", c.steps);
    if (j.contains("exponent")) c.exponent = exponent_spec_from_json(j.at("exponent"));
    read_if(j, "q", c.q);
    read_if(j, "frak_p", c.frak_p);
    read_if(j, "tol_fixedpoint", c.tol_fixedpoint);
    read_if(j, "max_iters", c.max_iters);
    read_if(j, "tol_norm", c.tol_norm);
    if (j.contains("u0")) {
      const auto& u = j.at("u0");
      if (u.contains("kind")) c.u0.kind = initial_kind_from_string(u.at("kind").get<std::string>());
      read_if(u, "amplitude", c.u0.amplitude);
      read_if(u, "seed", c.u0.seed);
      read_if(u, "band", c.u0.band);
      read_if(u, "path", c.u0.path);
    }
    if (j.contains("force")) {
      const auto& f = j.at("force");
      if (f.contains("kind")) c.force.kind = force_kind_from_string(f.at("kind").get<std::string>());
      read_if(f, "amplitude", c.force.amplitude);
    }
    read_if(j, "cb_trials", c.cb_trials);
    read_if(j, "cb_seed", c.cb_seed);
    read_optional(j, "cb_override", c.cb_override);
    read_optional(j, "smallness_target", c.smallness_target);
    read_if(j, "override_smallness", c.override_smallness);
    read_if(j, "disable_bilinear", c.disable_bilinear);
    read_if(j, "ladder_T_max", c.ladder_T_max);
    read_if(j, "ladder_count", c.ladder_count);
    read_if(j, "ladder_ratio", c.ladder_ratio);
    c.validate();
    return c;
  });
}

json to_json(const SolverResult& r) {
  json j;
  j["schema"] = report_schema;
  j["kind"] = "solve";
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["iterates_norms"] = r.iterates_norms;
  j["residual"] = r.residual;
  j["contraction_estimate"] = r.contraction_estimate;
  j["c_b_estimate"] = r.c_b_estimate;
  j["data_scale"] = r.data_scale;
  j["final_norm"] = r.final_norm;
  j["max_divergence"] = r.max_divergence;
  json ladder = json::array();
  for (const auto& e : r.smallness.ladder)
    ladder.push_back({{"T", e.T}, {"delta", e.delta}, {"c_b", e.c_b}, {"pass", e.pass}});
  j["smallness"] = {{"delta", r.smallness.delta},
                    {"threshold", r.smallness.threshold},
                    {"pass", r.smallness.pass},
                    {"admissible_T", optional_json(r.smallness.admissible_T)},
                    {"ladder", ladder}};
  j["config"] = to_json(r.config);
  return j;
}

// ---- Overrides and files ------------------------------------------------------------

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  require(eq != std::string::npos && eq > 0, "override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &doc;
  std::stringstream path(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(path, part, '.')) {
    require(!part.empty(), "empty key segment in override: " + assignment);
    parts.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i]) || !(*node)[parts[i]].is_object()) (*node)[parts[i]] = json::object();
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = value;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path, ErrorKind::io);
  json j = json::parse(in, nullptr, false);
  require(!j.is_discarded(), "malformed JSON in " + path, ErrorKind::io);
  return j;
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path, ErrorKind::io);
  out << doc.dump(2) << '\n';
  require(out.good(), "write failed for " + path, ErrorKind::io);
}

void write_report_csv(const std::string& path, const InequalityReport& r) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path, ErrorKind::io);
  const auto grids = r.config.level_grids();
  out << "target,level,element,resolution,ratio\n";
  out.precision(17);
  for (const auto& e : r.evaluations)
    out << to_string(r.target) << ',' << e.level << ',' << e.element << ','
        << grids.at(e.level).resolution[0] << ',' << e.ratio << '\n';
  require(out.good(), "write failed for " + path, ErrorKind::io);
}

void write_solver_csv(const std::string& path, const SolverResult& r) {
  std::ofstream out(path);
  require(out.good(), "cannot write " + path, ErrorKind::io);
  out << "iter,E_norm,increment_norm,residual\n";
  out.precision(17);
  for (const auto& h : r.history)
    out << h.iter << ',' << h.e_norm << ',' << h.increment << ',' << h.residual << '\n';
  require(out.good(), "write failed for " + path, ErrorKind::io);
}

}  // namespace varns
