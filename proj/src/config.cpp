#include "gvar/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace gvar {
namespace {

namespace fs = std::filesystem;

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

template <class T>
void get_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (j.at(key).is_string()) return {j.at(key).get<std::string>()};
  for (const auto& v : j.at(key)) out.push_back(v.get<std::string>());
  return out;
}

}  // namespace

std::uint64_t RunConfig::require_seed() const {
  if (!seed) throw InputError("config: seed is mandatory");
  return *seed;
}

RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir) {
  RunConfig c;
  try {
    get_if(j, "panel", c.panel);
    get_if(j, "meta", c.meta);
    get_if(j, "weights", c.weights);
    get_if(j, "benchmark", c.benchmark);
    c.exposures = string_list(j, "exposures");
    if (j.contains("bis")) {
      c.bis_claims = string_list(j.at("bis"), "claims");
      c.bis_liabilities = string_list(j.at("bis"), "liabilities");
    }

    std::map<std::string, std::pair<int, int>> groups;
    if (j.contains("lag_groups"))
      for (const auto& [name, g] : j.at("lag_groups").items())
        groups[name] = {g.value("p", 1), g.value("q", 0)};

    for (const auto& e : j.at("countries")) {
      CountrySpec s;
      s.country = e.at("country").get<std::string>();
      s.domestic_vars = string_list(e, "domestic");
      s.foreign_vars = string_list(e, "foreign");
      s.common_vars = string_list(e, "common");
      if (e.contains("group")) {
        const auto g = e.at("group").get<std::string>();
        auto it = groups.find(g);
        if (it == groups.end()) throw InputError("config: unknown lag group '" + g + "'");
        s.p = it->second.first;
        s.q = it->second.second;
      }
      get_if(e, "p", s.p);
      get_if(e, "q", s.q);
      c.countries.push_back(std::move(s));
    }

    if (j.contains("dominant") && !j.at("dominant").is_null()) {
      const auto& d = j.at("dominant");
      DominantSpec s;
      get_if(d, "label", s.label);
      s.vars = string_list(d, "vars");
      s.feedback_vars = string_list(d, "feedback");
      s.members = string_list(d, "members");
      get_if(d, "p", s.p);
      get_if(d, "q", s.q);
      c.dominant = std::move(s);
    }

    if (j.contains("targets"))
      for (const auto& t : j.at("targets")) {
        TargetSpec s;
        s.country = t.at("country").get<std::string>();
        const auto shocks = string_list(t, "shocks");
        if (!shocks.empty()) {
          if (shocks.size() != 2) throw InputError("config: each target needs exactly two shocks");
          s.first = shocks[0];
          s.second = shocks[1];
        }
        c.targets.push_back(std::move(s));
      }

    get_if(j, "sigma_h", c.sigma_h);
    get_if(j, "bootstrap", c.bootstrap);
    get_if(j, "max_draws", c.max_draws);
    get_if(j, "h_max", c.h_max);
    get_if(j, "window", c.window);
    get_if(j, "coverage", c.coverage);
    get_if(j, "cov_dof_correction", c.cov_dof_correction);
    get_if(j, "output", c.output);
    get_if(j, "jobs", c.jobs);
    get_if(j, "acf_lags", c.acf_lags);
    if (j.contains("scaling")) c.scaling = parse_scaling(j.at("scaling").get<std::string>());
    if (j.contains("block_layout")) c.layout = parse_layout(j.at("block_layout").get<std::string>());
    if (j.contains("draw_scheme")) c.scheme = parse_scheme(j.at("draw_scheme").get<std::string>());
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }

  c.panel = resolve(base_dir, c.panel);
  c.meta = resolve(base_dir, c.meta);
  c.weights = resolve(base_dir, c.weights);
  for (auto* list : {&c.exposures, &c.bis_claims, &c.bis_liabilities})
    for (auto& p : *list) p = resolve(base_dir, p);
  c.output = resolve(base_dir, c.output);

  if (c.countries.empty()) throw InputError("config: no countries");
  if (c.bis_claims.size() != c.bis_liabilities.size())
    throw InputError("config: bis claims and liabilities must pair up");
  if (!(c.sigma_h >= 0.0)) throw InputError("config: sigma_h must be non-negative");
  if (c.h_max < 0 || c.window < 0) throw InputError("config: negative horizon");
  if (!(c.coverage > 0.0 && c.coverage < 1.0)) throw InputError("config: coverage must lie in (0,1)");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed config " + path + ": " + e.what());
  }
  const auto base = fs::path(path).parent_path().string();
  return parse_config(j, base.empty() ? "." : base);
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json countries = nlohmann::json::array();
  for (const auto& s : c.countries)
    countries.push_back({{"country", s.country}, {"domestic", s.domestic_vars}, {"foreign", s.foreign_vars},
                         {"common", s.common_vars}, {"p", s.p}, {"q", s.q}});
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& t : c.targets) targets.push_back({{"country", t.country}, {"shocks", {t.first, t.second}}});
  nlohmann::json j{{"panel", c.panel},
                   {"meta", c.meta},
                   {"benchmark", c.benchmark},
                   {"countries", countries},
                   {"targets", targets},
                   {"sigma_h", c.sigma_h},
                   {"bootstrap", c.bootstrap},
                   {"max_draws", c.max_draws},
                   {"h_max", c.h_max},
                   {"window", c.window},
                   {"coverage", c.coverage},
                   {"scaling", to_string(c.scaling)},
                   {"block_layout", c.layout == BlockLayout::single ? "single" : "per_country"},
                   {"draw_scheme", c.scheme == DrawScheme::block_cayley ? "block_cayley" : "naive"},
                   {"cov_dof_correction", c.cov_dof_correction},
                   {"output", c.output},
                   {"jobs", c.jobs},
                   {"acf_lags", c.acf_lags}};
  if (!c.weights.empty()) j["weights"] = c.weights;
  if (!c.exposures.empty()) j["exposures"] = c.exposures;
  if (!c.bis_claims.empty()) j["bis"] = {{"claims", c.bis_claims}, {"liabilities", c.bis_liabilities}};
  if (c.dominant)
    j["dominant"] = {{"label", c.dominant->label}, {"vars", c.dominant->vars}, {"feedback", c.dominant->feedback_vars},
                     {"members", c.dominant->members}, {"p", c.dominant->p}, {"q", c.dominant->q}};
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

WeightMatrix load_weights(const RunConfig& c) {
  if (!c.weights.empty()) {
    const auto m = read_labeled_matrix(c.weights);
    WeightMatrix w{m.labels, m.values};
    w.validate(1e-9);
    return w;
  }
  std::vector<LabeledMatrix> years;
  for (const auto& p : c.exposures) years.push_back(read_labeled_matrix(p));
  for (std::size_t i = 0; i < c.bis_claims.size(); ++i) {
    auto claims = read_labeled_matrix(c.bis_claims[i]);
    const auto liab = read_labeled_matrix(c.bis_liabilities[i]);
    if (claims.labels != liab.labels) throw InputError("bis claims and liabilities label mismatch: " + c.bis_claims[i]);
    claims.values = bis_symmetrize(claims.values, liab.values);
    years.push_back(std::move(claims));
  }
  if (years.empty()) throw InputError("config: no weight source (weights, exposures or bis)");
  return build_weights(average_exposures(years));
}

Panel load_config_panel(const RunConfig& c) {
  if (c.panel.empty() || c.meta.empty()) throw InputError("config: panel and meta paths are required");
  return apply_transforms(load_panel(c.panel, c.meta), c.benchmark);
}

ModelSpec model_spec(const RunConfig& c, const Panel& panel) {
  ModelSpec spec;
  spec.countries = c.countries;
  spec.dominant = c.dominant;
  spec.cov_dof_correction = c.cov_dof_correction;
  const WeightMatrix full = load_weights(c);
  // restrict to the modelled countries; rows are renormalised
  std::vector<std::string> names = spec.country_labels();
  std::vector<Index> idx;
  for (const auto& n : names) {
    auto i = full.index_of(n);
    if (!i) throw InputError("country '" + n + "' missing from the weight matrix");
    idx.push_back(*i);
  }
  WeightMatrix w{names, Matrix::Zero(Index(names.size()), Index(names.size()))};
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b)
      if (a != b) w.w(Index(a), Index(b)) = full.w(idx[a], idx[b]);
    const double s = w.w.row(Index(a)).sum();
    if (!(s > 0.0)) throw InputError("isolated country: " + names[a]);
    w.w.row(Index(a)) /= s;
  }
  spec.weights = std::move(w);
  for (const auto& s : spec.countries) s.validate(panel);
  spec.validate();
  return spec;
}

std::vector<IdentTarget> ident_targets(const RunConfig& c, const GlobalIndex& index) {
  if (c.targets.empty()) throw InputError("config: no identification targets");
  std::vector<IdentTarget> out;
  std::set<std::string> seen;
  for (const auto& t : c.targets) {
    if (!seen.insert(t.country).second) throw InputError("config: duplicate target " + t.country);
    out.push_back(make_target(index, t.country, t.first, t.second, c.scaling));
  }
  return out;
}

IdentConfig ident_config(const RunConfig& c) {
  IdentConfig ic;
  ic.max_draws = c.max_draws;
  ic.sigma_h = c.sigma_h;
  ic.layout = c.layout;
  ic.scheme = c.scheme;
  return ic;
}

BootstrapConfig bootstrap_config(const RunConfig& c) {
  BootstrapConfig b;
  b.replications = c.bootstrap;
  b.ident = ident_config(c);
  b.h_max = c.h_max;
  b.coverage = c.coverage;
  b.window = c.window;
  b.jobs = c.jobs;
  b.seed = c.require_seed();
  return b;
}

}  // namespace gvar
