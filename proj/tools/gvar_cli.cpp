// gvar: command-line front end.
//
//   gvar ingest    --panel P --meta M [--benchmark C] --out DIR
//   gvar weights   --exposures F... [--bis-claims F... --bis-liabilities F...] --out FILE
//   gvar estimate  --config C
//   gvar identify  --config C
//   gvar irf       --config C
//   gvar decompose --config C
//   gvar ftest     --config C
//   gvar simulate  --out DIR --seed S [--countries N --vars K --T T ...]
//
// Exit codes: 0 ok, 2 input error, 3 identification failure, 4 numerical failure.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>

#include <CLI11.hpp>

#include "gvar/config.hpp"
#include "gvar/kernels.hpp"
#include "gvar/serialize.hpp"
#include "gvar/svg.hpp"

namespace fs = std::filesystem;
using namespace gvar;

namespace {

struct Overrides {
  std::string config;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out;
  std::size_t bootstrap = 0;
  std::size_t max_draws = 0;
  double sigma_h = 0.0;
  std::string scaling, layout, scheme;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* bootstrap_opt = nullptr;
  CLI::Option* draws_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
};

void add_config_options(CLI::App* sub, Overrides& o) {
  sub->add_option("-c,--config", o.config, "run configuration (JSON)")->required();
  o.seed_opt = sub->add_option("--seed", o.seed, "master seed");
  o.jobs_opt = sub->add_option("-j,--jobs", o.jobs, "worker threads");
  sub->add_option("-o,--out", o.out, "output directory");
  o.bootstrap_opt = sub->add_option("--bootstrap", o.bootstrap, "bootstrap replications");
  o.draws_opt = sub->add_option("--max-draws", o.max_draws, "identification draws per replication");
  o.sigma_opt = sub->add_option("--sigma-h", o.sigma_h, "Cayley perturbation scale");
  sub->add_option("--scaling", o.scaling, "standardized | raw");
  sub->add_option("--block-layout", o.layout, "single | per_country");
  sub->add_option("--draw-scheme", o.scheme, "block_cayley | naive");
}

RunConfig resolve_config(const Overrides& o) {
  RunConfig c = load_config(o.config);
  if (o.seed_opt->count()) c.seed = o.seed;
  if (o.jobs_opt->count()) c.jobs = o.jobs;
  if (!o.out.empty()) c.output = o.out;
  if (o.bootstrap_opt->count()) c.bootstrap = o.bootstrap;
  if (o.draws_opt->count()) c.max_draws = o.max_draws;
  if (o.sigma_opt->count()) c.sigma_h = o.sigma_h;
  if (!o.scaling.empty()) c.scaling = parse_scaling(o.scaling);
  if (!o.layout.empty()) c.layout = parse_layout(o.layout);
  if (!o.scheme.empty()) c.scheme = parse_scheme(o.scheme);
  if (c.jobs == 0) throw InputError("--jobs must be at least 1");
  c.require_seed();
  fs::create_directories(c.output);
  return c;
}

std::string in_dir(const RunConfig& c, const std::string& name) { return (fs::path(c.output) / name).string(); }

std::string slug(std::string s) {
  for (char& ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
  return s;
}

// -- ingest ---------------------------------------------------------------

int cmd_ingest(const std::string& panel_path, const std::string& meta_path, const std::string& benchmark,
               const std::string& out) {
  const Panel raw = load_panel(panel_path, meta_path);
  const Panel panel = apply_transforms(raw, benchmark);
  fs::create_directories(out);
  write_panel_csv(panel, (fs::path(out) / "panel.csv").string());
  write_meta(panel.meta, (fs::path(out) / "meta.json").string());

  std::map<std::string, std::vector<std::string>> by_country;
  for (const auto& m : panel.meta) by_country[m.country].push_back(m.name);
  nlohmann::json report{{"periods", panel.periods()},
                        {"series", panel.series()},
                        {"first", panel.dates.front().str()},
                        {"last", panel.dates.back().str()},
                        {"benchmark", benchmark},
                        {"countries", by_country}};
  write_json(report, (fs::path(out) / "ingest_report.json").string());
  std::cout << "ingested " << panel.series() << " series x " << panel.periods() << " months ("
            << panel.dates.front().str() << " .. " << panel.dates.back().str() << ")\n";
  return 0;
}

// -- weights --------------------------------------------------------------

int cmd_weights(const std::vector<std::string>& exposures, const std::vector<std::string>& claims,
                const std::vector<std::string>& liabilities, const std::string& out) {
  RunConfig c;
  c.exposures = exposures;
  c.bis_claims = claims;
  c.bis_liabilities = liabilities;
  if (claims.size() != liabilities.size()) throw InputError("bis claims and liabilities must pair up");
  const WeightMatrix w = load_weights(c);
  write_labeled_matrix({w.countries, w.w}, out);
  std::cout << "weights for " << w.countries.size() << " countries -> " << out << '\n';
  return 0;
}

// -- estimate ---------------------------------------------------------------

GvarModel fit(const RunConfig& c) {
  const Panel panel = load_config_panel(c);
  return estimate_gvar(panel, model_spec(c, panel));
}

int cmd_estimate(const RunConfig& c) {
  const GvarModel model = fit(c);
  const auto& s = model.solution;
  write_json(to_json(model), in_dir(c, "model.json"));

  const int max_lag = std::min<int>(c.acf_lags, static_cast<int>(s.residuals.rows() / 4) - 1);
  const Autocorrelation acf = residual_autocorrelation(s.residuals, std::max(max_lag, 1));
  const CrossCorrelation cc = cross_unit_correlation(s.omega_u, s.index);
  write_eigenvalues_csv(s.spectrum, in_dir(c, "eigenvalues.csv"));
  svg::save(svg::eigenvalue_moduli(s.spectrum), in_dir(c, "eigenvalues.svg"));
  write_autocorrelation_csv(acf, s.index, in_dir(c, "autocorrelation.csv"));
  svg::save(svg::autocorrelation_bars(acf, s.index, s.index.size()), in_dir(c, "autocorrelation.svg"));

  nlohmann::json diag{{"K", s.index.size()},
                      {"lags", s.H.size()},
                      {"observations", s.residuals.rows()},
                      {"window_start", model.dates.at(static_cast<std::size_t>(s.window_start)).str()},
                      {"max_modulus", s.spectrum.max_modulus},
                      {"stable", s.spectrum.stable},
                      {"cross_correlation_max", cc.max_abs},
                      {"cross_correlation_mean", cc.mean_abs},
                      {"acf_band", acf.band},
                      {"acf_share_inside", acf.share_inside()},
                      {"kernels", kernels::active().name}};
  write_json(diag, in_dir(c, "diagnostics.json"));
  if (!s.spectrum.stable)
    std::cerr << "warning: estimated system is not stable (max modulus " << s.spectrum.max_modulus << ")\n";
  std::cout << "estimated K=" << s.index.size() << " p=" << s.H.size() << " max|lambda|=" << s.spectrum.max_modulus
            << (s.spectrum.stable ? " stable" : " UNSTABLE") << '\n';
  return 0;
}

// -- identify ---------------------------------------------------------------

int cmd_identify(const RunConfig& c) {
  const std::string model_path = in_dir(c, "model.json");
  if (!fs::exists(model_path)) throw InputError("no estimate artifact at " + model_path + " (run estimate first)");
  const auto doc = read_json(model_path);
  const GvarSolution s = solution_from_json(doc.at("solution"));
  const auto dates = residual_dates_from_json(doc.at("solution"));
  const auto targets = ident_targets(c, s.index);
  const IdentConfig ic = ident_config(c);

  const IdentResult r = identify(s.omega_u, targets, ic, c.require_seed(), 0, c.jobs);
  auto j = to_json(r, targets);
  j["scaling"] = to_string(c.scaling);
  j["sigma_h"] = c.sigma_h;
  write_json(j, in_dir(c, "identification.json"));
  if (r.accepted.empty())
    throw IdentificationError("no draw out of " + std::to_string(r.draws) +
                              " satisfied the magnitude restrictions; raise max_draws or lower sigma_h");

  const Matrix S = median_impact(r.accepted);
  const Matrix eps = recover_shocks(S, s.residuals);
  write_shocks_csv(dates, eps, targets, in_dir(c, "shocks.csv"));
  for (const auto& t : targets)
    for (int k = 0; k < 2; ++k) {
      const Index col = t.shock_cols[static_cast<std::size_t>(k)];
      std::vector<double> v(eps.col(col).data(), eps.col(col).data() + eps.rows());
      const auto& name = t.shock_names[static_cast<std::size_t>(k)];
      svg::save(svg::histogram(t.country + " " + name + " shock", v),
                in_dir(c, "shock_hist_" + slug(t.country) + "_" + slug(name) + ".svg"));
    }
  std::cout << "accepted " << r.accepted.size() << " of " << r.draws << " draws (success rate " << r.success_rate
            << ")\n";
  return 0;
}

// -- irf / decompose -----------------------------------------------------------

BootstrapResult run_bootstrap(const RunConfig& c, std::vector<IdentTarget>& targets) {
  const Panel panel = load_config_panel(c);
  const ModelSpec spec = model_spec(c, panel);
  targets = ident_targets(c, global_index(spec));
  return bootstrap_irf(panel, spec, targets, bootstrap_config(c));
}

nlohmann::json rates(const BootstrapResult& b) {
  std::size_t failed = 0;
  for (const auto& r : b.replications) failed += r.failed;
  return {{"replications", b.replications.size()},
          {"failed_replications", failed},
          {"accepted_draws", b.accepted_draws},
          {"attempted_draws", b.attempted_draws},
          {"per_draw_success_rate", b.per_draw_success_rate},
          {"per_replication_success_rate", b.per_replication_success_rate},
          {"pooled", b.total.pooled}};
}

Index find_label(const std::vector<std::string>& labels, const std::string& want) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == want) return static_cast<Index>(i);
  return -1;
}

int cmd_irf(const RunConfig& c) {
  std::vector<IdentTarget> targets;
  const BootstrapResult b = run_bootstrap(c, targets);
  write_irf_csv(b.total, in_dir(c, "irf.csv"));
  write_irf_csv(b.direct, in_dir(c, "irf_direct.csv"));
  write_json(rates(b), in_dir(c, "bootstrap.json"));
  // own-variable responses of each target shock
  for (std::size_t s = 0; s < b.total.shock_labels.size(); ++s) {
    const auto& label = b.total.shock_labels[s];
    const Index k = find_label(b.total.var_labels, label);
    if (k < 0) continue;
    svg::save(svg::irf_chart(b.total, k, static_cast<Index>(s)), in_dir(c, "irf_" + slug(label) + ".svg"));
  }
  std::cout << "irf: " << b.total.pooled << " pooled draws, per-draw success " << b.per_draw_success_rate << '\n';
  return 0;
}

int cmd_decompose(const RunConfig& c) {
  std::vector<IdentTarget> targets;
  const BootstrapResult b = run_bootstrap(c, targets);
  const auto& d = b.decomposition;
  write_decomposition_csv(d, b.total.var_labels, b.total.shock_labels, in_dir(c, "decomposition.csv"));
  write_json(rates(b), in_dir(c, "bootstrap.json"));
  for (Index s = 0; s < d.total.cols(); ++s) {
    std::vector<double> direct(d.direct.col(s).data(), d.direct.col(s).data() + d.direct.rows());
    std::vector<double> spill(d.spillover.col(s).data(), d.spillover.col(s).data() + d.spillover.rows());
    const auto& label = b.total.shock_labels[static_cast<std::size_t>(s)];
    svg::save(svg::stacked_bars("Peak response to " + label, b.total.var_labels, direct, spill),
              in_dir(c, "decomposition_" + slug(label) + ".svg"));
  }
  std::cout << "decomposition over window " << d.window << " written\n";
  return 0;
}

// -- ftest ----------------------------------------------------------------

int cmd_ftest(const RunConfig& c) {
  const Panel panel = load_config_panel(c);
  const ModelSpec spec = model_spec(c, panel);
  std::vector<FTestResult> common, foreign;
  for (const auto& cs : spec.countries) {
    if (!cs.common_vars.empty()) {
      auto r = f_test_common(panel, cs, spec.weights);
      common.insert(common.end(), r.begin(), r.end());
    }
    if (!cs.foreign_vars.empty()) {
      auto r = f_test_foreign(panel, cs, spec.weights);
      foreign.insert(foreign.end(), r.begin(), r.end());
    }
  }
  auto emit = [&](const std::vector<FTestResult>& r, const std::string& name) {
    if (r.empty()) return;
    write_ftest_table(r, in_dir(c, "ftest_" + name + ".csv"));
    write_ftest_long(r, in_dir(c, "ftest_" + name + "_long.csv"));
    std::vector<std::string> labels;
    std::vector<double> ratio;
    for (const auto& x : r) {
      labels.push_back(x.country + "." + x.equation);
      ratio.push_back(x.f_stat / x.critical_5pct);
    }
    svg::save(svg::bar_chart("F statistic / 5% critical value (" + name + " block)", labels, ratio, 1.0),
              in_dir(c, "ftest_" + name + ".svg"));
    std::size_t stars = 0;
    for (const auto& x : r) stars += x.reject;
    std::cout << name << " block: " << stars << " of " << r.size() << " equations reject at 5%\n";
  };
  emit(common, "common");
  emit(foreign, "foreign");
  if (common.empty() && foreign.empty()) throw InputError("ftest: no country has common or foreign regressors");
  return 0;
}

// -- simulate ---------------------------------------------------------------

int cmd_simulate(const DgpOptions& o, Index T, const std::string& out) {
  const SyntheticDgp dgp = make_dgp(o);
  const Panel panel = simulate(dgp, T, o.seed);
  fs::create_directories(out);
  const auto path = [&](const char* n) { return (fs::path(out) / n).string(); };
  write_panel_csv(panel, path("panel.csv"));
  write_meta(panel.meta, path("meta.json"));
  write_labeled_matrix({dgp.spec.weights.countries, dgp.spec.weights.w}, path("exposures.csv"));
  write_json(to_json(dgp), path("dgp.json"));

  RunConfig c;
  c.panel = "panel.csv";
  c.meta = "meta.json";
  c.exposures = {"exposures.csv"};
  c.countries = dgp.spec.countries;
  c.dominant = dgp.spec.dominant;
  c.targets = {{dgp.target.country, dgp.target.shock_names[0], dgp.target.shock_names[1]}};
  c.seed = o.seed;
  c.output = "results";
  c.bootstrap = 100;
  write_json(to_json(c), path("config.json"));

  std::vector<svg::Series> series;
  for (Index k = 0; k < std::min<Index>(panel.series(), 4); ++k) {
    svg::Series s;
    s.label = panel.meta[static_cast<std::size_t>(k)].country + "." + panel.meta[static_cast<std::size_t>(k)].name;
    s.y.assign(panel.values.col(k).data(), panel.values.col(k).data() + panel.periods());
    series.push_back(std::move(s));
  }
  svg::save(svg::line_chart("Simulated series", series, "month"), path("panel.svg"));
  std::cout << "simulated " << panel.series() << " series x " << T << " months -> " << out << '\n';
  return 0;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::input: return 2;
    case ErrorKind::identification: return 3;
    case ErrorKind::numerical: return 4;
  }
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global VAR toolkit with magnitude-restricted uncertainty shocks"};
  app.require_subcommand(1);

  std::string panel_path, meta_path, benchmark, out;
  auto* ingest = app.add_subcommand("ingest", "validate and transform a panel");
  ingest->add_option("--panel", panel_path)->required();
  ingest->add_option("--meta", meta_path)->required();
  ingest->add_option("--benchmark", benchmark, "reference country for spreads");
  ingest->add_option("-o,--out", out)->required();

  std::vector<std::string> exposures, claims, liabilities;
  std::string weights_out;
  auto* weights = app.add_subcommand("weights", "build a trade/financial weight matrix");
  weights->add_option("--exposures", exposures, "annual exposure matrices (CSV)");
  weights->add_option("--bis-claims", claims);
  weights->add_option("--bis-liabilities", liabilities);
  weights->add_option("-o,--out", weights_out)->required();

  std::map<std::string, Overrides> over;
  std::map<std::string, CLI::App*> config_cmds;
  for (const char* name : {"estimate", "identify", "irf", "decompose", "ftest"}) {
    auto* sub = app.add_subcommand(name);
    add_config_options(sub, over[name]);
    config_cmds[name] = sub;
  }
  config_cmds["estimate"]->description("estimate every block and solve the global model");
  config_cmds["identify"]->description("identify the target shocks from an estimated model");
  config_cmds["irf"]->description("bootstrap impulse responses");
  config_cmds["decompose"]->description("split peak responses into direct and spillover parts");
  config_cmds["ftest"]->description("relevance F-tests of common and foreign regressors");

  DgpOptions dgp;
  Index T = 186;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "synthetic panel with known ground truth");
  sim->add_option("--countries", dgp.n_countries);
  sim->add_option("--vars", dgp.vars_per_country);
  sim->add_option("--p", dgp.p);
  sim->add_option("--q", dgp.q);
  sim->add_option("--common", dgp.n_common, "dominant-unit variables");
  sim->add_option("--margin", dgp.margin);
  sim->add_option("--foreign-strength", dgp.foreign_strength);
  sim->add_option("--common-strength", dgp.common_strength);
  sim->add_option("--cross-impact", dgp.cross_impact);
  sim->add_option("--T", T);
  sim->add_option("--seed", dgp.seed)->required();
  sim->add_option("-o,--out", sim_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*ingest) return cmd_ingest(panel_path, meta_path, benchmark, out);
    if (*weights) return cmd_weights(exposures, claims, liabilities, weights_out);
    if (*sim) return cmd_simulate(dgp, T, sim_out);
    for (auto& [name, sub] : config_cmds) {
      if (!*sub) continue;
      const RunConfig c = resolve_config(over[name]);
      if (name == "estimate") return cmd_estimate(c);
      if (name == "identify") return cmd_identify(c);
      if (name == "irf") return cmd_irf(c);
      if (name == "decompose") return cmd_decompose(c);
      if (name == "ftest") return cmd_ftest(c);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
