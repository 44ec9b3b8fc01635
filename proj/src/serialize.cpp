#include "gvar/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace gvar {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  return out;
}

std::pair<std::string, std::string> split_label(const std::string& label) {
  const auto dot = label.find('.');
  if (dot == std::string::npos) return {label, ""};
  return {label.substr(0, dot), label.substr(dot + 1)};
}

std::string band_suffix(double coverage) { return std::to_string(static_cast<int>(std::lround(coverage * 100.0))); }

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

nlohmann::json to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("matrix JSON: expected an object with rows, cols and data");
  try {
    const Index r = j.at("rows").get<Index>();
    const Index c = j.at("cols").get<Index>();
    Matrix m(r, c);
    const auto& data = j.at("data");
    if (static_cast<Index>(data.size()) != r) throw InputError("matrix JSON: row count mismatch");
    for (Index i = 0; i < r; ++i) {
      if (static_cast<Index>(data[static_cast<std::size_t>(i)].size()) != c) throw InputError("matrix JSON: ragged row");
      for (Index k = 0; k < c; ++k) m(i, k) = data[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("matrix JSON: ") + e.what());
  }
}

nlohmann::json to_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from_json(const nlohmann::json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
  return v;
}

static nlohmann::json matrices(const std::vector<Matrix>& ms) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& m : ms) a.push_back(to_json(m));
  return a;
}

static std::vector<Matrix> matrices_from(const nlohmann::json& j) {
  std::vector<Matrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

nlohmann::json to_json(const GvarSolution& s, const std::vector<YearMonth>& dates) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : s.index.vars) vars.push_back({{"unit", v.unit}, {"name", v.name}});
  nlohmann::json eig = nlohmann::json::array();
  for (const auto& z : s.spectrum.eigenvalues) eig.push_back({z.real(), z.imag()});
  nlohmann::json j{
      {"variables", vars},
      {"dominant_unit", s.index.dominant_label ? nlohmann::json(*s.index.dominant_label) : nlohmann::json(nullptr)},
      {"K", s.index.size()},
      {"lags", s.H.size()},
      {"G0", to_json(s.G0)},
      {"G", matrices(s.G)},
      {"g0", to_json(s.g0)},
      {"h0", to_json(s.h0)},
      {"H", matrices(s.H)},
      {"omega_u", to_json(s.omega_u)},
      {"eigenvalues", eig},
      {"max_modulus", s.spectrum.max_modulus},
      {"stable", s.spectrum.stable},
      {"window_start", s.window_start},
      {"residuals", to_json(s.residuals)},
  };
  if (!dates.empty()) {
    nlohmann::json d = nlohmann::json::array();
    for (Index t = s.window_start; t < static_cast<Index>(dates.size()); ++t) d.push_back(dates[static_cast<std::size_t>(t)].str());
    j["residual_dates"] = d;
  }
  return j;
}

GvarSolution solution_from_json(const nlohmann::json& j) {
  try {
    GvarSolution s;
    for (const auto& v : j.at("variables")) s.index.vars.push_back({v.at("unit").get<std::string>(), v.at("name").get<std::string>()});
    if (!j.at("dominant_unit").is_null()) s.index.dominant_label = j.at("dominant_unit").get<std::string>();
    s.G0 = matrix_from_json(j.at("G0"));
    s.G = matrices_from(j.at("G"));
    s.g0 = vector_from_json(j.at("g0"));
    s.h0 = vector_from_json(j.at("h0"));
    s.H = matrices_from(j.at("H"));
    s.omega_u = matrix_from_json(j.at("omega_u"));
    for (const auto& z : j.at("eigenvalues")) s.spectrum.eigenvalues.emplace_back(z[0].get<double>(), z[1].get<double>());
    s.spectrum.max_modulus = j.at("max_modulus").get<double>();
    s.spectrum.stable = j.at("stable").get<bool>();
    s.window_start = j.at("window_start").get<Index>();
    s.residuals = matrix_from_json(j.at("residuals"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed solution document: ") + e.what());
  }
}

std::vector<YearMonth> residual_dates_from_json(const nlohmann::json& j) {
  std::vector<YearMonth> out;
  if (j.contains("residual_dates"))
    for (const auto& d : j.at("residual_dates")) out.push_back(YearMonth::parse(d.get<std::string>()));
  return out;
}

nlohmann::json to_json(const VarxEstimate& e) {
  return {{"country", e.country}, {"k", e.k()},          {"a", to_json(e.a)},
          {"B", matrices(e.B)},   {"C", matrices(e.C)},   {"D", matrices(e.D)},
          {"rss", to_json(e.rss_per_equation)},           {"dof", e.dof},
          {"first_row", e.first_row}};
}

nlohmann::json to_json(const DominantEstimate& e) {
  return {{"label", e.label}, {"m_x", to_json(e.m_x)}, {"N", matrices(e.N)}, {"P", matrices(e.P)},
          {"rss", to_json(e.rss_per_equation)}, {"dof", e.dof}, {"first_row", e.first_row}};
}

nlohmann::json to_json(const GvarModel& m) {
  nlohmann::json est = nlohmann::json::array();
  for (const auto& e : m.estimates) est.push_back(to_json(e));
  nlohmann::json j{{"solution", to_json(m.solution, m.dates)}, {"estimates", est}};
  if (m.dominant) j["dominant"] = to_json(*m.dominant);
  return j;
}

nlohmann::json to_json(const IdentResult& r, const std::vector<IdentTarget>& targets) {
  nlohmann::json t = nlohmann::json::array();
  for (const auto& x : targets)
    t.push_back({{"country", x.country},
                 {"shock_cols", {x.shock_cols[0], x.shock_cols[1]}},
                 {"shock_names", {x.shock_names[0], x.shock_names[1]}},
                 {"scaling", to_string(x.scaling)}});
  nlohmann::json draws = nlohmann::json::array();
  for (const auto& d : r.accepted)
    draws.push_back({{"draw_index", d.draw_index}, {"bootstrap_index", d.bootstrap_index}, {"S", to_json(d.S)},
                     {"Q_tilde", to_json(d.Q_tilde)}});
  return {{"targets", t}, {"draws", r.draws}, {"accepted", r.accepted.size()}, {"success_rate", r.success_rate},
          {"accepted_draws", draws}};
}

nlohmann::json to_json(const SyntheticDgp& d) {
  const auto& o = d.options;
  nlohmann::json truth = nlohmann::json::array();
  for (const auto& e : d.truth) truth.push_back(to_json(e));
  nlohmann::json j{{"options",
                    {{"n_countries", o.n_countries}, {"vars_per_country", o.vars_per_country}, {"p", o.p}, {"q", o.q},
                     {"seed", o.seed}, {"margin", o.margin}, {"n_common", o.n_common},
                     {"foreign_strength", o.foreign_strength}, {"common_strength", o.common_strength},
                     {"feedback_strength", o.feedback_strength}, {"cross_impact", o.cross_impact},
                     {"contemporaneous_common", o.contemporaneous_common}, {"max_modulus", o.max_modulus}}},
                   {"weights", {{"countries", d.spec.weights.countries}, {"w", to_json(d.spec.weights.w)}}},
                   {"truth", truth},
                   {"S_true", to_json(d.S_true)},
                   {"target", {{"country", d.target.country}, {"shock_cols", {d.target.shock_cols[0], d.target.shock_cols[1]}}}},
                   {"solution", to_json(d.solution)}};
  if (d.dominant_truth) j["dominant_truth"] = to_json(*d.dominant_truth);
  return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  auto out = open_out(path);
  out << j.dump(1) << '\n';
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_irf_csv(const IrfSet& set, const std::string& path) {
  auto out = open_out(path);
  const std::string b = band_suffix(set.coverage);
  out << "shock_country,shock_type,response_country,response_variable,horizon,median,lo" << b << ",hi" << b << '\n';
  for (Index s = 0; s < set.median.shocks; ++s) {
    const auto [sc, st] = split_label(set.shock_labels.at(static_cast<std::size_t>(s)));
    for (Index k = 0; k < set.median.vars; ++k) {
      const auto [rc, rv] = split_label(set.var_labels.at(static_cast<std::size_t>(k)));
      for (Index h = 0; h < set.median.horizons; ++h)
        out << sc << ',' << st << ',' << rc << ',' << rv << ',' << h << ',' << format_double(set.median.at(h, k, s))
            << ',' << format_double(set.lower.at(h, k, s)) << ',' << format_double(set.upper.at(h, k, s)) << '\n';
    }
  }
}

void write_decomposition_csv(const Decomposition& d, const std::vector<std::string>& var_labels,
                             const std::vector<std::string>& shock_labels, const std::string& path) {
  auto out = open_out(path);
  out << "shock_country,shock_type,response_country,response_variable,window,total,direct,spillover\n";
  for (Index s = 0; s < d.total.cols(); ++s) {
    const auto [sc, st] = split_label(shock_labels.at(static_cast<std::size_t>(s)));
    for (Index k = 0; k < d.total.rows(); ++k) {
      const auto [rc, rv] = split_label(var_labels.at(static_cast<std::size_t>(k)));
      out << sc << ',' << st << ',' << rc << ',' << rv << ',' << d.window << ',' << format_double(d.total(k, s)) << ','
          << format_double(d.direct(k, s)) << ',' << format_double(d.spillover(k, s)) << '\n';
    }
  }
}

void write_shocks_csv(const std::vector<YearMonth>& dates, const Matrix& shocks,
                      const std::vector<IdentTarget>& targets, const std::string& path) {
  auto out = open_out(path);
  out << "date,country,shock_type,value\n";
  for (const auto& t : targets)
    for (int s = 0; s < 2; ++s)
      for (Index r = 0; r < shocks.rows(); ++r)
        out << (r < static_cast<Index>(dates.size()) ? dates[static_cast<std::size_t>(r)].str() : std::to_string(r)) << ','
            << t.country << ',' << t.shock_names[static_cast<std::size_t>(s)] << ','
            << format_double(shocks(r, t.shock_cols[static_cast<std::size_t>(s)])) << '\n';
}

void write_ftest_table(const std::vector<FTestResult>& results, const std::string& path) {
  std::vector<std::string> countries, equations;
  std::map<std::pair<std::string, std::string>, const FTestResult*> cell;
  for (const auto& r : results) {
    if (std::find(countries.begin(), countries.end(), r.country) == countries.end()) countries.push_back(r.country);
    if (std::find(equations.begin(), equations.end(), r.equation) == equations.end()) equations.push_back(r.equation);
    cell[{r.country, r.equation}] = &r;
  }
  auto out = open_out(path);
  out << "country";
  for (const auto& e : equations) out << ",equation_" << e;
  out << ",crit_5pct,crit_mismatch\n";
  for (const auto& c : countries) {
    out << c;
    std::vector<std::string> crits;
    for (const auto& e : equations) {
      out << ',';
      auto it = cell.find({c, e});
      if (it == cell.end()) continue;
      out << fixed4(it->second->f_stat) << (it->second->reject ? "*" : "");
      const std::string crit = fixed4(it->second->critical_5pct);
      if (std::find(crits.begin(), crits.end(), crit) == crits.end()) crits.push_back(crit);
    }
    out << ',';
    for (std::size_t i = 0; i < crits.size(); ++i) out << (i ? "/" : "") << crits[i];
    out << ',' << (crits.size() > 1 ? "yes" : "no") << '\n';
  }
}

void write_ftest_long(const std::vector<FTestResult>& results, const std::string& path) {
  auto out = open_out(path);
  out << "country,equation,f_stat,df_num,df_den,critical_5pct,p_value,reject\n";
  for (const auto& r : results)
    out << r.country << ',' << r.equation << ',' << format_double(r.f_stat) << ',' << r.df_num << ',' << r.df_den << ','
        << format_double(r.critical_5pct) << ',' << format_double(r.p_value) << ',' << (r.reject ? 1 : 0) << '\n';
}

void write_autocorrelation_csv(const Autocorrelation& a, const GlobalIndex& index, const std::string& path) {
  auto out = open_out(path);
  out << "variable,lag,autocorrelation,band\n";
  for (Index c = 0; c < a.acf.cols(); ++c)
    for (Index l = 0; l < a.acf.rows(); ++l)
      out << index.label(c) << ',' << l << ',' << format_double(a.acf(l, c)) << ',' << format_double(a.band) << '\n';
}

void write_eigenvalues_csv(const Spectrum& s, const std::string& path) {
  auto out = open_out(path);
  out << "index,real,imag,modulus\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    out << i << ',' << format_double(s.eigenvalues[i].real()) << ',' << format_double(s.eigenvalues[i].imag()) << ','
        << format_double(std::abs(s.eigenvalues[i])) << '\n';
}

}  // namespace gvar
