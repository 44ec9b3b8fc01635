#include "gvar/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gvar {
namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

double parse_number(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw InputError("unparseable number '" + s + "' in " + context);
  return v;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string to_string(Role r) {
  switch (r) {
    case Role::domestic: return "domestic";
    case Role::common: return "common";
    case Role::dominant: return "dominant-unit";
  }
  return "domestic";
}

std::string to_string(Transform t) {
  switch (t) {
    case Transform::none: return "none";
    case Transform::log: return "log";
    case Transform::yield_adjust: return "yield-adjust";
    case Transform::spread: return "spread";
  }
  return "none";
}

Role parse_role(const std::string& s) {
  if (s == "domestic") return Role::domestic;
  if (s == "common") return Role::common;
  if (s == "dominant-unit" || s == "dominant") return Role::dominant;
  throw InputError("unknown series role '" + s + "'");
}

Transform parse_transform(const std::string& s) {
  if (s == "none" || s.empty()) return Transform::none;
  if (s == "log") return Transform::log;
  if (s == "yield-adjust" || s == "yield_adjust") return Transform::yield_adjust;
  if (s == "spread") return Transform::spread;
  throw InputError("unknown transform '" + s + "'");
}

std::string YearMonth::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

YearMonth YearMonth::parse(const std::string& s) {
  // YYYY-MM, optionally followed by -DD which is ignored
  if (s.size() < 7 || s[4] != '-') throw InputError("unparseable date '" + s + "'");
  int y = 0, m = 0;
  auto r1 = std::from_chars(s.data(), s.data() + 4, y);
  auto r2 = std::from_chars(s.data() + 5, s.data() + 7, m);
  if (r1.ec != std::errc() || r1.ptr != s.data() + 4 || r2.ec != std::errc() || r2.ptr != s.data() + 7 || m < 1 ||
      m > 12 || (s.size() > 7 && s[7] != '-'))
    throw InputError("unparseable date '" + s + "'");
  return {y, m};
}

// -- Panel ------------------------------------------------------------------

std::optional<Index> Panel::find(const std::string& country, const std::string& name) const {
  for (std::size_t k = 0; k < meta.size(); ++k)
    if (meta[k].country == country && meta[k].name == name) return static_cast<Index>(k);
  return std::nullopt;
}

std::optional<Index> Panel::find_common(const std::string& name) const {
  for (std::size_t k = 0; k < meta.size(); ++k)
    if (meta[k].role != Role::domestic && meta[k].name == name) return static_cast<Index>(k);
  return std::nullopt;
}

Index Panel::require(const std::string& country, const std::string& name) const {
  auto k = find(country, name);
  if (!k) throw InputError("series " + country + "." + name + " not found in panel");
  return *k;
}

void Panel::validate() const {
  if (values.rows() != static_cast<Index>(dates.size()) || values.cols() != static_cast<Index>(meta.size()))
    throw InputError("panel dimensions inconsistent with dates/meta");
  std::set<std::pair<std::string, std::string>> keys;
  std::set<std::string> common_names;
  for (const auto& m : meta) {
    if (!keys.insert({m.country, m.name}).second)
      throw InputError("duplicate (country,name) pair " + m.country + "." + m.name);
    if (m.role != Role::domestic && !common_names.insert(m.name).second)
      throw InputError("common series '" + m.name + "' declared more than once");
  }
  for (const auto& m : meta)
    if (m.role == Role::domestic && common_names.count(m.name))
      throw InputError("common series '" + m.name + "' has a country-specific duplicate");
  for (std::size_t t = 1; t < dates.size(); ++t)
    if (dates[t].ordinal() != dates[t - 1].ordinal() + 1)
      throw InputError("non-monthly spacing between " + dates[t - 1].str() + " and " + dates[t].str());
  if (!values.allFinite()) throw InputError("panel contains missing or non-finite values");
}

// -- ingestion ----------------------------------------------------------------

std::vector<SeriesMeta> load_meta(const std::string& meta_path) {
  std::ifstream in(meta_path);
  if (!in) throw InputError("cannot open file: " + meta_path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed meta file " + meta_path + ": " + e.what());
  }
  const nlohmann::json& list = doc.is_object() ? doc.at("series") : doc;
  std::vector<SeriesMeta> meta;
  try {
    for (const auto& e : list) {
      SeriesMeta m;
      m.column = e.at("column").get<std::string>();
      m.country = e.value("country", std::string{});
      m.name = e.at("name").get<std::string>();
      m.role = parse_role(e.value("role", std::string{"domestic"}));
      m.transform = parse_transform(e.value("transform", std::string{"none"}));
      m.transformed = e.value("transformed", false);
      meta.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed meta file " + meta_path + ": " + e.what());
  }
  return meta;
}

void write_meta(const std::vector<SeriesMeta>& meta, const std::string& meta_path) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& m : meta) {
    nlohmann::json e;
    e["column"] = m.column;
    e["country"] = m.country;
    e["name"] = m.name;
    e["role"] = to_string(m.role);
    e["transform"] = to_string(m.transform);
    if (m.transformed) e["transformed"] = true;
    list.push_back(std::move(e));
  }
  std::ofstream out(meta_path);
  if (!out) throw InputError("cannot write file: " + meta_path);
  out << nlohmann::json{{"series", list}}.dump(2) << '\n';
}

Panel read_panel_csv(const std::string& csv_path, const std::vector<SeriesMeta>& meta) {
  const auto rows = read_csv_rows(csv_path);
  if (rows.empty()) throw InputError("empty panel file: " + csv_path);
  const auto& header = rows.front();
  if (header.empty() || header.front() != "date") throw InputError("panel header must start with 'date'");
  for (std::size_t r = 1; r < rows.size(); ++r)
    if (rows[r].size() != header.size())
      throw InputError("ragged rows: line " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                       " fields, header has " + std::to_string(header.size()));

  std::vector<std::size_t> source(meta.size());
  for (std::size_t k = 0; k < meta.size(); ++k) {
    auto it = std::find(header.begin() + 1, header.end(), meta[k].column);
    if (it == header.end()) throw InputError("missing column '" + meta[k].column + "' in " + csv_path);
    source[k] = static_cast<std::size_t>(it - header.begin());
  }

  Panel panel;
  panel.meta = meta;
  const Index T = static_cast<Index>(rows.size() - 1);
  panel.values.resize(T, static_cast<Index>(meta.size()));
  panel.dates.reserve(static_cast<std::size_t>(T));
  for (Index t = 0; t < T; ++t) {
    const auto& row = rows[static_cast<std::size_t>(t + 1)];
    panel.dates.push_back(YearMonth::parse(row[0]));
    for (std::size_t k = 0; k < meta.size(); ++k) {
      const std::string& cell = row[source[k]];
      if (cell.empty() || cell == "NA" || cell == "NaN")
        throw InputError("missing value for " + meta[k].column + " at " + row[0]);
      panel.values(t, static_cast<Index>(k)) = parse_number(cell, meta[k].column + " at " + row[0]);
    }
  }
  panel.validate();
  return panel;
}

Panel load_panel(const std::string& csv_path, const std::string& meta_path) {
  return read_panel_csv(csv_path, load_meta(meta_path));
}

void write_panel_csv(const Panel& panel, const std::string& csv_path) {
  std::ofstream out(csv_path);
  if (!out) throw InputError("cannot write file: " + csv_path);
  out << "date";
  for (const auto& m : panel.meta) out << ',' << m.column;
  out << '\n';
  for (Index t = 0; t < panel.periods(); ++t) {
    out << panel.dates[static_cast<std::size_t>(t)].str();
    for (Index k = 0; k < panel.series(); ++k) out << ',' << format_number(panel.values(t, k));
    out << '\n';
  }
}

LabeledMatrix read_labeled_matrix(const std::string& csv_path) {
  const auto rows = read_csv_rows(csv_path);
  if (rows.empty()) throw InputError("empty matrix file: " + csv_path);
  LabeledMatrix m;
  m.labels.assign(rows.front().begin() + 1, rows.front().end());
  const auto n = m.labels.size();
  if (rows.size() != n + 1) throw InputError("exposure matrix " + csv_path + " is not square");
  m.values.resize(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != n + 1) throw InputError("ragged rows in " + csv_path);
    if (row[0] != m.labels[i]) throw InputError("row label '" + row[0] + "' does not match column label '" + m.labels[i] + "'");
    for (std::size_t j = 0; j < n; ++j)
      m.values(static_cast<Index>(i), static_cast<Index>(j)) = parse_number(row[j + 1], csv_path);
  }
  return m;
}

void write_labeled_matrix(const LabeledMatrix& m, const std::string& csv_path) {
  std::ofstream out(csv_path);
  if (!out) throw InputError("cannot write file: " + csv_path);
  out << "country";
  for (const auto& l : m.labels) out << ',' << l;
  out << '\n';
  for (Index i = 0; i < m.values.rows(); ++i) {
    out << m.labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < m.values.cols(); ++j) out << ',' << format_number(m.values(i, j));
    out << '\n';
  }
}

// -- transforms -------------------------------------------------------------

double yield_adjust(double yield_percent) {
  if (!(yield_percent > -100.0)) throw InputError("yield_adjust: yield must exceed -100 percent");
  return std::log1p(yield_percent / 100.0) / 12.0;
}

Panel apply_transforms(const Panel& panel, const std::string& benchmark) {
  Panel out = panel;
  std::vector<Index> drop;
  for (Index k = 0; k < panel.series(); ++k) {
    auto& m = out.meta[static_cast<std::size_t>(k)];
    if (m.transformed || m.transform == Transform::none) continue;
    auto col = out.values.col(k);
    switch (m.transform) {
      case Transform::log:
        for (Index t = 0; t < col.size(); ++t) {
          if (!(col(t) > 0.0))
            throw InputError("log transform of non-positive value in " + m.column + " at " +
                             panel.dates[static_cast<std::size_t>(t)].str());
          col(t) = std::log(col(t));
        }
        break;
      case Transform::yield_adjust:
        for (Index t = 0; t < col.size(); ++t) col(t) = yield_adjust(col(t));
        break;
      case Transform::spread: {
        if (m.country == benchmark) {
          drop.push_back(k);
          break;
        }
        auto b = panel.find(benchmark, m.name);
        if (!b) throw InputError("spread " + m.column + " needs benchmark series " + benchmark + "." + m.name);
        for (Index t = 0; t < col.size(); ++t)
          col(t) = yield_adjust(panel.values(t, k)) - yield_adjust(panel.values(t, *b));
        break;
      }
      case Transform::none: break;
    }
    m.transformed = true;
  }
  if (drop.empty()) return out;
  Panel kept;
  kept.dates = out.dates;
  kept.values.resize(out.periods(), out.series() - static_cast<Index>(drop.size()));
  Index j = 0;
  for (Index k = 0; k < out.series(); ++k) {
    if (std::find(drop.begin(), drop.end(), k) != drop.end()) continue;
    kept.values.col(j++) = out.values.col(k);
    kept.meta.push_back(out.meta[static_cast<std::size_t>(k)]);
  }
  return kept;
}

// -- weights ----------------------------------------------------------------

std::optional<Index> WeightMatrix::index_of(const std::string& country) const {
  auto it = std::find(countries.begin(), countries.end(), country);
  if (it == countries.end()) return std::nullopt;
  return static_cast<Index>(it - countries.begin());
}

void WeightMatrix::validate(double tol) const {
  const Index n = w.rows();
  if (w.cols() != n || static_cast<Index>(countries.size()) != n) throw InputError("weight matrix is not N x N");
  for (Index i = 0; i < n; ++i) {
    if (w(i, i) != 0.0) throw InputError("weight matrix diagonal must be zero (" + countries[static_cast<std::size_t>(i)] + ")");
    if (std::abs(w.row(i).sum() - 1.0) > tol) throw InputError("weight row " + countries[static_cast<std::size_t>(i)] + " does not sum to one");
    if ((w.row(i).array() < 0.0).any() || (w.row(i).array() > 1.0).any())
      throw InputError("weight entries must lie in [0,1]");
  }
}

LabeledMatrix average_exposures(const std::vector<LabeledMatrix>& years) {
  if (years.empty()) throw InputError("no exposure matrices to average");
  LabeledMatrix out = years.front();
  for (std::size_t y = 1; y < years.size(); ++y) {
    if (years[y].labels != out.labels) throw InputError("exposure matrices have different country labels");
    out.values += years[y].values;
  }
  out.values /= static_cast<double>(years.size());
  return out;
}

WeightMatrix build_weights(const LabeledMatrix& exposures) {
  const Index n = exposures.values.rows();
  if (exposures.values.cols() != n || static_cast<Index>(exposures.labels.size()) != n)
    throw InputError("exposure matrix must be square with one label per row");
  if ((exposures.values.array() < 0.0).any()) throw InputError("exposures must be nonnegative");
  WeightMatrix out;
  out.countries = exposures.labels;
  out.w = exposures.values;
  out.w.diagonal().setZero();
  for (Index i = 0; i < n; ++i) {
    const double s = out.w.row(i).sum();
    if (!(s > 0.0)) throw InputError("isolated country " + out.countries[static_cast<std::size_t>(i)] + ": no positive off-diagonal exposure");
    out.w.row(i) /= s;
  }
  return out;
}

Matrix bis_symmetrize(const Matrix& claims, const Matrix& liabilities) {
  if (claims.rows() != liabilities.rows() || claims.cols() != liabilities.cols() || claims.rows() != claims.cols())
    throw InputError("bis_symmetrize: claims and liabilities must be square with the same shape");
  if ((claims.array() < 0.0).any() || (liabilities.array() < 0.0).any())
    throw InputError("bis_symmetrize: inputs must be nonnegative");
  return (claims + liabilities.transpose()) / 2.0;
}

std::vector<std::pair<std::string, double>> foreign_weights(const std::string& country, const std::string& variable,
                                                            const WeightMatrix& w,
                                                            const std::vector<std::string>& available) {
  auto i = w.index_of(country);
  if (!i) throw InputError("country " + country + " missing from weight matrix");
  std::vector<std::pair<std::string, double>> out;
  double total = 0.0;
  for (Index h = 0; h < w.w.cols(); ++h) {
    if (h == *i) continue;
    const auto& name = w.countries[static_cast<std::size_t>(h)];
    if (std::find(available.begin(), available.end(), name) == available.end()) continue;
    const double wh = w.w(*i, h);
    if (wh <= 0.0) continue;
    out.emplace_back(name, wh);
    total += wh;
  }
  if (out.empty() || !(total > 0.0))
    throw InputError("foreign variable " + variable + "* for " + country + " exists in no counterparty");
  for (auto& [name, wh] : out) wh /= total;
  return out;
}

Matrix foreign_series(const Panel& panel, const CountrySpec& spec, const WeightMatrix& w) {
  Matrix out = Matrix::Zero(panel.periods(), static_cast<Index>(spec.foreign_vars.size()));
  for (std::size_t f = 0; f < spec.foreign_vars.size(); ++f) {
    const auto& var = spec.foreign_vars[f];
    std::vector<std::string> available;
    for (const auto& m : panel.meta)
      if (m.role == Role::domestic && m.name == var) available.push_back(m.country);
    for (const auto& [name, wh] : foreign_weights(spec.country, var, w, available))
      out.col(static_cast<Index>(f)) += wh * panel.values.col(panel.require(name, var));
  }
  return out;
}

Matrix common_series(const Panel& panel, const std::vector<std::string>& names) {
  Matrix out(panel.periods(), static_cast<Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    auto k = panel.find_common(names[j]);
    if (!k) throw InputError("common series '" + names[j] + "' not found in panel");
    out.col(static_cast<Index>(j)) = panel.values.col(*k);
  }
  return out;
}

Matrix domestic_series(const Panel& panel, const CountrySpec& spec) {
  Matrix out(panel.periods(), static_cast<Index>(spec.domestic_vars.size()));
  for (std::size_t j = 0; j < spec.domestic_vars.size(); ++j)
    out.col(static_cast<Index>(j)) = panel.values.col(panel.require(spec.country, spec.domestic_vars[j]));
  return out;
}

std::vector<std::pair<std::string, double>> member_weights(const WeightMatrix& w,
                                                           const std::vector<std::string>& members) {
  std::vector<Index> idx;
  for (const auto& m : members) {
    auto i = w.index_of(m);
    if (!i) throw InputError("dominant-unit member " + m + " missing from weight matrix");
    idx.push_back(*i);
  }
  std::vector<std::pair<std::string, double>> out;
  double total = 0.0;
  for (Index h : idx) {
    double s = 0.0;
    for (Index i : idx) s += w.w(i, h);
    out.emplace_back(w.countries[static_cast<std::size_t>(h)], s);
    total += s;
  }
  for (auto& [name, s] : out) s = total > 0.0 ? s / total : 1.0 / static_cast<double>(out.size());
  return out;
}

// -- CountrySpec ---------------------------------------------------------------

void CountrySpec::validate() const {
  if (p < 1) throw InputError(country + ": domestic lag order p must be >= 1");
  if (q < 0) throw InputError(country + ": foreign lag order q must be >= 0");
  if (q > p) throw InputError(country + ": foreign lag order q must not exceed p");
  if (domestic_vars.empty()) throw InputError(country + ": no domestic variables");
}

void CountrySpec::validate(const Panel& panel) const {
  validate();
  for (const auto& v : domestic_vars) panel.require(country, v);
  for (const auto& v : foreign_vars) {
    bool found = false;
    for (const auto& m : panel.meta) found = found || (m.role == Role::domestic && m.name == v && m.country != country);
    if (!found) throw InputError(country + ": foreign variable " + v + " exists in no counterparty");
  }
  for (const auto& v : common_vars)
    if (!panel.find_common(v)) throw InputError(country + ": common variable " + v + " not in panel");
}

}  // namespace gvar
