#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gvar/serialize.hpp"
#include "gvar/svg.hpp"

using namespace gvar;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gvar_test_serialize";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

GvarModel small_model() {
  DgpOptions o;
  o.seed = 6;
  o.n_common = 1;
  const SyntheticDgp d = make_dgp(o);
  return estimate_gvar(simulate(d, 120, 3), d.spec);
}

}  // namespace

TEST_CASE("matrices are stored row-major with their shape") {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6.25;
  const auto j = to_json(m);
  CHECK(j["rows"] == 2);
  CHECK(j["cols"] == 3);
  CHECK(j["data"][0][2] == 3.0);
  CHECK(j["data"][1][0] == 4.0);
  CHECK(matrix_from_json(j) == m);

  const Matrix empty(0, 4);
  const Matrix back = matrix_from_json(to_json(empty));
  CHECK(back.rows() == 0);
  CHECK(back.cols() == 4);

  nlohmann::json bad = j;
  bad["rows"] = 3;
  CHECK_THROWS_AS(matrix_from_json(bad), InputError);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::array()), InputError);

  Vector v(3);
  v << -1e-300, 0.1, 7;
  CHECK(vector_from_json(to_json(v)) == v);
}

TEST_CASE("doubles format to the shortest exact representation") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng) * std::pow(10.0, double(i % 20) - 10.0);
    const std::string s = format_double(x);
    double y = 0;
    std::from_chars(s.data(), s.data() + s.size(), y);
    CHECK(y == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("solution documents round trip exactly") {
  const GvarModel m = small_model();
  const GvarSolution& s = m.solution;
  const fs::path path = scratch("solution.json");
  write_json(to_json(s, m.dates), path.string());
  const nlohmann::json j = read_json(path.string());
  const GvarSolution r = solution_from_json(j);

  CHECK(r.index.size() == s.index.size());
  for (Index i = 0; i < s.index.size(); ++i) CHECK(r.index.label(i) == s.index.label(i));
  CHECK(r.index.dominant_label == s.index.dominant_label);
  CHECK(r.G0 == s.G0);
  REQUIRE(r.H.size() == s.H.size());
  for (std::size_t l = 0; l < s.H.size(); ++l) {
    CHECK(r.H[l] == s.H[l]);
    CHECK(r.G[l] == s.G[l]);
  }
  CHECK(r.h0 == s.h0);
  CHECK(r.g0 == s.g0);
  CHECK(r.omega_u == s.omega_u);
  CHECK(r.residuals == s.residuals);
  CHECK(r.window_start == s.window_start);
  CHECK(r.spectrum.max_modulus == s.spectrum.max_modulus);
  CHECK(j["stable"] == (s.spectrum.max_modulus < 1.0));

  const auto rd = residual_dates_from_json(j);
  REQUIRE(rd.size() == std::size_t(s.residuals.rows()));
  CHECK(rd.front().str() == m.dates[std::size_t(s.window_start)].str());
  CHECK(rd.back().str() == m.dates.back().str());

  // a re-serialized document is byte-identical
  write_json(to_json(r, m.dates), scratch("solution2.json").string());
  CHECK(slurp(path) == slurp(scratch("solution2.json")));

  nlohmann::json broken = j;
  broken.erase("G0");
  CHECK_THROWS_AS(solution_from_json(broken), InputError);
  CHECK_THROWS_AS(read_json(scratch("missing.json").string()), InputError);
}

TEST_CASE("report CSVs carry the documented headers") {
  IrfSet set;
  set.median = IrfArray(3, 2, 1);
  set.lower = set.median;
  set.upper = set.median;
  set.median.at(1, 1, 0) = 0.5;
  set.var_labels = {"DE.EPU", "DE.CISS"};
  set.shock_labels = {"DE.EPU"};
  write_irf_csv(set, scratch("irf.csv").string());
  auto irf = lines(scratch("irf.csv"));
  REQUIRE(irf.size() == 1 + 3 * 2);
  CHECK(irf[0] == "shock_country,shock_type,response_country,response_variable,horizon,median,lo68,hi68");
  CHECK(irf[5] == "DE,EPU,DE,CISS,1,0.5,0,0");

  Decomposition d;
  d.direct = Matrix::Constant(2, 1, 0.25);
  d.spillover = Matrix::Constant(2, 1, 0.5);
  d.total = d.direct + d.spillover;
  write_decomposition_csv(d, set.var_labels, set.shock_labels, scratch("dec.csv").string());
  auto dec = lines(scratch("dec.csv"));
  REQUIRE(dec.size() == 3);
  CHECK(dec[0] == "shock_country,shock_type,response_country,response_variable,window,total,direct,spillover");
  CHECK(dec[1] == "DE,EPU,DE,EPU,6,0.75,0.25,0.5");

  std::vector<FTestResult> ft(3);
  ft[0] = {"DE", "EPU", 3.5, 3, 172, 2.6571, 0.01, true};
  ft[1] = {"DE", "CISS", 1.0, 3, 172, 2.6571, 0.4, false};
  ft[2] = {"IT", "EPU", 0.5, 3, 174, 2.6565, 0.7, false};
  write_ftest_table(ft, scratch("ft.csv").string());
  auto tab = lines(scratch("ft.csv"));
  REQUIRE(tab.size() == 3);
  CHECK(tab[0] == "country,equation_EPU,equation_CISS,crit_5pct,crit_mismatch");
  CHECK(tab[1] == "DE,3.5000*,1.0000,2.6571,no");
  CHECK(tab[2] == "IT,0.5000,,2.6565,no");
  write_ftest_long(ft, scratch("ftl.csv").string());
  CHECK(lines(scratch("ftl.csv"))[0] == "country,equation,f_stat,df_num,df_den,critical_5pct,p_value,reject");

  const GvarModel m = small_model();
  const Autocorrelation ac = residual_autocorrelation(m.solution.residuals, 3);
  write_autocorrelation_csv(ac, m.solution.index, scratch("acf.csv").string());
  auto acf = lines(scratch("acf.csv"));
  CHECK(acf[0] == "variable,lag,autocorrelation,band");
  CHECK(acf.size() == 1 + std::size_t(ac.acf.size()));
  write_eigenvalues_csv(m.solution.spectrum, scratch("eig.csv").string());
  auto eig = lines(scratch("eig.csv"));
  CHECK(eig[0] == "index,real,imag,modulus");
  CHECK(eig.size() == 1 + m.solution.spectrum.eigenvalues.size());
}

TEST_CASE("charts are deterministic well-formed documents") {
  svg::Series s{"DE.EPU", {0.1, 0.4, -0.2}, {0.0, 0.2, -0.5}, {0.3, 0.6, 0.1}};
  const std::string a = svg::line_chart("response", {s});
  const std::string b = svg::line_chart("response", {s});
  CHECK(a == b);
  CHECK(a.rfind("<svg", 0) == 0);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(a.find("DE.EPU") != std::string::npos);

  const std::string h = svg::histogram("shocks", {0.1, 0.2, 0.2, 3.0, -1.0}, 4);
  CHECK(h == svg::histogram("shocks", {0.1, 0.2, 0.2, 3.0, -1.0}, 4));
  const std::string empty = svg::histogram("none", {}, 4);
  CHECK(empty.find("</svg>") != std::string::npos);

  const fs::path path = scratch("chart.svg");
  svg::save(a, path.string());
  CHECK(slurp(path) == a);
}
