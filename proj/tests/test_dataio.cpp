#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gvar/dataio.hpp"

using namespace gvar;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(GVAR_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gvar_test_dataio";
  fs::create_directories(dir);
  return (dir / name).string();
}

WeightMatrix three_by_three() {
  LabeledMatrix e{{"A", "B", "C"}, Matrix(3, 3)};
  e.values << 0, 3, 1, 2, 0, 2, 5, 0, 0;
  return build_weights(e);
}

}  // namespace

TEST_CASE("yield adjustment fixtures") {
  // extended-precision values for (1/12) ln(1 + y/100)
  CHECK(std::abs(yield_adjust(100.0) - 0.057762265046662109118) < 1e-15);
  CHECK(std::abs(yield_adjust(5.0) - 0.0040658470141193335888) < 1e-15);
  CHECK(yield_adjust(0.0) == 0.0);
  CHECK(std::abs(yield_adjust(-50.0) + 0.057762265046662109118) < 1e-15);
  CHECK(std::abs(yield_adjust(-99.5) + 0.44152644721233638979) < 1e-14);
  CHECK_THROWS_AS(yield_adjust(-100.0), InputError);
  CHECK_THROWS_AS(yield_adjust(-150.0), InputError);
}

TEST_CASE("yield adjustment against long double on random inputs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-20.0, 25.0);
  for (int i = 0; i < 100; ++i) {
    const double y = u(rng);
    const long double ref = std::log1pl(static_cast<long double>(y) / 100.0L) / 12.0L;
    CHECK(std::abs(yield_adjust(y) - static_cast<double>(ref)) < 1e-12);
  }
}

TEST_CASE("weights from exposures") {
  const WeightMatrix w = three_by_three();
  Matrix expect(3, 3);
  expect << 0, 0.75, 0.25, 0.5, 0, 0.5, 1, 0, 0;
  CHECK((w.w - expect).cwiseAbs().maxCoeff() < 1e-15);

  LabeledMatrix isolated{{"A", "B"}, Matrix(2, 2)};
  isolated.values << 0, 1, 0, 0;
  CHECK_THROWS_WITH_AS(build_weights(isolated), doctest::Contains("isolated"), InputError);

  LabeledMatrix negative{{"A", "B"}, Matrix(2, 2)};
  negative.values << 0, -1, 1, 0;
  CHECK_THROWS_AS(build_weights(negative), InputError);
}

TEST_CASE("randomized exposure fixtures give unit row sums") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1e6);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 25;
    LabeledMatrix e;
    for (int i = 0; i < n; ++i) e.labels.push_back("C" + std::to_string(i));
    e.values = Matrix::NullaryExpr(n, n, [&]() { return u(rng); });
    const WeightMatrix w = build_weights(e);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(w.w.row(i).sum() - 1.0) < 1e-12);
      CHECK(w.w(i, i) == 0.0);
    }
  }
}

TEST_CASE("exposure averaging and file round trip") {
  const auto a = read_labeled_matrix(data("exposures_2000.csv"));
  const auto b = read_labeled_matrix(data("exposures_2001.csv"));
  const auto avg = average_exposures({a, b});
  CHECK(avg.values(0, 1) == 2.0);
  CHECK(avg.values(1, 2) == 4.0);
  const auto w = build_weights(avg);
  CHECK(w.w(0, 1) == doctest::Approx(2.0 / 4.0));

  const auto path = tmp("exposures.csv");
  write_labeled_matrix(a, path);
  CHECK(slurp(path) == slurp(data("exposures_2000.csv")));

  LabeledMatrix other{{"A", "B", "D"}, Matrix::Zero(3, 3)};
  CHECK_THROWS_AS(average_exposures({a, other}), InputError);
}

TEST_CASE("BIS symmetrization") {
  Matrix claims = Matrix::Zero(3, 3), liab = Matrix::Zero(3, 3);
  claims(1, 2) = 4;
  liab(2, 1) = 2;
  const Matrix s = bis_symmetrize(claims, liab);
  CHECK(s(1, 2) == 3.0);
}

TEST_CASE("foreign weights renormalise over available counterparts") {
  const WeightMatrix w = three_by_three();
  auto fw = foreign_weights("A", "CISS", w, {"B"});
  REQUIRE(fw.size() == 1);
  CHECK(fw[0].first == "B");
  CHECK(fw[0].second == doctest::Approx(1.0));

  fw = foreign_weights("B", "EPU", w, {"A", "B", "C"});
  double total = 0;
  for (auto& [c, v] : fw) total += v;
  CHECK(total == doctest::Approx(1.0));
  CHECK_THROWS_WITH_AS(foreign_weights("C", "CISS", w, {"C"}), doctest::Contains("no counterpart"), InputError);
}

TEST_CASE("member weights for the dominant unit feedback") {
  const WeightMatrix w = three_by_three();
  const auto mw = member_weights(w, {"A", "B", "C"});
  // column sums of W: A 1.5, B 0.75, C 0.75
  REQUIRE(mw.size() == 3);
  CHECK(mw[0].second == doctest::Approx(0.5));
  CHECK(mw[1].second == doctest::Approx(0.25));
  CHECK(mw[2].second == doctest::Approx(0.25));
}

TEST_CASE("golden-file panel ingestion round trips") {
  const Panel p = load_panel(data("golden_panel.csv"), data("golden_meta.json"));
  CHECK(p.periods() == 4);
  CHECK(p.series() == 9);
  CHECK(p.dates.front().str() == "2003-01");
  CHECK(p.values(1, 0) == 99.75);

  const auto csv = tmp("panel.csv");
  const auto meta = tmp("meta.json");
  write_panel_csv(p, csv);
  write_meta(p.meta, meta);
  CHECK(slurp(csv) == slurp(data("golden_panel.csv")));
  const Panel q = load_panel(csv, meta);
  CHECK(q.values == p.values);
  CHECK(q.dates == p.dates);

  // transformed panels round trip too and are not transformed twice
  const Panel t = apply_transforms(p, "DE");
  write_panel_csv(t, csv);
  write_meta(t.meta, meta);
  const Panel t2 = apply_transforms(load_panel(csv, meta), "DE");
  CHECK(t2.values == t.values);
}

TEST_CASE("transforms: log, spread against benchmark") {
  const Panel p = load_panel(data("golden_panel.csv"), data("golden_meta.json"));
  const Panel t = apply_transforms(p, "DE");
  CHECK(t.series() == 8);
  CHECK_FALSE(t.find("DE", "spread").has_value());
  const Index it = t.require("IT", "spread");
  CHECK(t.values(0, it) == doctest::Approx(yield_adjust(4.75) - yield_adjust(4.1)).epsilon(1e-14));
  CHECK(t.values(0, t.require("DE", "EPU")) == doctest::Approx(std::log(101.5)));
  CHECK(t.values(2, t.require("DE", "CISS")) == 0.1875);
  CHECK_THROWS_AS(apply_transforms(p, "FR"), InputError);
}

TEST_CASE("ingestion errors") {
  CHECK_THROWS_WITH_AS(load_panel(data("gap_panel.csv"), data("gap_meta.json")), doctest::Contains("monthly"), InputError);
  CHECK_THROWS_AS(load_panel(data("ragged_panel.csv"), data("gap_meta.json")), InputError);
  CHECK_THROWS_AS(load_panel(data("bad_value_panel.csv"), data("gap_meta.json")), InputError);
  CHECK_THROWS_AS(load_panel(data("does_not_exist.csv"), data("gap_meta.json")), InputError);
  std::vector<SeriesMeta> meta{{"A.y", "A", "y", Role::domestic, Transform::none, false}};
  CHECK_THROWS_WITH_AS(read_panel_csv(data("gap_panel.csv"), meta), doctest::Contains("missing column"), InputError);
}

TEST_CASE("year-month parsing") {
  CHECK(YearMonth::parse("2018-06").month == 6);
  CHECK(YearMonth::parse("2018-06-01").year == 2018);
  CHECK(YearMonth{2003, 12}.next() == YearMonth{2004, 1});
  CHECK_THROWS_AS(YearMonth::parse("2018-13"), InputError);
  CHECK_THROWS_AS(YearMonth::parse("June 2018"), InputError);
}

TEST_CASE("country spec validation against the panel") {
  const Panel p = apply_transforms(load_panel(data("golden_panel.csv"), data("golden_meta.json")), "DE");
  CountrySpec de{"DE", {"EPU", "CISS"}, {"EPU", "CISS", "spread"}, {"CMP"}, 1, 0};
  CHECK_NOTHROW(de.validate(p));
  CountrySpec bad = de;
  bad.domestic_vars.push_back("GDP");
  CHECK_THROWS_AS(bad.validate(p), InputError);
  bad = de;
  bad.p = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);

  const Matrix fs = foreign_series(p, de, [] {
    LabeledMatrix e{{"DE", "IT", "US"}, Matrix(3, 3)};
    e.values << 0, 1, 3, 1, 0, 1, 1, 1, 0;
    return build_weights(e);
  }());
  CHECK(fs.cols() == 3);
  // only IT and US carry spreads after the benchmark column is dropped
  CHECK(fs(0, 2) == doctest::Approx(0.25 * p.values(0, p.require("IT", "spread")) +
                                    0.75 * p.values(0, p.require("US", "spread"))));
}
