#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "gvar/inference.hpp"
#include "gvar/sim.hpp"

using namespace gvar;

TEST_CASE("regularized incomplete beta against boost") {
  for (double a : {0.5, 1.0, 1.5, 3.0, 86.0})
    for (double b : {0.5, 2.0, 4.0, 83.5})
      for (double x : {0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0}) {
        const double ref = boost::math::ibeta(a, b, x);
        CHECK(std::abs(incomplete_beta(a, b, x) - ref) < 1e-12);
      }
  CHECK_THROWS_AS(incomplete_beta(1.0, 1.0, 1.5), InputError);
}

TEST_CASE("F distribution and quantile against boost") {
  for (double d1 : {1.0, 2.0, 3.0, 6.0, 10.0})
    for (double d2 : {5.0, 30.0, 172.0, 1000.0}) {
      const boost::math::fisher_f_distribution<double> f(d1, d2);
      for (double x : {0.1, 1.0, 2.5, 7.0}) CHECK(std::abs(f_cdf(x, d1, d2) - boost::math::cdf(f, x)) < 1e-12);
      for (double p : {0.01, 0.5, 0.95, 0.99}) {
        const double ref = boost::math::quantile(f, p);
        CHECK(std::abs(f_quantile(p, d1, d2) - ref) < 1e-9 * std::max(1.0, ref));
      }
    }
  CHECK(f_cdf(0.0, 3, 20) == 0.0);
  CHECK_THROWS_AS(f_quantile(1.0, 3, 20), InputError);
  CHECK_THROWS_AS(f_quantile(0.5, 0, 20), InputError);
}

TEST_CASE("5% critical values at sample degrees of freedom") {
  auto four = [](double v) { return std::round(v * 1e4) / 1e4; };
  CHECK(four(f_quantile(0.95, 3, 172)) == 2.6571);
  CHECK(four(f_quantile(0.95, 3, 174)) == 2.6565);
  CHECK(four(f_quantile(0.95, 6, 167)) == 2.1532);
}

TEST_CASE("F result bookkeeping") {
  const FTestResult r = f_result(12.0, 10.0, 2, 100);
  CHECK(r.f_stat == doctest::Approx(10.0));
  CHECK(r.df_num == 2);
  CHECK(r.df_den == 100);
  CHECK(r.reject == (r.f_stat > r.critical_5pct));
  CHECK(r.p_value == doctest::Approx(1.0 - f_cdf(10.0, 2, 100)));
  CHECK(f_result(10.0, 10.0, 2, 100).f_stat == 0.0);
  CHECK_THROWS_AS(f_result(9.0, 10.0, 2, 100), NumericalError);
}

namespace {

DgpOptions null_options() {
  DgpOptions o;
  o.seed = 31;
  o.n_common = 2;
  o.common_strength = 0.0;
  o.cross_impact = 0.0;
  o.q = 0;
  return o;
}

}  // namespace

TEST_CASE("nesting and scale invariance of the F statistic") {
  DgpOptions o = null_options();
  o.common_strength = 0.3;
  const SyntheticDgp dgp = make_dgp(o);
  const Panel p = simulate(dgp, 186, 4);
  const auto& spec = dgp.spec.countries[0];
  for (TestBlock b : {TestBlock::common, TestBlock::foreign}) {
    const auto res = f_test(p, spec, dgp.spec.weights, b);
    REQUIRE(res.size() == 2);
    for (const auto& r : res) CHECK(r.f_stat >= 0.0);
  }
  // common block with q = 0 and two common variables: m = 2
  CHECK(f_test_common(p, spec, dgp.spec.weights)[0].df_num == 2);

  Panel scaled = p;
  scaled.values.col(scaled.require("C1", "EPU")) *= 37.5;
  const auto a = f_test_common(p, spec, dgp.spec.weights);
  const auto b = f_test_common(scaled, spec, dgp.spec.weights);
  CHECK(b[0].f_stat == doctest::Approx(a[0].f_stat).epsilon(1e-9));
}

TEST_CASE("size and power of the common-variable test") {
  const SyntheticDgp null_dgp = make_dgp(null_options());
  DgpOptions alt = null_options();
  alt.common_strength = 1.0;
  const SyntheticDgp alt_dgp = make_dgp(alt);
  REQUIRE(alt_dgp.truth[0].D[0].row(0).norm() > 0.3);

  const int trials = 300;
  int size_hits = 0, power_hits = 0;
  for (int t = 0; t < trials; ++t) {
    const Panel pn = simulate(null_dgp, 186, 1000 + t);
    size_hits += f_test_common(pn, null_dgp.spec.countries[0], null_dgp.spec.weights)[0].reject;
    const Panel pa = simulate(alt_dgp, 186, 5000 + t);
    power_hits += f_test_common(pa, alt_dgp.spec.countries[0], alt_dgp.spec.weights)[0].reject;
  }
  const double size = double(size_hits) / trials;
  // three binomial standard errors around 5% at 300 trials
  CHECK(size > 0.05 - 3 * std::sqrt(0.05 * 0.95 / trials));
  CHECK(size < 0.05 + 3 * std::sqrt(0.05 * 0.95 / trials));
  CHECK(double(power_hits) / trials >= 0.95);
}

TEST_CASE("no regressors to test") {
  const SyntheticDgp dgp = make_dgp(null_options());
  const Panel p = simulate(dgp, 186, 2);
  CountrySpec bare = dgp.spec.countries[0];
  bare.common_vars.clear();
  CHECK_THROWS_AS(f_test_common(p, bare, dgp.spec.weights), InputError);
}
