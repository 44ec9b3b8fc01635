#include "gvar/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gvar/varx.hpp"

namespace gvar {
namespace {

// Continued fraction for I_x(a,b), modified Lentz evaluation.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw InputError("incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("incomplete_beta: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  return incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2));
}

double f_quantile(double p, double d1, double d2) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("f_quantile: p must lie in (0,1)");
  double lo = 0.0, hi = 1.0;
  while (f_cdf(hi, d1, d2) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericalError("f_quantile: bracket overflow");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f_cdf(mid, d1, d2) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

FTestResult f_result(double rss_r, double rss_u, int df_num, int df_den) {
  if (df_num < 1 || df_den < 1) throw InputError("F-test needs positive degrees of freedom");
  FTestResult r;
  r.df_num = df_num;
  r.df_den = df_den;
  if (rss_r < rss_u * (1.0 - 1e-10))
    throw NumericalError("F-test: restricted RSS below unrestricted RSS; models are not nested");
  // nested fits: a negative difference within tolerance is rounding noise
  const double diff = std::max(0.0, rss_r - rss_u);
  r.f_stat = rss_u > 0.0 ? (diff / df_num) / (rss_u / df_den) : std::numeric_limits<double>::infinity();
  r.critical_5pct = f_quantile(0.95, df_num, df_den);
  r.p_value = 1.0 - f_cdf(r.f_stat, df_num, df_den);
  r.reject = r.f_stat > r.critical_5pct;
  return r;
}

std::vector<FTestResult> f_test(const Panel& panel, const CountrySpec& spec, const WeightMatrix& w, TestBlock block) {
  spec.validate(panel);
  const Matrix foreign = foreign_series(panel, spec, w);
  std::optional<Matrix> common;
  if (!spec.common_vars.empty()) common = common_series(panel, spec.common_vars);
  const Design d = build_design(panel, spec, foreign, common);
  const ColumnRange dropped = block == TestBlock::common ? d.common : d.foreign;
  if (dropped.count == 0)
    throw InputError(spec.country + ": no " + std::string(block == TestBlock::common ? "common" : "foreign") +
                     " regressors to test");
  const OlsFit unrestricted = ols_fit(d.y, d.z, d.labels);
  const OlsFit restricted = ols_fit(d.y, drop_columns(d.z, {dropped}));
  std::vector<FTestResult> out;
  for (Index e = 0; e < d.y.cols(); ++e) {
    FTestResult r = f_result(restricted.rss(e), unrestricted.rss(e), static_cast<int>(dropped.count),
                             static_cast<int>(unrestricted.dof));
    r.country = spec.country;
    r.equation = spec.domestic_vars[static_cast<std::size_t>(e)];
    out.push_back(r);
  }
  return out;
}

}  // namespace gvar
