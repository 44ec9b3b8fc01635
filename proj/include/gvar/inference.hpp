#pragma once

// Nested F-tests on blocks of regressors in the country equations.

#include <string>
#include <vector>

#include "gvar/dataio.hpp"

namespace gvar {

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

double f_cdf(double x, double df_num, double df_den);

/// Inverse of f_cdf in x, for p in (0,1).
double f_quantile(double p, double df_num, double df_den);

struct FTestResult {
  std::string country;
  std::string equation;
  double f_stat = 0.0;
  int df_num = 0;
  int df_den = 0;
  double critical_5pct = 0.0;
  double p_value = 1.0;
  bool reject = false;
};

/// F = ((RSS_r - RSS_u)/m) / (RSS_u / df_den).
FTestResult f_result(double rss_restricted, double rss_unrestricted, int df_num, int df_den);

enum class TestBlock { common, foreign };

/// One result per domestic equation of `spec`.
std::vector<FTestResult> f_test(const Panel& panel, const CountrySpec& spec, const WeightMatrix& w, TestBlock block);

inline std::vector<FTestResult> f_test_common(const Panel& panel, const CountrySpec& spec, const WeightMatrix& w) {
  return f_test(panel, spec, w, TestBlock::common);
}

inline std::vector<FTestResult> f_test_foreign(const Panel& panel, const CountrySpec& spec, const WeightMatrix& w) {
  return f_test(panel, spec, w, TestBlock::foreign);
}

}  // namespace gvar
