#pragma once

// Country VARX models and the dominant-unit block, fitted equation by
// equation with ordinary least squares.

#include <optional>
#include <string>
#include <vector>

#include "gvar/common.hpp"
#include "gvar/dataio.hpp"

namespace gvar {

struct ColumnRange {
  Index begin = 0;
  Index count = 0;
};

/// Regression layout [1, Y lags 1..p, foreign lags 0..q, common lags 0..q].
struct Design {
  Matrix y;          // T_eff x k
  Matrix z;          // T_eff x r
  Index first_row;   // panel row of the first effective observation
  int p = 1;
  int q = 0;
  ColumnRange domestic_lags;
  ColumnRange foreign;
  ColumnRange common;
  std::vector<std::string> labels;

  Index t_eff() const { return y.rows(); }
  Index regressors() const { return z.cols(); }
};

/// Generic builder over raw blocks; `domestic`, `foreign` and `common` share
/// the same T rows. Throws when T_eff < r + 10.
Design build_design(const Matrix& domestic, const Matrix& foreign, const std::optional<Matrix>& common, int p, int q,
                    const std::vector<std::string>& domestic_names = {},
                    const std::vector<std::string>& foreign_names = {},
                    const std::vector<std::string>& common_names = {});

Design build_design(const Panel& panel, const CountrySpec& spec, const Matrix& foreign,
                    const std::optional<Matrix>& common);

/// Design with the listed column ranges removed (used by nested F-tests).
Matrix drop_columns(const Matrix& z, const std::vector<ColumnRange>& ranges);

struct OlsFit {
  Matrix coef;       // k x r
  Matrix residuals;  // T_eff x k
  Vector rss;        // per equation
  Index dof = 0;     // T_eff - r
  Matrix zz_inv;     // (Z'Z)^-1, for standard errors
};

/// Per-equation least squares. Rejects zero or collinear columns (scaled
/// condition number of Z'Z >= 1e12) with an error naming the columns.
OlsFit ols_fit(const Matrix& y, const Matrix& z, const std::vector<std::string>& labels = {});

struct VarxEstimate {
  std::string country;
  Vector a;
  std::vector<Matrix> B;  // p matrices k x k, lags 1..p
  std::vector<Matrix> C;  // q+1 matrices k x m, lags 0..q
  std::vector<Matrix> D;  // q+1 matrices k x x, empty without common variables
  Matrix residuals;
  Vector rss_per_equation;
  Index dof = 0;
  Index first_row = 0;

  Index k() const { return a.size(); }
};

struct DominantSpec {
  std::string label = "ECB";
  std::vector<std::string> vars;           // X, e.g. CMP, Liquidity, UMP
  std::vector<std::string> feedback_vars;  // names aggregated over members, e.g. EPU, CISS, spread
  std::vector<std::string> members;        // empty: all countries in the model
  int p = 2;
  int q = 1;
};

struct DominantEstimate {
  std::string label;
  Vector m_x;
  std::vector<Matrix> N;  // p_x matrices x x x
  std::vector<Matrix> P;  // q_x+1 matrices x x f
  Matrix residuals;
  Vector rss_per_equation;
  Index dof = 0;
  Index first_row = 0;
};

/// Unpacks an (already fitted) coefficient matrix into lag blocks.
VarxEstimate unpack_varx(const std::string& country, const Design& design, const OlsFit& fit);

VarxEstimate estimate_varx(const Panel& panel, const CountrySpec& spec, const WeightMatrix& w);

DominantEstimate estimate_dominant(const Matrix& common, const Matrix& feedback, int p = 2, int q = 1);

/// Weights behind one feedback aggregate, renormalised over the members that
/// carry the variable.
std::vector<std::pair<std::string, double>> feedback_weights(const DominantSpec& spec, const WeightMatrix& w,
                                                             const std::vector<std::string>& model_countries,
                                                             const std::string& variable,
                                                             const std::vector<std::string>& available);

/// Member-weighted aggregates of the feedback variables (T x f).
Matrix feedback_series(const Panel& panel, const DominantSpec& spec, const WeightMatrix& w,
                       const std::vector<std::string>& model_countries);

}  // namespace gvar
