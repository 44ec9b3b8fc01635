#pragma once

// Stacking of country models into the global system, reduced-form solution
// and specification diagnostics.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gvar/common.hpp"
#include "gvar/dataio.hpp"
#include "gvar/varx.hpp"

namespace gvar {

struct GlobalVar {
  std::string unit;  // country label, or the dominant unit's label
  std::string name;
  friend bool operator==(const GlobalVar&, const GlobalVar&) = default;
};

/// Ordering of the global vector Y_t: countries in model order, each with its
/// domestic variables, then the dominant unit's variables last.
struct GlobalIndex {
  std::vector<GlobalVar> vars;
  std::optional<std::string> dominant_label;

  Index size() const { return static_cast<Index>(vars.size()); }
  std::optional<Index> find(const std::string& unit, const std::string& name) const;
  Index require(const std::string& unit, const std::string& name) const;
  /// Distinct non-dominant units carrying `name`.
  std::vector<std::string> countries_with(const std::string& name) const;
  std::string label(Index i) const { return vars[static_cast<std::size_t>(i)].unit + "." + vars[static_cast<std::size_t>(i)].name; }
};

struct LinkMatrix {
  std::string unit;
  Matrix w;  // (k + m + x) x K
  Index k = 0, m = 0, x = 0;
};

LinkMatrix link_matrix(const CountrySpec& spec, const WeightMatrix& w, const GlobalIndex& index);

LinkMatrix dominant_link(const DominantSpec& spec, const WeightMatrix& w, const GlobalIndex& index,
                         const std::vector<std::string>& model_countries);

struct StackedSystem {
  Matrix G0;
  std::vector<Matrix> G;  // lags 1..p
  Vector g0;
  Index lags() const { return static_cast<Index>(G.size()); }
};

/// Assembles G0, G_j and g0. Blocks occupy consecutive rows in the order
/// given (countries, then the dominant unit), matching the GlobalIndex.
StackedSystem stack(const std::vector<VarxEstimate>& estimates, const std::vector<LinkMatrix>& links,
                    const DominantEstimate* dominant = nullptr, const LinkMatrix* dominant_link = nullptr);

struct ReducedForm {
  Vector h0;
  std::vector<Matrix> H;
};

/// h0 = G0^-1 g0, H_j = G0^-1 G_j; refuses when cond(G0) >= 1e12.
ReducedForm solve(const Matrix& G0, const std::vector<Matrix>& G, const Vector& g0);

/// Sample covariance with divisor T_eff - dof_correction. Full matrix.
Matrix residual_covariance(const Matrix& u, int dof_correction = 0);

struct CrossCorrelation {
  double max_abs = 0.0;
  double mean_abs = 0.0;
};

/// Absolute residual correlations between variables of different units.
CrossCorrelation cross_unit_correlation(const Matrix& omega, const GlobalIndex& index);

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;  // sorted by decreasing modulus
  double max_modulus = 0.0;
  bool stable = false;
};

Matrix companion(const std::vector<Matrix>& H);
Spectrum companion_eigenvalues(const std::vector<Matrix>& H);

struct Autocorrelation {
  Matrix acf;  // (max_lag + 1) x K, row 0 is 1
  double band = 0.0;  // 2 / sqrt(T_eff)
  double share_inside() const;
};

Autocorrelation residual_autocorrelation(const Matrix& residuals, int max_lag);

/// Recursion y_t = h0 + sum_j H_j y_{t-j} + shock_t starting after `initial`
/// (rows are the p most recent observations, oldest first). Returns the
/// generated rows only.
Matrix simulate_forward(const Vector& h0, const std::vector<Matrix>& H, const Matrix& initial, const Matrix& shocks);

/// (I - sum_j H_j)^-1 h0.
Vector unconditional_mean(const Vector& h0, const std::vector<Matrix>& H);

struct GvarSolution {
  GlobalIndex index;
  Matrix G0;
  std::vector<Matrix> G;
  Vector g0;
  Vector h0;
  std::vector<Matrix> H;
  Matrix omega_u;
  Spectrum spectrum;
  Matrix residuals;          // reduced-form u_t on the common window
  Index window_start = 0;    // panel row of residuals.row(0)
};

}  // namespace gvar
