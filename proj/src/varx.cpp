#include "gvar/varx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gvar/linalg.hpp"

namespace gvar {
namespace {

constexpr double kMaxDesignCondition = 1e12;
constexpr Index kMinSampleSlack = 10;

std::string name_or(const std::vector<std::string>& names, std::size_t i, const std::string& fallback) {
  return i < names.size() ? names[i] : fallback + std::to_string(i + 1);
}

}  // namespace

Design build_design(const Matrix& domestic, const Matrix& foreign, const std::optional<Matrix>& common, int p, int q,
                    const std::vector<std::string>& domestic_names, const std::vector<std::string>& foreign_names,
                    const std::vector<std::string>& common_names) {
  if (p < 1 || q < 0) throw InputError("build_design: need p >= 1 and q >= 0");
  const Index T = domestic.rows();
  if (foreign.rows() != T || (common && common->rows() != T))
    throw InputError("build_design: domestic, foreign and common blocks have different lengths");
  const Index k = domestic.cols();
  const Index m = foreign.cols();
  const Index x = common ? common->cols() : 0;
  const Index L = std::max(p, q);
  const Index r = 1 + p * k + (q + 1) * m + (q + 1) * x;
  const Index t_eff = T - L;
  if (t_eff < r + kMinSampleSlack) {
    std::ostringstream msg;
    msg << "insufficient sample: T_eff = " << t_eff << " but " << r << " regressors need at least "
        << r + kMinSampleSlack << " observations";
    throw InputError(msg.str());
  }

  Design d;
  d.p = p;
  d.q = q;
  d.first_row = L;
  d.y = domestic.bottomRows(t_eff);
  d.z.resize(t_eff, r);
  d.labels.reserve(static_cast<std::size_t>(r));
  Index c = 0;
  d.z.col(c++).setOnes();
  d.labels.emplace_back("const");
  d.domestic_lags = {c, p * k};
  for (int lag = 1; lag <= p; ++lag)
    for (Index j = 0; j < k; ++j) {
      d.z.col(c++) = domestic.col(j).segment(L - lag, t_eff);
      d.labels.push_back(name_or(domestic_names, static_cast<std::size_t>(j), "y") + ".L" + std::to_string(lag));
    }
  d.foreign = {c, (q + 1) * m};
  for (int lag = 0; lag <= q; ++lag)
    for (Index j = 0; j < m; ++j) {
      d.z.col(c++) = foreign.col(j).segment(L - lag, t_eff);
      d.labels.push_back(name_or(foreign_names, static_cast<std::size_t>(j), "f") + "*.L" + std::to_string(lag));
    }
  d.common = {c, (q + 1) * x};
  for (int lag = 0; lag <= q && common; ++lag)
    for (Index j = 0; j < x; ++j) {
      d.z.col(c++) = common->col(j).segment(L - lag, t_eff);
      d.labels.push_back(name_or(common_names, static_cast<std::size_t>(j), "x") + ".L" + std::to_string(lag));
    }
  return d;
}

Design build_design(const Panel& panel, const CountrySpec& spec, const Matrix& foreign,
                    const std::optional<Matrix>& common) {
  spec.validate();
  return build_design(domestic_series(panel, spec), foreign, common, spec.p, spec.q, spec.domestic_vars,
                      spec.foreign_vars, spec.common_vars);
}

Matrix drop_columns(const Matrix& z, const std::vector<ColumnRange>& ranges) {
  std::vector<bool> keep(static_cast<std::size_t>(z.cols()), true);
  for (const auto& r : ranges)
    for (Index j = r.begin; j < r.begin + r.count; ++j) keep[static_cast<std::size_t>(j)] = false;
  const auto n = std::count(keep.begin(), keep.end(), true);
  Matrix out(z.rows(), static_cast<Index>(n));
  Index c = 0;
  for (Index j = 0; j < z.cols(); ++j)
    if (keep[static_cast<std::size_t>(j)]) out.col(c++) = z.col(j);
  return out;
}

OlsFit ols_fit(const Matrix& y, const Matrix& z, const std::vector<std::string>& labels) {
  if (y.rows() != z.rows()) throw InputError("ols_fit: Y and Z have different row counts");
  const Index r = z.cols();
  if (z.rows() <= r) throw InputError("ols_fit: fewer observations than regressors");
  auto label = [&](Index j) { return name_or(labels, static_cast<std::size_t>(j), "column "); };

  const Matrix zz = gram(z);
  Vector scale(r);
  for (Index j = 0; j < r; ++j) {
    if (!(zz(j, j) > 0.0)) throw NumericalError("rank-deficient design: column " + label(j) + " is identically zero");
    scale(j) = 1.0 / std::sqrt(zz(j, j));
  }
  const Matrix scaled = scale.asDiagonal() * zz * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(scaled);
  const Vector& ev = eig.eigenvalues();
  const double cond = ev(0) > 0.0 ? ev(r - 1) / ev(0) : std::numeric_limits<double>::infinity();
  if (!(cond < kMaxDesignCondition)) {
    std::ostringstream msg;
    msg << "rank-deficient design (scaled condition number " << cond << "); collinear columns:";
    const auto v = eig.eigenvectors().col(0);
    for (Index j = 0; j < r; ++j)
      if (std::abs(v(j)) > 0.1) msg << ' ' << label(j);
    throw NumericalError(msg.str());
  }

  const Matrix zy = crossprod(z, y);
  const Eigen::LDLT<Matrix> ldlt(scaled);
  const Matrix beta = scale.asDiagonal() * ldlt.solve(scale.asDiagonal() * zy);  // r x k

  OlsFit fit;
  fit.coef = beta.transpose();
  fit.residuals = y - matmul(z, beta);
  fit.rss = fit.residuals.colwise().squaredNorm().transpose();
  fit.dof = z.rows() - r;
  fit.zz_inv = scale.asDiagonal() * ldlt.solve(Matrix(scale.asDiagonal())) ;
  return fit;
}

VarxEstimate unpack_varx(const std::string& country, const Design& d, const OlsFit& fit) {
  VarxEstimate e;
  e.country = country;
  const Index k = d.y.cols();
  const Index m = d.q >= 0 ? d.foreign.count / (d.q + 1) : 0;
  const Index x = d.common.count / (d.q + 1);
  e.a = fit.coef.col(0);
  for (int lag = 0; lag < d.p; ++lag) e.B.push_back(fit.coef.middleCols(d.domestic_lags.begin + lag * k, k));
  for (int lag = 0; lag <= d.q; ++lag) e.C.push_back(fit.coef.middleCols(d.foreign.begin + lag * m, m));
  if (x > 0)
    for (int lag = 0; lag <= d.q; ++lag) e.D.push_back(fit.coef.middleCols(d.common.begin + lag * x, x));
  e.residuals = fit.residuals;
  e.rss_per_equation = fit.rss;
  e.dof = fit.dof;
  e.first_row = d.first_row;
  return e;
}

VarxEstimate estimate_varx(const Panel& panel, const CountrySpec& spec, const WeightMatrix& w) {
  spec.validate(panel);
  const Matrix foreign = foreign_series(panel, spec, w);
  std::optional<Matrix> common;
  if (!spec.common_vars.empty()) common = common_series(panel, spec.common_vars);
  const Design d = build_design(panel, spec, foreign, common);
  try {
    return unpack_varx(spec.country, d, ols_fit(d.y, d.z, d.labels));
  } catch (const NumericalError& e) {
    throw NumericalError(spec.country + ": " + e.what());
  }
}

DominantEstimate estimate_dominant(const Matrix& common, const Matrix& feedback, int p, int q) {
  if (q > p) throw InputError("dominant unit: q_x must not exceed p_x");
  const Design d = build_design(common, feedback, std::nullopt, p, q);
  const OlsFit fit = ols_fit(d.y, d.z, d.labels);
  const VarxEstimate v = unpack_varx("", d, fit);
  DominantEstimate e;
  e.m_x = v.a;
  e.N = v.B;
  e.P = v.C;
  e.residuals = v.residuals;
  e.rss_per_equation = v.rss_per_equation;
  e.dof = v.dof;
  e.first_row = v.first_row;
  return e;
}

std::vector<std::pair<std::string, double>> feedback_weights(const DominantSpec& spec, const WeightMatrix& w,
                                                             const std::vector<std::string>& model_countries,
                                                             const std::string& variable,
                                                             const std::vector<std::string>& available) {
  const auto& members = spec.members.empty() ? model_countries : spec.members;
  std::vector<std::pair<std::string, double>> out;
  double total = 0.0;
  for (const auto& [name, wh] : member_weights(w, members)) {
    if (std::find(available.begin(), available.end(), name) == available.end() || wh <= 0.0) continue;
    out.emplace_back(name, wh);
    total += wh;
  }
  if (out.empty()) throw InputError("feedback variable " + variable + " exists in no dominant-unit member");
  for (auto& [name, wh] : out) wh /= total;
  return out;
}

Matrix feedback_series(const Panel& panel, const DominantSpec& spec, const WeightMatrix& w,
                       const std::vector<std::string>& model_countries) {
  Matrix out = Matrix::Zero(panel.periods(), static_cast<Index>(spec.feedback_vars.size()));
  for (std::size_t f = 0; f < spec.feedback_vars.size(); ++f) {
    const auto& var = spec.feedback_vars[f];
    std::vector<std::string> available;
    for (const auto& m : panel.meta)
      if (m.role == Role::domestic && m.name == var) available.push_back(m.country);
    for (const auto& [name, wh] : feedback_weights(spec, w, model_countries, var, available))
      out.col(static_cast<Index>(f)) += wh * panel.values.col(panel.require(name, var));
  }
  return out;
}

}  // namespace gvar
