#include "gvar/gvar_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gvar/linalg.hpp"

namespace gvar {
namespace {

constexpr double kMaxG0Condition = 1e12;

Matrix structural_row_block(Index k, const Matrix* c0, const Matrix* d0) {
  const Index m = c0 ? c0->cols() : 0;
  const Index x = d0 ? d0->cols() : 0;
  Matrix g(k, k + m + x);
  g.leftCols(k).setIdentity();
  if (m) g.middleCols(k, m) = -*c0;
  if (x) g.rightCols(x) = -*d0;
  return g;
}

}  // namespace

std::optional<Index> GlobalIndex::find(const std::string& unit, const std::string& name) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].unit == unit && vars[i].name == name) return static_cast<Index>(i);
  return std::nullopt;
}

Index GlobalIndex::require(const std::string& unit, const std::string& name) const {
  auto i = find(unit, name);
  if (!i) throw InputError("unresolved variable " + unit + "." + name + " in global ordering");
  return *i;
}

std::vector<std::string> GlobalIndex::countries_with(const std::string& name) const {
  std::vector<std::string> out;
  for (const auto& v : vars)
    if (v.name == name && (!dominant_label || v.unit != *dominant_label) &&
        std::find(out.begin(), out.end(), v.unit) == out.end())
      out.push_back(v.unit);
  return out;
}

LinkMatrix link_matrix(const CountrySpec& spec, const WeightMatrix& w, const GlobalIndex& index) {
  LinkMatrix link;
  link.unit = spec.country;
  link.k = static_cast<Index>(spec.domestic_vars.size());
  link.m = static_cast<Index>(spec.foreign_vars.size());
  link.x = static_cast<Index>(spec.common_vars.size());
  link.w = Matrix::Zero(link.k + link.m + link.x, index.size());
  Index row = 0;
  for (const auto& v : spec.domestic_vars) link.w(row++, index.require(spec.country, v)) = 1.0;
  for (const auto& v : spec.foreign_vars) {
    for (const auto& [h, wh] : foreign_weights(spec.country, v, w, index.countries_with(v)))
      link.w(row, index.require(h, v)) = wh;
    ++row;
  }
  for (const auto& v : spec.common_vars) {
    if (!index.dominant_label) throw InputError("unresolved common variable " + v + ": no dominant unit");
    link.w(row++, index.require(*index.dominant_label, v)) = 1.0;
  }
  return link;
}

LinkMatrix dominant_link(const DominantSpec& spec, const WeightMatrix& w, const GlobalIndex& index,
                         const std::vector<std::string>& model_countries) {
  LinkMatrix link;
  link.unit = spec.label;
  link.k = static_cast<Index>(spec.vars.size());
  link.m = static_cast<Index>(spec.feedback_vars.size());
  link.w = Matrix::Zero(link.k + link.m, index.size());
  Index row = 0;
  for (const auto& v : spec.vars) link.w(row++, index.require(spec.label, v)) = 1.0;
  for (const auto& v : spec.feedback_vars) {
    for (const auto& [h, wh] : feedback_weights(spec, w, model_countries, v, index.countries_with(v)))
      link.w(row, index.require(h, v)) = wh;
    ++row;
  }
  return link;
}

StackedSystem stack(const std::vector<VarxEstimate>& estimates, const std::vector<LinkMatrix>& links,
                    const DominantEstimate* dominant, const LinkMatrix* dlink) {
  if (estimates.size() != links.size()) throw InputError("stack: one link matrix per country estimate required");
  if ((dominant == nullptr) != (dlink == nullptr)) throw InputError("stack: dominant estimate and link must come together");
  if (links.empty() && !dlink) throw InputError("stack: empty system");
  const Index K = links.empty() ? dlink->w.cols() : links.front().w.cols();

  std::size_t p = 0;
  for (const auto& e : estimates) p = std::max({p, e.B.size(), e.C.size() - 1});
  if (dominant) p = std::max({p, dominant->N.size(), dominant->P.size() - 1});
  if (p == 0) p = 1;

  StackedSystem s;
  s.G0 = Matrix::Zero(K, K);
  s.G.assign(p, Matrix::Zero(K, K));
  s.g0 = Vector::Zero(K);
  Index row = 0;
  auto check = [&](const LinkMatrix& l, Index k, Index m, Index x, const std::string& unit) {
    if (l.w.cols() != K || l.k != k || l.m != m || l.x != x || l.w.rows() != k + m + x)
      throw InputError("stack: dimension mismatch between estimate and link matrix for " + unit);
    if (row + k > K) throw InputError("stack: more equations than global variables");
  };

  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const auto& e = estimates[i];
    const auto& l = links[i];
    const Index k = e.k();
    const Index m = e.C.empty() ? 0 : e.C.front().cols();
    const Index x = e.D.empty() ? 0 : e.D.front().cols();
    check(l, k, m, x, e.country);
    s.G0.middleRows(row, k) = structural_row_block(k, m ? &e.C[0] : nullptr, x ? &e.D[0] : nullptr) * l.w;
    for (std::size_t j = 1; j <= p; ++j) {
      Matrix g = Matrix::Zero(k, k + m + x);
      if (j <= e.B.size()) g.leftCols(k) = e.B[j - 1];
      if (j < e.C.size() && m) g.middleCols(k, m) = e.C[j];
      if (j < e.D.size() && x) g.rightCols(x) = e.D[j];
      s.G[j - 1].middleRows(row, k) = g * l.w;
    }
    s.g0.segment(row, k) = e.a;
    row += k;
  }
  if (dominant) {
    const Index k = dominant->m_x.size();
    const Index f = dominant->P.front().cols();
    check(*dlink, k, f, 0, dlink->unit);
    s.G0.middleRows(row, k) = structural_row_block(k, &dominant->P[0], nullptr) * dlink->w;
    for (std::size_t j = 1; j <= p; ++j) {
      Matrix g = Matrix::Zero(k, k + f);
      if (j <= dominant->N.size()) g.leftCols(k) = dominant->N[j - 1];
      if (j < dominant->P.size()) g.rightCols(f) = dominant->P[j];
      s.G[j - 1].middleRows(row, k) = g * dlink->w;
    }
    s.g0.segment(row, k) = dominant->m_x;
    row += k;
  }
  if (row != K) throw InputError("stack: equations do not cover the global vector");
  return s;
}

ReducedForm solve(const Matrix& G0, const std::vector<Matrix>& G, const Vector& g0) {
  const double cond = condition_number(G0);
  if (!(cond < kMaxG0Condition)) {
    std::ostringstream msg;
    msg << "G0 is not invertible (condition estimate " << cond << ")";
    throw NumericalError(msg.str());
  }
  const auto lu = G0.partialPivLu();
  ReducedForm rf;
  rf.h0 = lu.solve(g0);
  rf.H.reserve(G.size());
  for (const auto& g : G) rf.H.push_back(lu.solve(g));
  return rf;
}

Matrix residual_covariance(const Matrix& u, int dof_correction) {
  const Index T = u.rows();
  const Index K = u.cols();
  if (T <= K) throw NumericalError("covariance rank-deficient: T_eff = " + std::to_string(T) + " <= K = " + std::to_string(K));
  const Matrix centered = u.rowwise() - u.colwise().mean();
  Matrix omega = gram(centered) / static_cast<double>(T - dof_correction);
  return (omega + omega.transpose()) / 2.0;
}

CrossCorrelation cross_unit_correlation(const Matrix& omega, const GlobalIndex& index) {
  CrossCorrelation out;
  std::size_t pairs = 0;
  for (Index i = 0; i < omega.rows(); ++i)
    for (Index j = i + 1; j < omega.cols(); ++j) {
      if (index.vars[static_cast<std::size_t>(i)].unit == index.vars[static_cast<std::size_t>(j)].unit) continue;
      const double r = std::abs(omega(i, j) / std::sqrt(omega(i, i) * omega(j, j)));
      out.max_abs = std::max(out.max_abs, r);
      out.mean_abs += r;
      ++pairs;
    }
  if (pairs) out.mean_abs /= static_cast<double>(pairs);
  return out;
}

Matrix companion(const std::vector<Matrix>& H) {
  if (H.empty()) throw InputError("companion: no lag matrices");
  const Index K = H.front().rows();
  const Index p = static_cast<Index>(H.size());
  Matrix c = Matrix::Zero(K * p, K * p);
  for (Index j = 0; j < p; ++j) c.block(0, j * K, K, K) = H[static_cast<std::size_t>(j)];
  if (p > 1) c.block(K, 0, K * (p - 1), K * (p - 1)).setIdentity();
  return c;
}

Spectrum companion_eigenvalues(const std::vector<Matrix>& H) {
  Eigen::EigenSolver<Matrix> es(companion(H), false);
  Spectrum s;
  const auto& ev = es.eigenvalues();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::stable_sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const auto& a, const auto& b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  s.max_modulus = s.eigenvalues.empty() ? 0.0 : std::abs(s.eigenvalues.front());
  s.stable = s.max_modulus < 1.0;
  return s;
}

double Autocorrelation::share_inside() const {
  if (acf.rows() <= 1) return 1.0;
  const auto body = acf.bottomRows(acf.rows() - 1).cwiseAbs();
  return static_cast<double>((body.array() <= band).count()) / static_cast<double>(body.size());
}

Autocorrelation residual_autocorrelation(const Matrix& residuals, int max_lag) {
  const Index T = residuals.rows();
  if (max_lag < 0 || 4 * static_cast<Index>(max_lag) >= T)
    throw InputError("residual_autocorrelation: max_lag must be below T_eff / 4");
  Autocorrelation out;
  out.band = 2.0 / std::sqrt(static_cast<double>(T));
  out.acf.resize(max_lag + 1, residuals.cols());
  for (Index c = 0; c < residuals.cols(); ++c) {
    const Vector e = residuals.col(c).array() - residuals.col(c).mean();
    const double denom = e.squaredNorm();
    for (int l = 0; l <= max_lag; ++l) {
      if (denom == 0.0) {
        out.acf(l, c) = l == 0 ? 1.0 : 0.0;
        continue;
      }
      out.acf(l, c) = e.tail(T - l).dot(e.head(T - l)) / denom;
    }
    out.acf(0, c) = 1.0;
  }
  return out;
}

Matrix simulate_forward(const Vector& h0, const std::vector<Matrix>& H, const Matrix& initial, const Matrix& shocks) {
  const Index K = h0.size();
  const Index p = static_cast<Index>(H.size());
  if (initial.rows() < p || initial.cols() != K || shocks.cols() != K)
    throw InputError("simulate_forward: initial block needs p rows of K values");
  const Index n = shocks.rows();
  Matrix path(p + n, K);
  path.topRows(p) = initial.bottomRows(p);
  for (Index t = 0; t < n; ++t) {
    Vector y = h0 + shocks.row(t).transpose();
    for (Index j = 1; j <= p; ++j) y.noalias() += H[static_cast<std::size_t>(j - 1)] * path.row(p + t - j).transpose();
    path.row(p + t) = y.transpose();
  }
  return path.bottomRows(n);
}

Vector unconditional_mean(const Vector& h0, const std::vector<Matrix>& H) {
  Matrix a = Matrix::Identity(h0.size(), h0.size());
  for (const auto& h : H) a -= h;
  return solve_checked(a, h0, kMaxG0Condition, "I - sum(H_j)");
}

}  // namespace gvar
