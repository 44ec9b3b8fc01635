#include "gvar/sim.hpp"

#include <cmath>
#include <random>

#include "gvar/linalg.hpp"

namespace gvar {
namespace {

constexpr int kBurnIn = 200;
constexpr int kMaxStabilityAttempts = 100;

std::string variable_name(int j) {
  static const char* names[] = {"EPU", "CISS", "spread"};
  return j < 3 ? names[j] : "V" + std::to_string(j + 1);
}

std::string common_name(int j) {
  static const char* names[] = {"CMP", "Liquidity", "UMP"};
  return j < 3 ? names[j] : "X" + std::to_string(j + 1);
}

Matrix uniform_matrix(Rng& rng, Index r, Index c, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = u(rng);
  return m;
}

Matrix own_lag(Rng& rng, Index k, int lag) {
  std::uniform_real_distribution<double> diag(0.2, 0.5);
  const double decay = lag == 1 ? 1.0 : 0.3 / lag;
  Matrix b = uniform_matrix(rng, k, k, 0.1);
  for (Index i = 0; i < k; ++i) b(i, i) = diag(rng);
  return b * decay;
}

}  // namespace

double magnitude_margin(const Matrix& S, const IdentTarget& target) {
  const Vector sigma = (S * S.transpose()).diagonal().cwiseSqrt();
  double worst = std::numeric_limits<double>::infinity();
  for (Index j : target.shock_cols) {
    const double own = std::abs(S(j, j)) / sigma(j);
    double other = 0.0;
    for (Index k = 0; k < S.rows(); ++k)
      if (k != j) other = std::max(other, std::abs(S(k, j)) / sigma(k));
    worst = std::min(worst, other > 0.0 ? own / other : std::numeric_limits<double>::infinity());
  }
  return worst;
}

SyntheticDgp make_dgp(const DgpOptions& o) {
  if (o.n_countries < 2) throw InputError("make_dgp: need at least two countries");
  if (o.vars_per_country < 2) throw InputError("make_dgp: need at least two variables per country");
  if (!std::isfinite(o.margin) || o.margin <= 1.0) throw InputError("make_dgp: margin must be finite and above 1");
  if (o.p < 1 || o.q < 0 || o.q > o.p) throw InputError("make_dgp: need p >= 1 and 0 <= q <= p");

  Rng rng = substream(o.seed, Stream::dgp);
  SyntheticDgp dgp;
  dgp.options = o;

  // weights
  LabeledMatrix exposures;
  for (int i = 0; i < o.n_countries; ++i) exposures.labels.push_back("C" + std::to_string(i + 1));
  {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    exposures.values.resize(o.n_countries, o.n_countries);
    for (int i = 0; i < o.n_countries; ++i)
      for (int j = 0; j < o.n_countries; ++j) exposures.values(i, j) = i == j ? 0.0 : u(rng);
  }
  dgp.spec.weights = build_weights(exposures);

  std::vector<std::string> vars;
  for (int j = 0; j < o.vars_per_country; ++j) vars.push_back(variable_name(j));
  std::vector<std::string> commons;
  for (int j = 0; j < o.n_common; ++j) commons.push_back(common_name(j));
  for (const auto& c : exposures.labels) {
    CountrySpec s;
    s.country = c;
    s.domestic_vars = vars;
    s.foreign_vars = vars;
    s.common_vars = commons;
    s.p = o.p;
    s.q = o.q;
    dgp.spec.countries.push_back(s);
  }
  if (o.n_common > 0) {
    DominantSpec d;
    d.label = "DOM";
    d.vars = commons;
    d.feedback_vars = vars;
    d.p = o.p;
    d.q = o.q;
    dgp.spec.dominant = d;
  }
  const GlobalIndex index = global_index(dgp.spec);
  const Index K = index.size();
  const Index k = o.vars_per_country;
  const Index x = o.n_common;

  for (const auto& s : dgp.spec.countries) {
    VarxEstimate e;
    e.country = s.country;
    e.a = uniform_matrix(rng, k, 1, 0.5);
    for (int j = 1; j <= o.p; ++j) e.B.push_back(own_lag(rng, k, j));
    for (int j = 0; j <= o.q; ++j) e.C.push_back(uniform_matrix(rng, k, k, o.foreign_strength));
    if (x > 0)
      for (int j = 0; j <= o.q; ++j) {
        e.D.push_back(uniform_matrix(rng, k, x, o.common_strength));
        if (j == 0 && !o.contemporaneous_common) e.D.back().setZero();
      }
    dgp.truth.push_back(std::move(e));
    dgp.links.push_back(link_matrix(s, dgp.spec.weights, index));
  }
  if (dgp.spec.dominant) {
    DominantEstimate d;
    d.label = dgp.spec.dominant->label;
    d.m_x = uniform_matrix(rng, x, 1, 0.5);
    for (int j = 1; j <= o.p; ++j) d.N.push_back(own_lag(rng, x, j));
    for (int j = 0; j <= o.q; ++j) {
      d.P.push_back(uniform_matrix(rng, x, k, o.feedback_strength));
      if (j == 0 && !o.contemporaneous_common) d.P.back().setZero();
    }
    dgp.dominant_truth = std::move(d);
    dgp.dominant_link = dominant_link(*dgp.spec.dominant, dgp.spec.weights, index, dgp.spec.country_labels());
  }

  bool stable = false;
  for (int attempt = 0; attempt < kMaxStabilityAttempts && !stable; ++attempt) {
    const StackedSystem sys = stack(dgp.truth, dgp.links, dgp.dominant_truth ? &*dgp.dominant_truth : nullptr,
                                    dgp.dominant_link ? &*dgp.dominant_link : nullptr);
    const ReducedForm rf = solve(sys.G0, sys.G, sys.g0);
    const Spectrum spec = companion_eigenvalues(rf.H);
    if (spec.max_modulus < o.max_modulus) {
      stable = true;
      GvarSolution& sol = dgp.solution;
      sol.index = index;
      sol.G0 = sys.G0;
      sol.G = sys.G;
      sol.g0 = sys.g0;
      sol.h0 = rf.h0;
      sol.H = rf.H;
      sol.spectrum = spec;
      break;
    }
    for (auto& e : dgp.truth) {
      for (auto& b : e.B) b *= 0.9;
      for (auto& c : e.C) c *= 0.9;
      for (auto& d : e.D) d *= 0.9;
    }
    if (dgp.dominant_truth) {
      for (auto& n : dgp.dominant_truth->N) n *= 0.9;
      for (auto& p : dgp.dominant_truth->P) p *= 0.9;
    }
  }
  if (!stable) throw NumericalError("make_dgp: stability rescaling failed after 100 attempts");

  // impact matrix: S = diag(d) (I + E) with the target columns shrunk onto
  // their own variable until the margin holds
  dgp.target = make_target(index, dgp.spec.countries.front().country, vars[0], vars[1]);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  Vector d(K);
  for (Index i = 0; i < K; ++i) d(i) = scale(rng);
  Matrix E = Matrix::Zero(K, K);
  std::uniform_real_distribution<double> within(-0.2, 0.2);
  std::uniform_real_distribution<double> across(-o.cross_impact, o.cross_impact);
  for (Index j = 0; j < K; ++j)
    for (Index i = 0; i < K; ++i) {
      if (i == j) continue;
      const bool same_unit = index.vars[static_cast<std::size_t>(i)].unit == index.vars[static_cast<std::size_t>(j)].unit;
      E(i, j) = same_unit ? within(rng) : (o.cross_impact > 0.0 ? across(rng) : 0.0);
    }
  auto build = [&] { return Matrix(d.asDiagonal() * (Matrix::Identity(K, K) + E)); };
  Matrix S = build();
  for (int it = 0; it < 1000 && magnitude_margin(S, dgp.target) < o.margin; ++it) {
    for (Index j : dgp.target.shock_cols)
      for (Index i = 0; i < K; ++i)
        if (i != j) E(i, j) *= 0.9;
    S = build();
  }
  if (magnitude_margin(S, dgp.target) < o.margin) throw NumericalError("make_dgp: could not plant the requested margin");
  dgp.S_true = S;
  dgp.solution.omega_u = matmul(S, Matrix(S.transpose()));
  return dgp;
}

Simulation simulate_detailed(const SyntheticDgp& dgp, Index T, std::uint64_t seed) {
  if (T < 50) throw InputError("simulate: T must be at least 50");
  const GvarSolution& sol = dgp.solution;
  const Index K = sol.index.size();
  const Index p = static_cast<Index>(sol.H.size());
  Rng rng = substream(seed, Stream::simulate);
  std::normal_distribution<double> normal;
  const Index total = T + kBurnIn;
  Matrix eps(total, K);
  for (Index t = 0; t < total; ++t)
    for (Index i = 0; i < K; ++i) eps(t, i) = normal(rng);
  const Matrix u = eps * dgp.S_true.transpose();
  const Vector mean = unconditional_mean(sol.h0, sol.H);
  const Matrix initial = mean.transpose().replicate(p, 1);
  const Matrix path = simulate_forward(sol.h0, sol.H, initial, u);

  Simulation out;
  out.shocks = eps.bottomRows(T);
  Panel& panel = out.panel;
  panel.values = path.bottomRows(T);
  YearMonth ym{2003, 1};
  for (Index t = 0; t < T; ++t, ym = ym.next()) panel.dates.push_back(ym);
  for (const auto& v : sol.index.vars) {
    SeriesMeta m;
    m.column = v.unit + "." + v.name;
    m.country = v.unit;
    m.name = v.name;
    m.role = sol.index.dominant_label && v.unit == *sol.index.dominant_label ? Role::dominant : Role::domestic;
    panel.meta.push_back(std::move(m));
  }
  panel.validate();
  return out;
}

Panel simulate(const SyntheticDgp& dgp, Index T, std::uint64_t seed) { return simulate_detailed(dgp, T, seed).panel; }

}  // namespace gvar
