#include "gvar/irf.hpp"

#include <algorithm>
#include <cmath>

#include "gvar/linalg.hpp"
#include "gvar/parallel.hpp"

namespace gvar {

IrfArray irf(const std::vector<Matrix>& H, const Matrix& impact, int h_max) {
  if (h_max < 0) throw InputError("irf: h_max must be nonnegative");
  const Index K = impact.rows();
  const Index n = impact.cols();
  for (const auto& h : H)
    if (h.rows() != K || h.cols() != K) throw InputError("irf: lag matrices and impact have different sizes");
  std::vector<Matrix> phi;
  phi.reserve(static_cast<std::size_t>(h_max) + 1);
  phi.push_back(impact);
  for (int h = 1; h <= h_max; ++h) {
    Matrix next = Matrix::Zero(K, n);
    const int top = std::min<int>(h, static_cast<int>(H.size()));
    for (int j = 1; j <= top; ++j) next += matmul(H[static_cast<std::size_t>(j - 1)], phi[static_cast<std::size_t>(h - j)]);
    phi.push_back(std::move(next));
  }
  IrfArray out(h_max + 1, K, n);
  for (int h = 0; h <= h_max; ++h)
    for (Index k = 0; k < K; ++k)
      for (Index s = 0; s < n; ++s) out.at(h, k, s) = phi[static_cast<std::size_t>(h)](k, s);
  return out;
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw InputError("percentile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

IrfSet summarize(const std::vector<IrfArray>& pool, double coverage) {
  if (pool.empty()) throw IdentificationError("no accepted draws to summarise");
  if (!(coverage > 0.0 && coverage < 1.0)) throw InputError("coverage must lie in (0,1)");
  const IrfArray& shape = pool.front();
  for (const auto& a : pool)
    if (!a.same_shape(shape)) throw InputError("summarize: pooled responses differ in shape");
  IrfSet set;
  set.coverage = coverage;
  set.pooled = pool.size();
  set.median = set.lower = set.upper = IrfArray(shape.horizons, shape.vars, shape.shocks);
  const double lo_q = (1.0 - coverage) / 2.0;
  std::vector<double> cell(pool.size());
  for (std::size_t c = 0; c < shape.data.size(); ++c) {
    for (std::size_t d = 0; d < pool.size(); ++d) cell[d] = pool[d].data[c];
    std::sort(cell.begin(), cell.end());
    set.median.data[c] = percentile_sorted(cell, 0.5);
    set.lower.data[c] = percentile_sorted(cell, lo_q);
    set.upper.data[c] = percentile_sorted(cell, 1.0 - lo_q);
  }
  return set;
}

double peak(const IrfArray& a, Index var, Index shock, int window) {
  const Index last = std::min<Index>(window, a.horizons - 1);
  double best = a.at(0, var, shock);
  for (Index h = 1; h <= last; ++h)
    if (std::abs(a.at(h, var, shock)) > std::abs(best)) best = a.at(h, var, shock);
  return best;
}

Decomposition decompose(const IrfArray& total, const IrfArray& direct, int window) {
  if (!total.same_shape(direct)) throw InputError("decompose: total and direct responses differ in shape");
  if (window < 0) throw InputError("decompose: window must be nonnegative");
  Decomposition d;
  d.window = window;
  d.total.resize(total.vars, total.shocks);
  d.direct.resize(total.vars, total.shocks);
  for (Index k = 0; k < total.vars; ++k)
    for (Index s = 0; s < total.shocks; ++s) {
      d.total(k, s) = peak(total, k, s, window);
      d.direct(k, s) = peak(direct, k, s, window);
    }
  // total is re-formed from its parts so the identity holds bit-exactly
  d.spillover = d.total - d.direct;
  d.total = d.direct + d.spillover;
  return d;
}

Matrix direct_impact(const Matrix& G0, const Matrix& G0_restricted, const Matrix& impact) {
  return solve_checked(G0_restricted, matmul(G0, impact), 1e12, "restricted G0");
}

Matrix target_columns(const Matrix& S, const std::vector<IdentTarget>& targets) {
  Matrix out(S.rows(), static_cast<Index>(2 * targets.size()));
  Index c = 0;
  for (const auto& t : targets)
    for (Index j : t.shock_cols) out.col(c++) = S.col(j);
  return out;
}

std::vector<std::string> target_labels(const std::vector<IdentTarget>& targets) {
  std::vector<std::string> out;
  for (const auto& t : targets)
    for (const auto& n : t.shock_names) out.push_back(t.country + "." + n);
  return out;
}

Matrix bootstrap_sample(const GvarModel& model, const Matrix& data, Rng& rng) {
  const GvarSolution& sol = model.solution;
  const Index start = sol.window_start;
  const Index T = data.rows();
  const Index p = static_cast<Index>(sol.H.size());
  const Matrix centered = sol.residuals.rowwise() - sol.residuals.colwise().mean();
  std::uniform_int_distribution<Index> pick(0, centered.rows() - 1);
  Matrix shocks(T - start, data.cols());
  for (Index t = 0; t < shocks.rows(); ++t) shocks.row(t) = centered.row(pick(rng));
  Matrix out = data;
  out.bottomRows(T - start) = simulate_forward(sol.h0, sol.H, data.middleRows(start - p, p), shocks);
  return out;
}

namespace {

struct ReplicationOutput {
  ReplicationStats stats;
  std::vector<IrfArray> total;
  std::vector<IrfArray> direct;
};

void responses_for(const GvarModel& model, const IdentResult& ident, const std::vector<IdentTarget>& targets,
                   int h_max, ReplicationOutput& out) {
  const GvarSolution restricted = restricted_solution(model);
  for (const auto& d : ident.accepted) {
    const Matrix impact = target_columns(d.S, targets);
    out.total.push_back(irf(model.solution.H, impact, h_max));
    out.direct.push_back(irf(restricted.H, direct_impact(model.solution.G0, restricted.G0, impact), h_max));
  }
}

}  // namespace

BootstrapResult bootstrap_irf(const Panel& panel, const ModelSpec& spec, const std::vector<IdentTarget>& targets,
                              const BootstrapConfig& config) {
  if (config.replications < 1) throw InputError("bootstrap: need at least one replication");
  const GvarModel point = estimate_gvar(panel, spec);
  const IdentResult point_ident = identify(point.solution.omega_u, targets, config.ident, config.seed, 0);
  if (point_ident.accepted.empty())
    throw IdentificationError("identification infeasible on the point-estimate model (no accepted draws)");

  const Panel base = model_panel(panel, point.solution.index);
  const Matrix data = base.values;

  std::vector<ReplicationOutput> reps(config.replications);
  parallel_for(config.replications, config.jobs, [&](std::size_t b) {
    ReplicationOutput& out = reps[b];
    Rng rng = substream(config.seed, Stream::resample, {b});
    try {
      const GvarModel model = estimate_gvar(with_values(base, bootstrap_sample(point, data, rng)), spec);
      const IdentResult ident = identify(model.solution.omega_u, targets, config.ident, config.seed, b + 1);
      out.stats.accepted = ident.accepted.size();
      responses_for(model, ident, targets, config.h_max, out);
    } catch (const NumericalError&) {
      out.stats.failed = true;
    }
  });

  BootstrapResult result;
  std::size_t empty = 0;
  for (auto& r : reps) {
    result.replications.push_back(r.stats);
    result.accepted_draws += r.stats.accepted;
    if (!r.stats.failed) result.attempted_draws += config.ident.max_draws;
    if (r.stats.accepted == 0) ++empty;
    for (auto& a : r.total) result.total_pool.push_back(std::move(a));
    for (auto& a : r.direct) result.direct_pool.push_back(std::move(a));
  }
  if (2 * empty > config.replications)
    throw IdentificationError("more than half of the bootstrap replications produced no accepted draw (" +
                              std::to_string(empty) + " of " + std::to_string(config.replications) + ")");
  result.per_draw_success_rate =
      result.attempted_draws ? static_cast<double>(result.accepted_draws) / static_cast<double>(result.attempted_draws) : 0.0;
  result.per_replication_success_rate =
      static_cast<double>(config.replications - empty) / static_cast<double>(config.replications);

  result.total = summarize(result.total_pool, config.coverage);
  result.direct = summarize(result.direct_pool, config.coverage);
  for (Index i = 0; i < point.solution.index.size(); ++i) {
    result.total.var_labels.push_back(point.solution.index.label(i));
  }
  result.direct.var_labels = result.total.var_labels;
  result.total.shock_labels = result.direct.shock_labels = target_labels(targets);
  result.decomposition = decompose(result.total.median, result.direct.median, config.window);
  return result;
}

}  // namespace gvar
