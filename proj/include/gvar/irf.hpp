#pragma once

// Structural impulse responses, bootstrap bands and the direct/spillover
// decomposition.

#include <cstdint>
#include <string>
#include <vector>

#include "gvar/common.hpp"
#include "gvar/ident.hpp"
#include "gvar/model.hpp"

namespace gvar {

/// Responses indexed by (horizon, variable, shock).
struct IrfArray {
  Index horizons = 0;  // h_max + 1
  Index vars = 0;
  Index shocks = 0;
  std::vector<double> data;

  IrfArray() = default;
  IrfArray(Index h, Index k, Index s) : horizons(h), vars(k), shocks(s), data(static_cast<std::size_t>(h * k * s), 0.0) {}

  double& at(Index h, Index k, Index s) { return data[offset(h, k, s)]; }
  double at(Index h, Index k, Index s) const { return data[offset(h, k, s)]; }
  bool same_shape(const IrfArray& o) const { return horizons == o.horizons && vars == o.vars && shocks == o.shocks; }
  void scale(double c) {
    for (double& v : data) v *= c;
  }

private:
  std::size_t offset(Index h, Index k, Index s) const { return static_cast<std::size_t>((h * vars + k) * shocks + s); }
};

/// Phi_0 = impact; Phi_h = sum_{j=1..min(h,p)} H_j Phi_{h-j}. `impact` holds
/// one column per shock (unit structural shocks).
IrfArray irf(const std::vector<Matrix>& H, const Matrix& impact, int h_max);

struct IrfSet {
  IrfArray median;
  IrfArray lower;
  IrfArray upper;
  double coverage = 0.68;
  std::size_t pooled = 0;
  std::vector<std::string> var_labels;
  std::vector<std::string> shock_labels;
};

/// Linear-interpolation percentile of a sorted sample, q in [0,1].
double percentile_sorted(const std::vector<double>& sorted, double q);

/// Pointwise median and central `coverage` band over a pool of draws.
IrfSet summarize(const std::vector<IrfArray>& pool, double coverage);

struct Decomposition {
  Matrix total;      // vars x shocks, signed peak values
  Matrix direct;
  Matrix spillover;  // total - direct
  int window = 6;
};

/// Signed value with the largest magnitude over horizons 0..window.
double peak(const IrfArray& a, Index var, Index shock, int window);

Decomposition decompose(const IrfArray& total, const IrfArray& direct, int window = 6);

/// Impact matrix in the linkage-free system: the same structural shocks
/// enter the equation residuals, v = G0 S eps, and propagate through the
/// restricted G0.
Matrix direct_impact(const Matrix& G0, const Matrix& G0_restricted, const Matrix& impact);

/// Columns of S for every target shock, in target order.
Matrix target_columns(const Matrix& S, const std::vector<IdentTarget>& targets);
std::vector<std::string> target_labels(const std::vector<IdentTarget>& targets);

struct BootstrapConfig {
  std::size_t replications = 500;
  IdentConfig ident{};
  int h_max = 24;
  double coverage = 0.68;
  int window = 6;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
};

struct ReplicationStats {
  std::size_t accepted = 0;
  bool failed = false;  // estimation failure
};

struct BootstrapResult {
  IrfSet total;
  IrfSet direct;
  Decomposition decomposition;
  std::vector<ReplicationStats> replications;
  std::size_t accepted_draws = 0;
  std::size_t attempted_draws = 0;
  double per_draw_success_rate = 0.0;
  double per_replication_success_rate = 0.0;  // share of replications with >= 1 accepted draw
  std::vector<IrfArray> total_pool;
  std::vector<IrfArray> direct_pool;
};

/// Residual bootstrap: whole rows of reduced-form residuals are resampled,
/// the data regenerated from the reduced form starting at the actual initial
/// observations, every block re-estimated and identification re-run.
BootstrapResult bootstrap_irf(const Panel& panel, const ModelSpec& spec, const std::vector<IdentTarget>& targets,
                              const BootstrapConfig& config);

/// Regenerated sample for one replication (exposed for testing).
Matrix bootstrap_sample(const GvarModel& model, const Matrix& data, Rng& rng);

}  // namespace gvar
