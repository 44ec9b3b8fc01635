#pragma once

// Synthetic global models with known coefficients and impact matrix, used as
// ground truth by the tests and the acceptance suite.

#include <cstdint>
#include <optional>
#include <vector>

#include "gvar/ident.hpp"
#include "gvar/model.hpp"

namespace gvar {

struct DgpOptions {
  int n_countries = 3;
  int vars_per_country = 2;
  int p = 2;
  int q = 0;
  std::uint64_t seed = 1;
  double margin = 2.0;             // own scaled impact / largest other, target columns
  int n_common = 0;                // dominant-unit variables; 0 means no dominant block
  double foreign_strength = 0.3;   // scale of the C blocks (0: no foreign linkages)
  double common_strength = 0.3;    // scale of the D blocks
  double feedback_strength = 0.0;  // scale of the dominant unit's P blocks
  double cross_impact = 0.15;      // impact entries across units in S_true (0: block diagonal)
  bool contemporaneous_common = true;  // false: D_0 and P_0 are zero, the dominant channel works through lags
  double max_modulus = 0.95;
};

struct SyntheticDgp {
  DgpOptions options;
  ModelSpec spec;
  std::vector<VarxEstimate> truth;
  std::optional<DominantEstimate> dominant_truth;
  std::vector<LinkMatrix> links;
  std::optional<LinkMatrix> dominant_link;
  GvarSolution solution;  // true reduced form (omega_u = S_true S_true')
  Matrix S_true;
  IdentTarget target;     // first country, first two variables
};

/// Random stable model (coefficients shrunk until the companion modulus is
/// below options.max_modulus) with a planted dominant block in S_true.
SyntheticDgp make_dgp(const DgpOptions& options);

struct Simulation {
  Panel panel;
  Matrix shocks;  // structural eps_t aligned with panel rows
};

/// Recursive simulation of the reduced form with u_t = S_true eps_t,
/// eps ~ N(0, I), discarding a 200-period burn-in. T >= 50.
Simulation simulate_detailed(const SyntheticDgp& dgp, Index T, std::uint64_t seed);
Panel simulate(const SyntheticDgp& dgp, Index T, std::uint64_t seed);

/// Smallest ratio, over the target columns, of own scaled impact to the
/// largest other scaled impact.
double magnitude_margin(const Matrix& S, const IdentTarget& target);

}  // namespace gvar
