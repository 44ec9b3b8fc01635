#pragma once

// Identification of country-specific uncertainty shocks with absolute
// magnitude restrictions: the impact of each target shock on its own
// variable must strictly dominate its impact on every other variable of the
// system. Candidates are drawn as S = F * Q_diag * R with F the Cholesky
// factor computed with the target variables ordered first, Q_diag a random
// 2x2 rotation on the target columns and R a Cayley-transform perturbation.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gvar/common.hpp"
#include "gvar/gvar_core.hpp"
#include "gvar/rng.hpp"

namespace gvar {

enum class Scaling { standardized, raw };
enum class BlockLayout { single, per_country };
enum class DrawScheme { block_cayley, naive };

std::string to_string(Scaling s);
Scaling parse_scaling(const std::string& s);
BlockLayout parse_layout(const std::string& s);
DrawScheme parse_scheme(const std::string& s);

struct IdentTarget {
  std::string country;
  std::array<Index, 2> shock_cols{0, 1};
  std::array<std::string, 2> shock_names{"EPU", "CISS"};
  Scaling scaling = Scaling::standardized;

  void validate(Index K) const;
};

/// Target for `country` with shocks on its `first` and `second` variables.
IdentTarget make_target(const GlobalIndex& index, const std::string& country, const std::string& first = "EPU",
                        const std::string& second = "CISS", Scaling scaling = Scaling::standardized);

struct StructuralDraw {
  Matrix S;
  Matrix Q_tilde;
  bool accepted = false;
  std::size_t draw_index = 0;
  std::size_t bootstrap_index = 0;
};

struct IdentConfig {
  std::size_t max_draws = 100;
  double sigma_h = 0.1;
  BlockLayout layout = BlockLayout::single;
  DrawScheme scheme = DrawScheme::block_cayley;
  bool normalize_signs = true;
};

struct IdentResult {
  std::vector<StructuralDraw> accepted;
  std::size_t draws = 0;
  double success_rate = 0.0;
};

/// Lower Cholesky factor; throws NumericalError with the smallest eigenvalue
/// when the (symmetrised) input is not positive definite.
Matrix chol_lower(const Matrix& omega);

/// Cholesky factor of omega with the `first` indices moved to the front of
/// the ordering, expressed back in the original ordering (F F' = omega).
Matrix ordered_factor(const Matrix& omega, const std::vector<Index>& first);

/// Haar-distributed 2x2 orthogonal matrix (QR of a Gaussian draw, R's
/// diagonal made positive).
Eigen::Matrix2d draw_block_q(Rng& rng);

/// Haar-distributed K x K orthogonal matrix, same construction.
Matrix haar_orthogonal(Rng& rng, Index K);

/// Identity of size K with `block` placed on the target rows/columns.
Matrix assemble_q(const Eigen::Matrix2d& block, Index K, const IdentTarget& target);
Matrix assemble_q(const std::vector<Eigen::Matrix2d>& blocks, Index K, const std::vector<IdentTarget>& targets);

/// (I - H)(I + H)^-1 for skew-symmetric H.
Matrix cayley(const Matrix& H);

/// Cayley rotation for H with upper-triangle entries N(0, sigma_h^2).
/// sigma_h == 0 yields the identity.
Matrix cayley_perturb(Rng& rng, Index K, double sigma_h);

/// Magnitude restriction on the two target columns of S.
bool check_magnitude(const Matrix& S, const IdentTarget& target, const Vector& sigmas);

/// Runs max_draws candidate draws. Each draw uses its own substream
/// addressed by (seed, bootstrap_index, draw_index), so the accepted set is
/// independent of `jobs`.
IdentResult identify(const Matrix& omega, const std::vector<IdentTarget>& targets, const IdentConfig& config,
                     std::uint64_t seed, std::size_t bootstrap_index = 0, unsigned jobs = 1);

/// Single candidate draw (exposed for testing).
StructuralDraw candidate_draw(const Matrix& factor, const std::vector<IdentTarget>& targets, const IdentConfig& config,
                              Rng& rng);

/// eps_t = S^-1 u_t for every row of u.
Matrix recover_shocks(const Matrix& S, const Matrix& u);

/// Elementwise median of the accepted S matrices.
Matrix median_impact(const std::vector<StructuralDraw>& draws);

}  // namespace gvar
