#include "gvar/ident.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gvar/kernels.hpp"
#include "gvar/linalg.hpp"
#include "gvar/parallel.hpp"

namespace gvar {
namespace {

constexpr int kMaxCayleyRedraws = 100;

std::vector<Index> target_order(const std::vector<IdentTarget>& targets) {
  std::vector<Index> first;
  for (const auto& t : targets)
    for (Index c : t.shock_cols) {
      if (std::find(first.begin(), first.end(), c) != first.end())
        throw InputError("identification targets share shock columns");
      first.push_back(c);
    }
  return first;
}

double median_of(std::vector<double>& v) {
  const auto n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(Scaling s) { return s == Scaling::raw ? "raw" : "standardized"; }

Scaling parse_scaling(const std::string& s) {
  if (s == "standardized") return Scaling::standardized;
  if (s == "raw") return Scaling::raw;
  throw InputError("unknown scaling mode '" + s + "'");
}

BlockLayout parse_layout(const std::string& s) {
  if (s == "single") return BlockLayout::single;
  if (s == "per-country" || s == "per_country") return BlockLayout::per_country;
  throw InputError("unknown block layout '" + s + "'");
}

DrawScheme parse_scheme(const std::string& s) {
  if (s == "block_cayley" || s == "block-cayley") return DrawScheme::block_cayley;
  if (s == "naive") return DrawScheme::naive;
  throw InputError("unknown draw scheme '" + s + "'");
}

void IdentTarget::validate(Index K) const {
  if (shock_cols[0] == shock_cols[1]) throw InputError("target " + country + ": shock columns must be distinct");
  for (Index c : shock_cols)
    if (c < 0 || c >= K) throw InputError("target " + country + ": shock column out of range");
}

IdentTarget make_target(const GlobalIndex& index, const std::string& country, const std::string& first,
                        const std::string& second, Scaling scaling) {
  IdentTarget t;
  t.country = country;
  t.shock_cols = {index.require(country, first), index.require(country, second)};
  t.shock_names = {first, second};
  t.scaling = scaling;
  t.validate(index.size());
  return t;
}

Matrix chol_lower(const Matrix& omega) {
  if (omega.rows() != omega.cols()) throw InputError("chol_lower: matrix is not square");
  const Matrix sym = (omega + omega.transpose()) / 2.0;
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    std::ostringstream msg;
    msg << "covariance matrix is not positive definite (smallest eigenvalue " << eig.eigenvalues()(0) << ")";
    throw NumericalError(msg.str());
  }
  return llt.matrixL();
}

Matrix ordered_factor(const Matrix& omega, const std::vector<Index>& first) {
  const Index K = omega.rows();
  std::vector<Index> order = first;
  for (Index i = 0; i < K; ++i)
    if (std::find(first.begin(), first.end(), i) == first.end()) order.push_back(i);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(K);  // row i of P*x is x(order[i])
  for (Index i = 0; i < K; ++i) perm.indices()(order[static_cast<std::size_t>(i)]) = i;
  const Matrix permuted = perm * omega * perm.transpose();
  const Matrix l = chol_lower(permuted);
  return perm.transpose() * l * perm;
}

Eigen::Matrix2d draw_block_q(Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Matrix2d a;
  a << normal(rng), normal(rng), normal(rng), normal(rng);
  // Gram-Schmidt on the columns is the QR factorisation with positive R diagonal
  const Eigen::Vector2d q0 = a.col(0).normalized();
  Eigen::Vector2d v = a.col(1) - q0.dot(a.col(1)) * q0;
  Eigen::Matrix2d q;
  q.col(0) = q0;
  q.col(1) = v.normalized();
  return q;
}

Matrix haar_orthogonal(Rng& rng, Index K) {
  std::normal_distribution<double> normal;
  Matrix a(K, K);
  for (Index j = 0; j < K; ++j)
    for (Index i = 0; i < K; ++i) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < K; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Matrix assemble_q(const Eigen::Matrix2d& block, Index K, const IdentTarget& target) {
  return assemble_q(std::vector<Eigen::Matrix2d>{block}, K, std::vector<IdentTarget>{target});
}

Matrix assemble_q(const std::vector<Eigen::Matrix2d>& blocks, Index K, const std::vector<IdentTarget>& targets) {
  if (blocks.size() != targets.size()) throw InputError("assemble_q: one block per target");
  Matrix q = Matrix::Identity(K, K);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& c = targets[b].shock_cols;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(j)]) = blocks[b](i, j);
  }
  return q;
}

Matrix cayley(const Matrix& H) {
  const Index K = H.rows();
  const Matrix I = Matrix::Identity(K, K);
  // (I - H) and (I + H)^-1 commute
  return (I + H).partialPivLu().solve(I - H);
}

Matrix cayley_perturb(Rng& rng, Index K, double sigma_h) {
  if (!(sigma_h >= 0.0)) throw InputError("cayley_perturb: sigma_h must be nonnegative");
  if (sigma_h == 0.0) return Matrix::Identity(K, K);
  std::normal_distribution<double> normal(0.0, sigma_h);
  for (int attempt = 0; attempt < kMaxCayleyRedraws; ++attempt) {
    Matrix h = Matrix::Zero(K, K);
    for (Index j = 1; j < K; ++j)
      for (Index i = 0; i < j; ++i) {
        h(i, j) = normal(rng);
        h(j, i) = -h(i, j);
      }
    const Matrix ip = Matrix::Identity(K, K) + h;
    const auto lu = ip.partialPivLu();
    if (lu.rcond() < 1e-12) continue;  // redraw
    return lu.solve(Matrix::Identity(K, K) - h);
  }
  throw NumericalError("cayley_perturb: I + H singular on every redraw");
}

bool check_magnitude(const Matrix& S, const IdentTarget& target, const Vector& sigmas) {
  const Index K = S.rows();
  Vector inv = Vector::Ones(K);
  if (target.scaling == Scaling::standardized) {
    if (sigmas.size() != K) throw InputError("check_magnitude: one standard deviation per variable required");
    inv = sigmas.cwiseInverse();
  }
  const auto& kern = kernels::active();
  for (Index j : target.shock_cols) {
    const double own = std::abs(S(j, j) * inv(j));
    const double other = kern.max_abs_scaled(static_cast<std::size_t>(K), S.col(j).data(), inv.data(),
                                             static_cast<std::size_t>(j));
    if (!(own > other)) return false;
  }
  return true;
}

StructuralDraw candidate_draw(const Matrix& factor, const std::vector<IdentTarget>& targets,
                              const IdentConfig& config, Rng& rng) {
  const Index K = factor.rows();
  StructuralDraw d;
  if (config.scheme == DrawScheme::naive) {
    d.Q_tilde = haar_orthogonal(rng, K);
  } else {
    std::vector<Eigen::Matrix2d> blocks;
    const std::size_t n_blocks = config.layout == BlockLayout::single ? 1 : targets.size();
    for (std::size_t b = 0; b < n_blocks; ++b) blocks.push_back(draw_block_q(rng));
    const std::vector<IdentTarget> placed(targets.begin(), targets.begin() + static_cast<std::ptrdiff_t>(n_blocks));
    const Matrix q_diag = assemble_q(blocks, K, placed);
    d.Q_tilde = matmul(q_diag, cayley_perturb(rng, K, config.sigma_h));
  }
  d.S = matmul(factor, d.Q_tilde);
  return d;
}

IdentResult identify(const Matrix& omega, const std::vector<IdentTarget>& targets, const IdentConfig& config,
                     std::uint64_t seed, std::size_t bootstrap_index, unsigned jobs) {
  if (config.max_draws < 1) throw InputError("identify: max_draws must be >= 1");
  if (targets.empty()) throw InputError("identify: no targets");
  if (config.layout == BlockLayout::single && targets.size() != 1)
    throw InputError("identify: single-block layout takes exactly one target");
  const Index K = omega.rows();
  for (const auto& t : targets) t.validate(K);

  const Matrix factor = config.scheme == DrawScheme::naive ? chol_lower(omega) : ordered_factor(omega, target_order(targets));
  const Vector sigmas = omega.diagonal().cwiseSqrt();

  std::vector<StructuralDraw> draws(config.max_draws);
  parallel_for(config.max_draws, jobs, [&](std::size_t i) {
    Rng rng = substream(seed, Stream::draw, {bootstrap_index, i});
    StructuralDraw d = candidate_draw(factor, targets, config, rng);
    d.draw_index = i;
    d.bootstrap_index = bootstrap_index;
    d.accepted = std::all_of(targets.begin(), targets.end(),
                             [&](const IdentTarget& t) { return check_magnitude(d.S, t, sigmas); });
    if (d.accepted && config.normalize_signs)
      for (const auto& t : targets)
        for (Index j : t.shock_cols)
          if (d.S(j, j) < 0.0) {
            d.S.col(j) *= -1.0;
            d.Q_tilde.col(j) *= -1.0;
          }
    if (!d.accepted) {
      d.S.resize(0, 0);
      d.Q_tilde.resize(0, 0);
    }
    draws[i] = std::move(d);
  });

  IdentResult out;
  out.draws = config.max_draws;
  for (auto& d : draws)
    if (d.accepted) out.accepted.push_back(std::move(d));
  out.success_rate = static_cast<double>(out.accepted.size()) / static_cast<double>(out.draws);
  return out;
}

Matrix recover_shocks(const Matrix& S, const Matrix& u) {
  if (S.rows() != u.cols()) throw InputError("recover_shocks: S and u dimensions differ");
  return solve_checked(S, u.transpose(), 1e12, "impact matrix S").transpose();
}

Matrix median_impact(const std::vector<StructuralDraw>& draws) {
  if (draws.empty()) throw IdentificationError("median_impact: no accepted draws");
  const Index K = draws.front().S.rows();
  const Index C = draws.front().S.cols();
  Matrix out(K, C);
  std::vector<double> cell(draws.size());
  for (Index j = 0; j < C; ++j)
    for (Index i = 0; i < K; ++i) {
      for (std::size_t d = 0; d < draws.size(); ++d) cell[d] = draws[d].S(i, j);
      out(i, j) = median_of(cell);
    }
  return out;
}

}  // namespace gvar
