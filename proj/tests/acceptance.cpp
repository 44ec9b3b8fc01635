// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gvar/dataio.hpp"
#include "gvar/gvar_core.hpp"
#include "gvar/ident.hpp"
#include "gvar/inference.hpp"
#include "gvar/irf.hpp"
#include "gvar/model.hpp"
#include "gvar/rng.hpp"
#include "gvar/sim.hpp"

using namespace gvar;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return percentile_sorted(v, 0.5);
}

double correlation(const Vector& a, const Vector& b) {
  const Vector x = a.array() - a.mean();
  const Vector y = b.array() - b.mean();
  return x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
}

Matrix random_spd(Rng& rng, Index K) {
  std::normal_distribution<double> nd;
  const Matrix a = Matrix::NullaryExpr(K, K, [&]() { return nd(rng); });
  return a * a.transpose() / double(K) + 0.5 * Matrix::Identity(K, K);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome factorization() {
  const auto t0 = Clock::now();
  double worst_q = 0, worst_s = 0;
  int draws = 0;
  for (Index K : {4, 10, 40}) {
    Rng rng = substream(2024, Stream::draw, {std::uint64_t(K)});
    IdentTarget t;
    t.country = "X";
    t.shock_cols = {K / 2, K / 2 + 1};
    for (DrawScheme scheme : {DrawScheme::block_cayley, DrawScheme::naive}) {
      IdentConfig cfg;
      cfg.scheme = scheme;
      for (int i = 0; i < 1000; ++i, ++draws) {
        const Matrix omega = random_spd(rng, K);
        const Matrix factor = scheme == DrawScheme::naive ? chol_lower(omega)
                                                          : ordered_factor(omega, {t.shock_cols[0], t.shock_cols[1]});
        const StructuralDraw d = candidate_draw(factor, {t}, cfg, rng);
        worst_q = std::max(worst_q, max_abs(d.Q_tilde * d.Q_tilde.transpose() - Matrix::Identity(K, K)));
        worst_s = std::max(worst_s, max_abs(d.S * d.S.transpose() - omega));
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst_q < 1e-10 && worst_s < 1e-8 && secs < 10.0,
          fmt("max|QQ'-I|=%.2e (<1e-10) max|SS'-Omega|=%.2e (<1e-8) draws=%.0f runtime=%.1fs (<10s)", worst_q,
              worst_s, draws, secs)};
}

Outcome pipeline_closure() {
  const auto t0 = Clock::now();
  std::vector<double> rho;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    DgpOptions o;
    o.seed = seed;
    o.n_countries = 3;
    o.vars_per_country = 2;
    o.p = 2;
    o.q = 0;
    o.margin = 2.0;
    const SyntheticDgp dgp = make_dgp(o);
    const GvarModel model = estimate_gvar(simulate(dgp, 2000, 100 + seed), dgp.spec);
    const IdentResult r = identify(model.solution.omega_u, {dgp.target}, IdentConfig{}, seed);
    for (Index c : dgp.target.shock_cols)
      rho.push_back(r.accepted.empty() ? 0.0 : std::abs(correlation(median_impact(r.accepted).col(c), dgp.S_true.col(c))));
  }
  const double secs = seconds_since(t0);
  const double med = median(rho);
  const auto above = std::count_if(rho.begin(), rho.end(), [](double v) { return v > 0.9; });
  return {med > 0.9 && secs < 120.0,
          fmt("median |corr| of median accepted target columns with S_true over 20 seeds=%.4f (>0.9), min=%.4f, "
              "%.0f/40 columns above 0.9, runtime=%.1fs (<120s)",
              med, *std::min_element(rho.begin(), rho.end()), double(above), secs)};
}

Outcome rate_ordering() {
  const auto t0 = Clock::now();
  const std::size_t n_block = 2000, n_naive = 20000;
  double worst_ratio = std::numeric_limits<double>::infinity();
  double worst_block = 1.0;
  std::size_t naive_hits = 0;
  Index K = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DgpOptions o;
    o.seed = seed;
    o.n_countries = 10;
    const SyntheticDgp dgp = make_dgp(o);
    K = dgp.S_true.rows();
    IdentConfig block;
    block.max_draws = n_block;
    IdentConfig naive = block;
    naive.max_draws = n_naive;
    naive.scheme = DrawScheme::naive;
    const double rb = identify(dgp.solution.omega_u, {dgp.target}, block, seed).success_rate;
    const IdentResult rn = identify(dgp.solution.omega_u, {dgp.target}, naive, seed);
    naive_hits += rn.accepted.size();
    // zero naive acceptances count as one
    const double naive_rate = double(std::max<std::size_t>(rn.accepted.size(), 1)) / double(n_naive);
    worst_ratio = std::min(worst_ratio, rb / naive_rate);
    worst_block = std::min(worst_block, rb);
  }
  const double secs = seconds_since(t0);
  return {worst_ratio >= 50.0 && K >= 20,
          fmt("K=%.0f, min over 10 seeds of block/naive rate ratio=%.1f (>=50), min block rate=%.4f, naive "
              "acceptances=%.0f",
              double(K), worst_ratio, worst_block, double(naive_hits)) +
              fmt(" in 10x%.0f draws, runtime=%.1fs", double(n_naive), secs)};
}

Outcome irf_correctness() {
  const IrfArray a = irf({Matrix::Constant(1, 1, 0.5)}, Matrix::Constant(1, 1, 1.0), 60);
  double scalar_err = 0;
  for (Index h = 0; h <= 60; ++h) scalar_err = std::max(scalar_err, std::abs(a.at(h, 0, 0) - std::pow(0.5, double(h))));

  bool impact_exact = true;
  double tail = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    DgpOptions o;
    o.seed = seed;
    const SyntheticDgp dgp = make_dgp(o);
    const Matrix& S = dgp.S_true;
    const IrfArray r = irf(dgp.solution.H, S, 60);
    for (Index k = 0; k < S.rows(); ++k)
      for (Index s = 0; s < S.cols(); ++s) {
        impact_exact = impact_exact && r.at(0, k, s) == S(k, s);
        tail = std::max(tail, std::abs(r.at(60, k, s)));
      }
  }
  return {scalar_err < 1e-12 && impact_exact && tail < 1e-3,
          fmt("max|IRF(h)-0.5^h|=%.2e (<1e-12), ", scalar_err) + "horizon 0 equals S columns exactly: " +
              yes_no(impact_exact) + fmt(", max|IRF(60)| over 5 DGPs=%.2e (<1e-3)", tail)};
}

BootstrapResult run_bootstrap(const Panel& panel, const SyntheticDgp& dgp, std::size_t B, unsigned jobs,
                              std::uint64_t seed) {
  BootstrapConfig cfg;
  cfg.replications = B;
  cfg.jobs = jobs;
  cfg.seed = seed;
  return bootstrap_irf(panel, dgp.spec, {dgp.target}, cfg);
}

Outcome decomposition() {
  // C = 0, foreign responses only through a lagged dominant-unit channel
  bool additive = true;
  std::vector<double> ratios;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DgpOptions o;
    o.seed = seed;
    o.q = 1;
    o.foreign_strength = 0.0;
    o.cross_impact = 0.0;
    o.n_common = 1;
    o.contemporaneous_common = false;
    o.common_strength = 0.6;
    o.feedback_strength = 0.6;
    const SyntheticDgp dgp = make_dgp(o);
    const BootstrapResult b = run_bootstrap(simulate(dgp, 2000, 50 + seed), dgp, 50, 1, 70 + seed);
    const Decomposition& d = b.decomposition;
    std::vector<double> spill, total;
    for (Index k = 0; k < d.total.rows(); ++k)
      for (Index s = 0; s < d.total.cols(); ++s) {
        additive = additive && d.total(k, s) == d.direct(k, s) + d.spillover(k, s);
        spill.push_back(std::abs(d.spillover(k, s)));
        total.push_back(std::abs(d.total(k, s)));
      }
    ratios.push_back(median(spill) / median(total));
  }
  const double med = median(ratios);
  const auto below = std::count_if(ratios.begin(), ratios.end(), [](double r) { return r < 0.1; });
  return {additive && med < 0.1,
          "total == direct + spillover in every cell: " + yes_no(additive) +
              fmt("; C=0 DGPs (10 seeds, T=2000, B=50) median over seeds of median|spillover|/median|total "
                  "peak|=%.4f (<0.1), max=%.4f, %.0f/10 seeds below 0.1",
                  med, *std::max_element(ratios.begin(), ratios.end()), double(below))};
}

Outcome bands() {
  const auto t0 = Clock::now();
  DgpOptions o;
  o.seed = 3;
  const SyntheticDgp dgp = make_dgp(o);
  const Panel panel = simulate(dgp, 186, 33);
  const BootstrapResult b1 = run_bootstrap(panel, dgp, 100, 1, 2024);
  const double secs = seconds_since(t0);
  const BootstrapResult b4 = run_bootstrap(panel, dgp, 100, 4, 2024);
  const bool exact = b1.total.lower.data == b4.total.lower.data && b1.total.upper.data == b4.total.upper.data &&
                     b1.total.median.data == b4.total.median.data && b1.direct.lower.data == b4.direct.lower.data &&
                     b1.direct.upper.data == b4.direct.upper.data;

  const IrfArray truth = irf(dgp.solution.H, target_columns(dgp.S_true, {dgp.target}), 24);
  const IrfSet& set = b1.total;
  std::size_t inside = 0, cells = 0;
  for (Index h = 0; h < truth.horizons; ++h)
    for (Index k = 0; k < truth.vars; ++k)
      for (Index s = 0; s < truth.shocks; ++s, ++cells)
        inside += set.lower.at(h, k, s) <= truth.at(h, k, s) && truth.at(h, k, s) <= set.upper.at(h, k, s);
  const double share = double(inside) / double(cells);
  return {share >= 0.5 && exact && secs < 600.0,
          fmt("68%% band coverage of true IRF=%.3f (>=0.5) over %.0f grid points, ", share, double(cells)) +
              "jobs 1 vs 4 bit-exact: " + yes_no(exact) + fmt(", B=100 runtime=%.1fs (<600s)", secs)};
}

Outcome ftests() {
  DgpOptions null_o;
  null_o.seed = 31;
  null_o.n_common = 2;
  null_o.common_strength = 0.0;
  null_o.cross_impact = 0.0;
  null_o.q = 0;
  DgpOptions alt_o = null_o;
  alt_o.common_strength = 1.0;
  const SyntheticDgp null_dgp = make_dgp(null_o);
  const SyntheticDgp alt_dgp = make_dgp(alt_o);
  const int trials = 1000;
  int size_hits = 0, power_hits = 0;
  for (int t = 0; t < trials; ++t) {
    const Panel pn = simulate(null_dgp, 186, 10000 + t);
    size_hits += f_test_common(pn, null_dgp.spec.countries[0], null_dgp.spec.weights)[0].reject;
    const Panel pa = simulate(alt_dgp, 186, 50000 + t);
    power_hits += f_test_common(pa, alt_dgp.spec.countries[0], alt_dgp.spec.weights)[0].reject;
  }
  const double size = double(size_hits) / trials, power = double(power_hits) / trials;
  auto four = [](double v) { return std::round(v * 1e4) / 1e4; };
  const double c1 = f_quantile(0.95, 6, 167), c2 = f_quantile(0.95, 3, 174), c3 = f_quantile(0.95, 3, 172);
  const bool fixtures = four(c1) == 2.1532 && four(c2) == 2.6565 && four(c3) == 2.6571;
  return {std::abs(size - 0.05) <= 0.02 && power >= 0.95 && fixtures,
          fmt("size=%.3f (0.05+-0.02) power=%.3f (>=0.95) over 1000 trials; ", size, power) +
              fmt("F(6,167)=%.4f F(3,174)=%.4f F(3,172)=%.4f", c1, c2, c3) + (fixtures ? " match" : " MISMATCH")};
}

Outcome stability() {
  bool classified = true;
  for (double r : {0.99, 1.01}) {
    Matrix h(2, 2);
    h << r * std::cos(0.4), -r * std::sin(0.4), r * std::sin(0.4), r * std::cos(0.4);
    const Spectrum s = companion_eigenvalues({h, Matrix::Zero(2, 2)});
    classified = classified && s.stable == (r < 1.0) && std::abs(s.max_modulus - r) < 1e-12;
    const Spectrum d = companion_eigenvalues({Matrix::Identity(3, 3) * r});
    classified = classified && d.stable == (r < 1.0);
  }
  double err = 0;
  for (auto [a1, a2] : std::vector<std::pair<double, double>>{{0.5, 0.3}, {0.5, -0.6}, {1.2, -0.35}, {-0.2, 0.7}}) {
    // roots of z^2 - a1 z - a2
    const std::complex<double> disc = std::sqrt(std::complex<double>(a1 * a1 + 4 * a2, 0));
    const double oracle = std::max(std::abs((a1 + disc) / 2.0), std::abs((a1 - disc) / 2.0));
    const Spectrum s = companion_eigenvalues({Matrix::Constant(1, 1, a1), Matrix::Constant(1, 1, a2)});
    err = std::max(err, std::abs(s.max_modulus - oracle));
  }
  return {classified && err < 1e-10,
          "0.99 stable / 1.01 unstable: " + yes_no(classified) +
              fmt("; VAR(2) max modulus vs quadratic roots max error=%.2e (<1e-10)", err)};
}

Outcome data_layer() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1e9);
  double row_err = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 30;
    LabeledMatrix e;
    for (int i = 0; i < n; ++i) e.labels.push_back("C" + std::to_string(i));
    e.values = Matrix::NullaryExpr(n, n, [&]() { return u(rng); });
    const WeightMatrix w = build_weights(e);
    for (int i = 0; i < n; ++i) row_err = std::max(row_err, std::abs(w.w.row(i).sum() - 1.0));
  }
  std::uniform_real_distribution<double> y(-20.0, 25.0);
  double yield_err = 0;
  for (int i = 0; i < 100; ++i) {
    const double v = y(rng);
    const long double ref = std::log1pl(static_cast<long double>(v) / 100.0L) / 12.0L;
    yield_err = std::max(yield_err, std::abs(yield_adjust(v) - static_cast<double>(ref)));
  }
  const std::string golden = std::string(GVAR_TEST_DATA) + "/golden_panel.csv";
  const std::string meta = std::string(GVAR_TEST_DATA) + "/golden_meta.json";
  const fs::path dir = fs::temp_directory_path() / "gvar_acceptance";
  fs::create_directories(dir);
  const Panel p = load_panel(golden, meta);
  write_panel_csv(p, (dir / "panel.csv").string());
  write_meta(p.meta, (dir / "meta.json").string());
  const Panel q = load_panel((dir / "panel.csv").string(), (dir / "meta.json").string());
  const bool round_trip = slurp(golden) == slurp((dir / "panel.csv").string()) && q.values == p.values && q.dates == p.dates;
  return {row_err < 1e-12 && yield_err < 1e-12 && round_trip,
          fmt("max|row sum-1|=%.2e (<1e-12) on 100 fixtures, max|yield_adjust-ref|=%.2e (<1e-12) on 100 inputs, ",
              row_err, yield_err) +
              (round_trip ? "golden round trip byte-identical" : "golden round trip DIFFERS")};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, factorization}, {2, pipeline_closure}, {3, rate_ordering}, {4, irf_correctness}, {5, decomposition},
      {6, bands},         {7, ftests},           {8, stability},     {9, data_layer}};
  int failures = 0;
  for (const auto& [n, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
