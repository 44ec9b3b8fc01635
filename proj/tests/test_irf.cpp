#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gvar/irf.hpp"
#include "gvar/sim.hpp"

using namespace gvar;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

IrfArray filled(Index h, Index k, Index s, double base) {
  IrfArray a(h, k, s);
  for (Index i = 0; i < h; ++i)
    for (Index j = 0; j < k; ++j)
      for (Index c = 0; c < s; ++c) a.at(i, j, c) = base * std::pow(0.8, double(i)) * (1 + j - c);
  return a;
}

struct Fixture {
  SyntheticDgp dgp;
  Panel panel;
};

Fixture small_fixture(double foreign_strength) {
  DgpOptions o;
  o.seed = 21;
  o.foreign_strength = foreign_strength;
  o.cross_impact = 0.0;
  Fixture f{make_dgp(o), {}};
  f.panel = simulate(f.dgp, 400, 5);
  return f;
}

}  // namespace

TEST_CASE("scalar VAR(1) responses are powers of the coefficient") {
  const IrfArray a = irf({scalar(0.5)}, scalar(1.0), 30);
  REQUIRE(a.horizons == 31);
  for (Index h = 0; h <= 30; ++h) CHECK(std::abs(a.at(h, 0, 0) - std::pow(0.5, double(h))) < 1e-12);
}

TEST_CASE("impact, linearity and lag recursion") {
  Matrix h1(2, 2), h2(2, 2), s(2, 2);
  h1 << 0.5, 0.1, 0.2, 0.3;
  h2 << 0.1, 0.0, 0.0, 0.1;
  s << 1.0, 0.0, 0.4, 0.8;
  const IrfArray a = irf({h1, h2}, s, 10);
  for (Index k = 0; k < 2; ++k)
    for (Index j = 0; j < 2; ++j) CHECK(a.at(0, k, j) == s(k, j));
  // Phi_2 = H1 Phi_1 + H2 Phi_0 with Phi_1 = H1 S
  const Matrix phi2 = h1 * h1 * s + h2 * s;
  for (Index k = 0; k < 2; ++k)
    for (Index j = 0; j < 2; ++j) CHECK(a.at(2, k, j) == doctest::Approx(phi2(k, j)).epsilon(1e-14));

  IrfArray b = irf({h1, h2}, 2.5 * s, 10);
  IrfArray c = a;
  c.scale(2.5);
  for (std::size_t i = 0; i < b.data.size(); ++i) CHECK(b.data[i] == doctest::Approx(c.data[i]).epsilon(1e-14));
}

TEST_CASE("percentiles and pooled summaries") {
  const std::vector<double> v{1, 2, 3, 4, 5};
  CHECK(percentile_sorted(v, 0.0) == 1.0);
  CHECK(percentile_sorted(v, 0.5) == 3.0);
  CHECK(percentile_sorted(v, 0.16) == doctest::Approx(1.64));
  CHECK(percentile_sorted(v, 1.0) == 5.0);

  std::vector<IrfArray> pool;
  for (int d = 0; d < 101; ++d) pool.push_back(filled(4, 3, 2, 0.5 + 0.01 * d));
  const IrfSet wide = summarize(pool, 0.68);
  const IrfSet narrow = summarize(pool, 0.50);
  CHECK(wide.pooled == 101);
  for (std::size_t i = 0; i < wide.median.data.size(); ++i) {
    CHECK(wide.lower.data[i] <= narrow.lower.data[i]);
    CHECK(narrow.upper.data[i] <= wide.upper.data[i]);
    CHECK(wide.lower.data[i] <= wide.median.data[i]);
    CHECK(wide.median.data[i] <= wide.upper.data[i]);
  }
  CHECK(wide.median.data[0] == doctest::Approx(filled(4, 3, 2, 1.0).data[0]));
  CHECK_THROWS_AS(summarize({}, 0.68), IdentificationError);
  std::vector<IrfArray> mixed{IrfArray(2, 2, 1), IrfArray(3, 2, 1)};
  CHECK_THROWS_AS(summarize(mixed, 0.68), InputError);
}

TEST_CASE("peak and decomposition") {
  IrfArray mono(5, 1, 1);
  for (Index h = 0; h < 5; ++h) mono.at(h, 0, 0) = std::pow(0.5, double(h));
  CHECK(peak(mono, 0, 0, 4) == 1.0);

  IrfArray hump(8, 1, 1);
  const double v[] = {0.1, -0.5, 0.3, -0.9, 0.2, 0.1, 2.0, 0.0};
  for (Index h = 0; h < 8; ++h) hump.at(h, 0, 0) = v[h];
  CHECK(peak(hump, 0, 0, 5) == -0.9);
  CHECK(peak(hump, 0, 0, 6) == 2.0);

  const IrfArray total = filled(10, 4, 2, 1.3), direct = filled(10, 4, 2, 0.7);
  const Decomposition d = decompose(total, direct, 6);
  for (Index k = 0; k < 4; ++k)
    for (Index s = 0; s < 2; ++s) CHECK(d.total(k, s) == d.direct(k, s) + d.spillover(k, s));
  const Decomposition same = decompose(total, total, 6);
  CHECK(same.spillover.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(decompose(total, filled(9, 4, 2, 1.0), 6), InputError);
}

TEST_CASE("restricted solution") {
  const Fixture f = small_fixture(0.3);
  const GvarModel m = estimate_gvar(f.panel, f.dgp.spec);
  const GvarSolution r = restricted_solution(m);
  // no foreign blocks left: G0 is the identity and H block-diagonal by country
  CHECK((r.G0 - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  for (const auto& h : r.H) {
    CHECK(h.block(0, 2, 2, 4).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.block(2, 0, 2, 2).cwiseAbs().maxCoeff() == 0.0);
  }
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t j = 0; j < m.estimates[c].B.size(); ++j)
      CHECK((r.H[j].block(Index(2 * c), Index(2 * c), 2, 2) - m.estimates[c].B[j]).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.omega_u == m.solution.omega_u);

  // identical when C is already zero
  std::vector<VarxEstimate> zeroed = m.estimates;
  for (auto& e : zeroed)
    for (auto& c : e.C) c.setZero();
  const StackedSystem sys = stack(zeroed, m.links);
  const GvarSolution again = restricted_solution(zeroed, m.links, nullptr, nullptr, m.solution.index);
  CHECK(again.G0 == sys.G0);
  CHECK((again.H[0] - r.H[0]).cwiseAbs().maxCoeff() == 0.0);

  const Matrix s = Matrix::Identity(6, 2);
  CHECK((direct_impact(m.solution.G0, m.solution.G0, s) - s).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("bootstrap is reproducible across worker counts") {
  const Fixture f = small_fixture(0.2);
  BootstrapConfig cfg;
  cfg.replications = 6;
  cfg.ident.max_draws = 30;
  cfg.h_max = 12;
  cfg.seed = 17;
  cfg.jobs = 1;
  const std::vector<IdentTarget> t{f.dgp.target};
  const BootstrapResult a = bootstrap_irf(f.panel, f.dgp.spec, t, cfg);
  cfg.jobs = 3;
  const BootstrapResult b = bootstrap_irf(f.panel, f.dgp.spec, t, cfg);
  CHECK(a.total.median.data == b.total.median.data);
  CHECK(a.total.lower.data == b.total.lower.data);
  CHECK(a.direct.upper.data == b.direct.upper.data);
  CHECK(a.accepted_draws == b.accepted_draws);
  CHECK(a.attempted_draws == 6 * 30);
  CHECK(a.per_draw_success_rate > 0.0);
  CHECK(a.per_replication_success_rate <= 1.0);
  CHECK(a.total.shock_labels.at(0) == "C1.EPU");
  CHECK(a.total.var_labels.size() == 6);
  for (std::size_t i = 0; i < a.total.median.data.size(); ++i) {
    CHECK(a.total.lower.data[i] <= a.total.median.data[i]);
    CHECK(a.total.median.data[i] <= a.total.upper.data[i]);
  }
  for (Index k = 0; k < 6; ++k)
    for (Index s = 0; s < 2; ++s)
      CHECK(a.decomposition.total(k, s) == a.decomposition.direct(k, s) + a.decomposition.spillover(k, s));

  cfg.seed = 18;
  const BootstrapResult c = bootstrap_irf(f.panel, f.dgp.spec, t, cfg);
  CHECK(c.total.median.data != a.total.median.data);
}

TEST_CASE("bootstrap sample keeps the initial observations") {
  const Fixture f = small_fixture(0.2);
  const GvarModel m = estimate_gvar(f.panel, f.dgp.spec);
  const Matrix data = global_data(f.panel, m.solution.index);
  Rng rng(3);
  const Matrix s = bootstrap_sample(m, data, rng);
  CHECK(s.rows() == data.rows());
  CHECK(s.topRows(m.solution.window_start) == data.topRows(m.solution.window_start));
  CHECK(s.bottomRows(10) != data.bottomRows(10));
}
