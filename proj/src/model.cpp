#include "gvar/model.hpp"

#include <algorithm>
#include <set>

#include "gvar/linalg.hpp"

namespace gvar {

std::vector<std::string> ModelSpec::country_labels() const {
  std::vector<std::string> out;
  for (const auto& c : countries) out.push_back(c.country);
  return out;
}

void ModelSpec::validate() const {
  if (countries.empty()) throw InputError("model has no countries");
  std::set<std::string> seen;
  for (const auto& c : countries) {
    c.validate();
    if (!seen.insert(c.country).second) throw InputError("country " + c.country + " listed twice");
    if (!weights.index_of(c.country)) throw InputError("country " + c.country + " missing from weight matrix");
    if (!c.common_vars.empty()) {
      if (!dominant) throw InputError(c.country + ": common variables need a dominant-unit block");
      for (const auto& v : c.common_vars)
        if (std::find(dominant->vars.begin(), dominant->vars.end(), v) == dominant->vars.end())
          throw InputError(c.country + ": common variable " + v + " is not modelled by the dominant unit");
    }
  }
  if (dominant) {
    if (dominant->vars.empty()) throw InputError("dominant unit has no variables");
    if (seen.count(dominant->label)) throw InputError("dominant label clashes with a country label");
    if (dominant->p < 1 || dominant->q < 0 || dominant->q > dominant->p)
      throw InputError("dominant unit lag orders need p_x >= 1 and 0 <= q_x <= p_x");
  }
  weights.validate();
}

GlobalIndex global_index(const ModelSpec& spec) {
  GlobalIndex index;
  for (const auto& c : spec.countries)
    for (const auto& v : c.domestic_vars) index.vars.push_back({c.country, v});
  if (spec.dominant) {
    index.dominant_label = spec.dominant->label;
    for (const auto& v : spec.dominant->vars) index.vars.push_back({spec.dominant->label, v});
  }
  return index;
}

namespace {

Index panel_column(const Panel& panel, const GlobalIndex& index, const GlobalVar& v) {
  if (index.dominant_label && v.unit == *index.dominant_label) {
    auto k = panel.find_common(v.name);
    if (!k) k = panel.find(v.unit, v.name);
    if (!k) throw InputError("dominant-unit series " + v.name + " not found in panel");
    return *k;
  }
  return panel.require(v.unit, v.name);
}

}  // namespace

Matrix global_data(const Panel& panel, const GlobalIndex& index) {
  Matrix y(panel.periods(), index.size());
  for (Index i = 0; i < index.size(); ++i)
    y.col(i) = panel.values.col(panel_column(panel, index, index.vars[static_cast<std::size_t>(i)]));
  return y;
}

Panel model_panel(const Panel& panel, const GlobalIndex& index) {
  Panel out;
  out.dates = panel.dates;
  out.values = global_data(panel, index);
  for (const auto& v : index.vars) {
    SeriesMeta m = panel.meta[static_cast<std::size_t>(panel_column(panel, index, v))];
    if (index.dominant_label && v.unit == *index.dominant_label) {
      m.country = v.unit;
      if (m.role == Role::domestic) m.role = Role::dominant;
    }
    out.meta.push_back(std::move(m));
  }
  out.validate();
  return out;
}

Panel with_values(const Panel& base, const Matrix& values) {
  if (values.rows() != base.periods() || values.cols() != base.series())
    throw InputError("with_values: shape mismatch");
  Panel out = base;
  out.values = values;
  return out;
}

GvarModel estimate_gvar(const Panel& input, const ModelSpec& spec) {
  spec.validate();
  const GlobalIndex index = global_index(spec);
  const Panel panel = model_panel(input, index);
  const auto labels = spec.country_labels();

  GvarModel model;
  model.spec = spec;
  model.dates = panel.dates;
  for (const auto& c : spec.countries) {
    model.estimates.push_back(estimate_varx(panel, c, spec.weights));
    model.links.push_back(link_matrix(c, spec.weights, index));
  }
  if (spec.dominant) {
    const Matrix x = common_series(panel, spec.dominant->vars);
    const Matrix fb = feedback_series(panel, *spec.dominant, spec.weights, labels);
    try {
      model.dominant = estimate_dominant(x, fb, spec.dominant->p, spec.dominant->q);
    } catch (const NumericalError& e) {
      throw NumericalError(spec.dominant->label + ": " + e.what());
    }
    model.dominant->label = spec.dominant->label;
    model.dominant_link = dominant_link(*spec.dominant, spec.weights, index, labels);
  }

  const StackedSystem sys = stack(model.estimates, model.links, model.dominant ? &*model.dominant : nullptr,
                                  model.dominant_link ? &*model.dominant_link : nullptr);
  const ReducedForm rf = solve(sys.G0, sys.G, sys.g0);

  // structural residuals v_t on the window where every block has residuals
  Index start = 0;
  for (const auto& e : model.estimates) start = std::max(start, e.first_row);
  if (model.dominant) start = std::max(start, model.dominant->first_row);
  const Index Tc = panel.periods() - start;
  Matrix v(Tc, index.size());
  Index col = 0;
  for (const auto& e : model.estimates) {
    v.middleCols(col, e.k()) = e.residuals.bottomRows(Tc);
    col += e.k();
  }
  if (model.dominant) v.middleCols(col, model.dominant->residuals.cols()) = model.dominant->residuals.bottomRows(Tc);

  GvarSolution& sol = model.solution;
  sol.index = index;
  sol.G0 = sys.G0;
  sol.G = sys.G;
  sol.g0 = sys.g0;
  sol.h0 = rf.h0;
  sol.H = rf.H;
  sol.residuals = sys.G0.partialPivLu().solve(v.transpose()).transpose();
  sol.window_start = start;
  sol.omega_u = residual_covariance(sol.residuals, spec.cov_dof_correction);
  sol.spectrum = companion_eigenvalues(sol.H);
  return model;
}

GvarSolution restricted_solution(const std::vector<VarxEstimate>& estimates, const std::vector<LinkMatrix>& links,
                                 const DominantEstimate* dominant, const LinkMatrix* dlink, const GlobalIndex& index) {
  std::vector<VarxEstimate> restricted = estimates;
  for (auto& e : restricted)
    for (auto& c : e.C) c.setZero();
  const StackedSystem sys = stack(restricted, links, dominant, dlink);
  const ReducedForm rf = solve(sys.G0, sys.G, sys.g0);
  GvarSolution sol;
  sol.index = index;
  sol.G0 = sys.G0;
  sol.G = sys.G;
  sol.g0 = sys.g0;
  sol.h0 = rf.h0;
  sol.H = rf.H;
  sol.spectrum = companion_eigenvalues(sol.H);
  return sol;
}

GvarSolution restricted_solution(const GvarModel& model) {
  GvarSolution sol = restricted_solution(model.estimates, model.links, model.dominant ? &*model.dominant : nullptr,
                                         model.dominant_link ? &*model.dominant_link : nullptr, model.solution.index);
  sol.omega_u = model.solution.omega_u;
  sol.residuals = model.solution.residuals;
  sol.window_start = model.solution.window_start;
  return sol;
}

}  // namespace gvar
