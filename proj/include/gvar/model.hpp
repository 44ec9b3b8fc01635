#pragma once

// End-to-end estimation of the global model from a transformed panel.

#include <optional>
#include <vector>

#include "gvar/dataio.hpp"
#include "gvar/gvar_core.hpp"
#include "gvar/varx.hpp"

namespace gvar {

struct ModelSpec {
  std::vector<CountrySpec> countries;
  std::optional<DominantSpec> dominant;
  WeightMatrix weights;
  int cov_dof_correction = 0;

  std::vector<std::string> country_labels() const;
  void validate() const;
};

GlobalIndex global_index(const ModelSpec& spec);

struct GvarModel {
  ModelSpec spec;
  std::vector<VarxEstimate> estimates;
  std::optional<DominantEstimate> dominant;
  std::vector<LinkMatrix> links;
  std::optional<LinkMatrix> dominant_link;
  GvarSolution solution;
  std::vector<YearMonth> dates;  // full panel dates
};

/// Model variables of `panel` in global order (T x K).
Matrix global_data(const Panel& panel, const GlobalIndex& index);

/// Panel holding exactly the model variables, in global order.
Panel model_panel(const Panel& panel, const GlobalIndex& index);

/// Copy of a model panel with its values replaced (T x K, global order).
Panel with_values(const Panel& model_panel, const Matrix& values);

/// Estimates every block, stacks, solves and maps residuals to reduced form.
GvarModel estimate_gvar(const Panel& panel, const ModelSpec& spec);

/// Re-stacks with every foreign block C_{i,j} set to zero (common and
/// feedback blocks retained) and re-solves. Omega and residuals are copied.
GvarSolution restricted_solution(const GvarModel& model);

/// Same, from explicit estimates and links.
GvarSolution restricted_solution(const std::vector<VarxEstimate>& estimates, const std::vector<LinkMatrix>& links,
                                 const DominantEstimate* dominant, const LinkMatrix* dominant_link,
                                 const GlobalIndex& index);

}  // namespace gvar
