#pragma once

// JSON documents and CSV reports. Matrices are stored row-major as nested
// arrays next to explicit "rows"/"cols" fields.

#include <string>
#include <vector>

#include <json.hpp>

#include "gvar/gvar_core.hpp"
#include "gvar/ident.hpp"
#include "gvar/inference.hpp"
#include "gvar/irf.hpp"
#include "gvar/model.hpp"
#include "gvar/sim.hpp"

namespace gvar {

nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GvarSolution& s, const std::vector<YearMonth>& dates = {});
GvarSolution solution_from_json(const nlohmann::json& j);
/// Dates of the residual window stored alongside a solution.
std::vector<YearMonth> residual_dates_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VarxEstimate& e);
nlohmann::json to_json(const DominantEstimate& e);
nlohmann::json to_json(const GvarModel& m);

nlohmann::json to_json(const IdentResult& r, const std::vector<IdentTarget>& targets);
nlohmann::json to_json(const SyntheticDgp& d);

void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json(const std::string& path);

std::string format_double(double v);

void write_irf_csv(const IrfSet& set, const std::string& path);
void write_decomposition_csv(const Decomposition& d, const std::vector<std::string>& var_labels,
                             const std::vector<std::string>& shock_labels, const std::string& path);
void write_shocks_csv(const std::vector<YearMonth>& dates, const Matrix& shocks,
                      const std::vector<IdentTarget>& targets, const std::string& path);
void write_ftest_table(const std::vector<FTestResult>& results, const std::string& path);
void write_ftest_long(const std::vector<FTestResult>& results, const std::string& path);
void write_autocorrelation_csv(const Autocorrelation& a, const GlobalIndex& index, const std::string& path);
void write_eigenvalues_csv(const Spectrum& s, const std::string& path);

}  // namespace gvar
