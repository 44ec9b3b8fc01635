#pragma once

// Panel ingestion, variable transforms, exposure weights and foreign aggregates.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gvar/common.hpp"

namespace gvar {

enum class Role { domestic, common, dominant };
/// `spread` means: yield-adjust this column and the benchmark country's
/// same-named column, then take the difference.
enum class Transform { none, log, yield_adjust, spread };

std::string to_string(Role r);
std::string to_string(Transform t);
Role parse_role(const std::string& s);
Transform parse_transform(const std::string& s);

struct SeriesMeta {
  std::string column;
  std::string country;
  std::string name;
  Role role = Role::domestic;
  Transform transform = Transform::none;
  bool transformed = false;
};

struct YearMonth {
  int year = 0;
  int month = 0;  // 1..12

  int ordinal() const { return year * 12 + (month - 1); }
  YearMonth next() const { return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1}; }
  std::string str() const;
  static YearMonth parse(const std::string& s);
  friend bool operator==(const YearMonth&, const YearMonth&) = default;
};

struct Panel {
  std::vector<YearMonth> dates;
  Matrix values;  // T x K
  std::vector<SeriesMeta> meta;

  Index periods() const { return values.rows(); }
  Index series() const { return values.cols(); }

  std::optional<Index> find(const std::string& country, const std::string& name) const;
  /// Series with role common or dominant, looked up by name.
  std::optional<Index> find_common(const std::string& name) const;
  Index require(const std::string& country, const std::string& name) const;

  /// Checks the panel invariants (unique keys, monthly dates, finite values).
  void validate() const;
};

struct WeightMatrix {
  std::vector<std::string> countries;
  Matrix w;  // N x N, zero diagonal, rows sum to one

  std::optional<Index> index_of(const std::string& country) const;
  void validate(double tol = 1e-12) const;
};

/// Square matrix with row/column labels, as stored in exposure files.
struct LabeledMatrix {
  std::vector<std::string> labels;
  Matrix values;
};

struct CountrySpec {
  std::string country;
  std::vector<std::string> domestic_vars;
  std::vector<std::string> foreign_vars;
  std::vector<std::string> common_vars;
  int p = 1;
  int q = 0;

  void validate() const;
  void validate(const Panel& panel) const;
};

// -- ingestion --------------------------------------------------------------

std::vector<SeriesMeta> load_meta(const std::string& meta_path);
Panel read_panel_csv(const std::string& csv_path, const std::vector<SeriesMeta>& meta);
Panel load_panel(const std::string& csv_path, const std::string& meta_path);
void write_panel_csv(const Panel& panel, const std::string& csv_path);
void write_meta(const std::vector<SeriesMeta>& meta, const std::string& meta_path);

LabeledMatrix read_labeled_matrix(const std::string& csv_path);
void write_labeled_matrix(const LabeledMatrix& m, const std::string& csv_path);

// -- transforms -----------------------------------------------------------

/// (1/12) ln(1 + y/100) for a yield quoted in percent per annum.
double yield_adjust(double yield_percent);

/// Applies each series' declared transform once. Spread series are computed
/// against `benchmark`, whose own spread column is dropped.
Panel apply_transforms(const Panel& panel, const std::string& benchmark);

// -- weights ----------------------------------------------------------------

/// Elementwise mean of annual exposure matrices sharing the same labels.
LabeledMatrix average_exposures(const std::vector<LabeledMatrix>& years);

/// Zeroes the diagonal and row-normalises by the off-diagonal sums.
WeightMatrix build_weights(const LabeledMatrix& exposures);

/// (claims[i,h] + liabilities[h,i]) / 2.
Matrix bis_symmetrize(const Matrix& claims, const Matrix& liabilities);

/// Counterpart weights for one foreign variable, renormalised over the
/// countries where the variable is available.
std::vector<std::pair<std::string, double>> foreign_weights(
    const std::string& country, const std::string& variable, const WeightMatrix& w,
    const std::vector<std::string>& available_countries);

/// Foreign aggregates Y*_i (T x m), one column per spec.foreign_vars entry.
Matrix foreign_series(const Panel& panel, const CountrySpec& spec, const WeightMatrix& w);

/// Columns of the named common series (T x x).
Matrix common_series(const Panel& panel, const std::vector<std::string>& names);

/// Domestic block of a country (T x k).
Matrix domestic_series(const Panel& panel, const CountrySpec& spec);

/// Weights of members for the dominant unit's feedback aggregates: the
/// members' exposures to each other, summed by column and normalised.
std::vector<std::pair<std::string, double>> member_weights(const WeightMatrix& w,
                                                           const std::vector<std::string>& members);

}  // namespace gvar
