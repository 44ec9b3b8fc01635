#pragma once

// Minimal deterministic SVG charts for diagnostics and impulse responses.

#include <string>
#include <vector>

#include "gvar/gvar_core.hpp"
#include "gvar/irf.hpp"

namespace gvar::svg {

struct Series {
  std::string label;
  std::vector<double> y;
  std::vector<double> lo;  // optional band
  std::vector<double> hi;
};

std::string line_chart(const std::string& title, const std::vector<Series>& series, const std::string& x_label = "horizon");
std::string eigenvalue_moduli(const Spectrum& s);
std::string autocorrelation_bars(const Autocorrelation& a, const GlobalIndex& index, Index max_vars = 12);
std::string histogram(const std::string& title, const std::vector<double>& values, int bins = 30);
std::string stacked_bars(const std::string& title, const std::vector<std::string>& labels,
                         const std::vector<double>& direct, const std::vector<double>& spillover);

/// Vertical bars with an optional horizontal reference line (NaN: none).
std::string bar_chart(const std::string& title, const std::vector<std::string>& labels, const std::vector<double>& values,
                      double reference);

/// One panel per shock: median response of `var` with its band.
std::string irf_chart(const IrfSet& set, Index var, Index shock);

void save(const std::string& doc, const std::string& path);

}  // namespace gvar::svg
