#pragma once

// Run configuration: a JSON document, with relative paths resolved against
// the directory holding it.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gvar/ident.hpp"
#include "gvar/irf.hpp"
#include "gvar/model.hpp"

namespace gvar {

struct TargetSpec {
  std::string country;
  std::string first = "EPU";
  std::string second = "CISS";
};

struct RunConfig {
  std::string panel;
  std::string meta;
  std::vector<std::string> exposures;     // annual exposure matrices, averaged
  std::vector<std::string> bis_claims;    // optional, paired with bis_liabilities
  std::vector<std::string> bis_liabilities;
  std::string weights;                    // precomputed weight matrix (overrides exposures)
  std::string benchmark;
  std::vector<CountrySpec> countries;
  std::optional<DominantSpec> dominant;
  std::vector<TargetSpec> targets;
  double sigma_h = 0.1;
  std::size_t bootstrap = 500;
  std::size_t max_draws = 100;
  int h_max = 24;
  int window = 6;
  double coverage = 0.68;
  Scaling scaling = Scaling::standardized;
  BlockLayout layout = BlockLayout::single;
  DrawScheme scheme = DrawScheme::block_cayley;
  int cov_dof_correction = 0;
  std::optional<std::uint64_t> seed;
  std::string output = "out";
  unsigned jobs = 1;
  int acf_lags = 12;

  std::uint64_t require_seed() const;
};

RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);

/// Weight matrix from the configured sources.
WeightMatrix load_weights(const RunConfig& c);

/// Panel with every configured transform applied.
Panel load_config_panel(const RunConfig& c);

ModelSpec model_spec(const RunConfig& c, const Panel& panel);
std::vector<IdentTarget> ident_targets(const RunConfig& c, const GlobalIndex& index);
IdentConfig ident_config(const RunConfig& c);
BootstrapConfig bootstrap_config(const RunConfig& c);

}  // namespace gvar
