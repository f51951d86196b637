#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hpce/design.hpp"
#include "hpce/models.hpp"
#include "hpce/pce_model.hpp"
#include "hpce/reliability.hpp"
#include "hpce/sensitivity.hpp"

namespace hpce {

// Flat key/value config ("key = value" lines, '#' comments, dotted keys for
// grouping). CLI flags fill the same map; --config overrides all.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_file(const std::string& path);

struct ExperimentConfig {
  std::string model = "beam";  // beam|plane_truss|spatial_truss|analytic:<name>|external_csv
  int p_max = 3;
  std::string method = "sohplsr";  // sohplsr | olsr
  // exactly one of the three sample plans
  std::optional<double> gamma;  // N = ceil(gamma * P)
  std::optional<double> phi;    // N = ceil(phi * M)
  std::optional<long> n;        // explicit
  std::uint64_t seed = 42;
  std::uint64_t skip = 1;       // Sobol sequence offset
  double screening_threshold = 0.018;
  std::int64_t n_mc = 1000000;        // surrogate MC budget
  std::int64_t oracle_n_mc = 300000;  // direct-MC reference budget
  std::optional<double> failure_threshold;  // overrides the model default
  std::string output_dir = "out";
  int max_components = 200;
  std::size_t memory_budget_bytes = std::size_t(4) << 30;
  int threads = 0;  // 0 = hardware default

  // model-specific knobs
  int kl_terms = 40;      // beam
  int analytic_dim = 10;  // analytic:<name>
  std::string geometry;   // truss geometry file (defaults shipped)
  std::string design;     // external_csv: design file with responses

  ConfigMap raw;

  static ExperimentConfig from_map(const ConfigMap& map);
  int resolved_threads() const;
};

// Shipped data directory (geometry files); HPCE_DATA_DIR env overrides the
// build-time default.
std::string default_data_dir();

std::unique_ptr<RandomModel> make_model(const ExperimentConfig& config);

struct FitArtifacts {
  std::string model_path;
  std::string report_path;
  std::string design_path;
  long n = 0;
  std::uint64_t p = 0;
  PceModel model;
};

// fit -> model.json + fit_report.json + design.csv under output_dir.
FitArtifacts run_fit(const ExperimentConfig& config);

// sobol -> sobol.csv + sobol.json (+ relative-error table when a reference
// sobol.json is given).
struct SensitivityArtifacts {
  std::string csv_path;
  std::string json_path;
  SobolResult result;
};
SensitivityArtifacts run_sensitivity(const ExperimentConfig& config,
                                     const std::string& model_path,
                                     const std::string& reference_path = "");

// reliability -> screen, reconstruct, surrogate MC; reliability.json.
struct ReliabilityArtifacts {
  std::string json_path;
  ReliabilityResult result;
};
ReliabilityArtifacts run_reliability(const ExperimentConfig& config,
                                     const std::string& model_path);

// oracle: direct MC on the true model ("pf") or pick-freeze Sobol
// reference ("sobol"); writes oracle_pf.json / oracle_sobol.json.
std::string run_oracle(const ExperimentConfig& config, const std::string& what);

// compare: sweep of method x sample plan; one CSV row per cell, failures
// recorded per row. Returns the CSV path.
std::string run_compare(const ExperimentConfig& config);

// doe-export / doe-import.
std::string run_doe_export(const ExperimentConfig& config);
std::string run_doe_import(const ExperimentConfig& config,
                           const std::string& csv_path);

}  // namespace hpce
