#pragma once

#include <map>
#include <string>
#include <vector>

#include "fkv/evolution.hpp"
#include "fkv/mesh.hpp"

namespace fkv {

/// Fully validated experiment description. Zero-valued discretization and
/// evolution entries mean "use the per-model default"; resolve_defaults()
/// fills them in.
struct ExperimentConfig {
  ModelSpec model;

  // [fractional]
  double alpha = 0.5;
  double eta = 1.0;

  // [discretization]
  int n_left = 0;
  int n_right = 0;
  int n_xi = 0;
  double xi_max = 0.0;
  double quad_tol = 1e-3;  // accuracy contract of the experiment's xi grid

  // [evolution]
  double T = 0.0;
  double dt = 0.0;
  int sample_every = 0;
  InitialProfile profile = InitialProfile::SmoothBump;
  double tail_fraction = 0.5;

  // [sweep]
  double lambda_min = 0.0;  // 0: derived from the validity window
  double lambda_max = 0.0;
  int n_points = 12;
  bool refine_peaks = true;
  double mesh_refine = 1.5;  // second resolution of the two-mesh protocol

  // [output]
  std::string out_dir = "out";
  std::string format = "csv";

  unsigned seed = 1234;
};

/// Parses the sectioned key=value text schema. Errors name the offending
/// line, key and the violated constraint.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Applies one "section.key=value" override.
void apply_override(ExperimentConfig& config, const std::string& assignment);

/// Fills zero-valued entries with the per-model defaults.
void resolve_defaults(ExperimentConfig& config);

/// Every config key with its effective value, for output metadata.
std::vector<std::pair<std::string, std::string>> config_echo(
    const ExperimentConfig& config);

}  // namespace fkv
