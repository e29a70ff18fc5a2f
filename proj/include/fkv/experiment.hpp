#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fkv/config.hpp"
#include "fkv/frequency.hpp"

namespace fkv {

struct StageSet {
  bool spectrum = false;
  bool evolve = false;
  bool sweep = false;
  bool report = false;  // implies the other three
};

/// Table-of-decay-results targets: the resolvent growth exponent ell and the
/// time-decay exponent 2/ell per model.
double target_resolvent_exponent(Model m, double alpha);
double target_decay_exponent(Model m, double alpha);

struct ExperimentResult {
  int exit_code = 0;  // 0 ok, 4 acceptance mismatch when check requested
  std::vector<std::pair<std::string, std::string>> summary;

  std::optional<double> spectrum_max_re;
  std::optional<double> conservative_max_abs_re;
  std::optional<DecayFit> decay;
  std::optional<DecayFit> resolvent_coarse;
  std::optional<DecayFit> resolvent_fine;
  bool monotone = false;

  std::string verdict_resolvent;  // "pass" / "fail" / ""
  std::string verdict_decay;      // "rate resolved" / "bound consistent, rate
                                  // unresolved" / "fail" / ""
};

/// Runs the requested pipeline stages (assemble -> spectrum_check ->
/// simulate -> decay_fit and/or sweep_and_fit), writes trace/sweep/fit
/// artifacts under config.out_dir, and for `report` a summary comparing
/// fitted exponents against the model's decay-rate target. With `check`,
/// exit_code 4 flags a target mismatch. Stage errors propagate with the
/// stage name attached; artifacts written before the failure are preserved.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const StageSet& stages, bool check = false);

/// Converts trace/sweep artifacts in `out_dir` into log-log two-column data
/// files plus a gnuplot command script with the target power law overlaid.
/// Throws when the artifacts are missing or empty.
void emit_plot_data(const std::string& out_dir);

}  // namespace fkv
