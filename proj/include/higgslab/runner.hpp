#pragma once

#include <iosfwd>

#include "higgslab/config.hpp"

namespace higgslab {

struct RunOutcome {
  int exit_code = 0;  // 0 success, 1 no usable results, 2 invalid input
  std::vector<std::string> artifacts;
  std::string summary;
};

/// Execute the configured experiment; writes CSV + SVG artifacts with
/// metadata sidecars into the configured output directory. Per-point
/// numerical failures are recorded in the output and only an entirely
/// failed run is a nonzero exit.
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// Dry-run validation: dimensions, memory estimate and the predicted
/// shot budget. Never fails; always returns a report.
std::string verify_report(const ExperimentConfig& cfg);

/// Execute the independent numerical oracles and print one PASS/FAIL
/// line each; returns true when everything passed.
bool run_oracle_suite(std::ostream& out);

/// Resolved configuration as JSON (metadata sidecars).
std::string resolved_config_json(const ExperimentConfig& cfg);

}  // namespace higgslab
