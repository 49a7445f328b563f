#pragma once

#include <optional>
#include <string>
#include <vector>

#include "volex/report.hpp"
#include "volex/scenario.hpp"

namespace volex::cli {

struct AnalysisOptions {
  std::optional<int> grid;    // override every axis count
  std::optional<double> tol;  // override the analysis default tolerance
};

/// Valid analysis identifiers, in documentation order.
const std::vector<std::string>& analysis_names();

/// Run one analysis on a validated scenario. Deterministic: identical
/// inputs produce identical reports. Tolerances are per-analysis defaults
/// unless overridden, and every judged record carries the one it used.
Report run_analysis(const Scenario& s, const std::string& analysis,
                    const AnalysisOptions& opt = {});

}  // namespace volex::cli
