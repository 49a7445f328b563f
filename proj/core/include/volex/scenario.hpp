#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "volex/chart.hpp"
#include "volex/geometry.hpp"
#include "volex/integrate.hpp"
#include "volex/lorentz.hpp"

namespace volex::cli {

struct SliceRef {
  int axis;
  double value;
};

struct FlowWindow {
  std::vector<double> start;
  double t_final;
  int steps;
};

/// A fully validated scenario: chart, metric, vector field, and the
/// optional blocks the analyses need. The declared signature is checked
/// at 20 deterministic sample points on load.
struct Scenario {
  std::string name;
  std::shared_ptr<const Chart> chart;
  std::shared_ptr<const geom::MetricSpec> metric;
  std::shared_ptr<const geom::VectorFieldSpec> field;
  std::optional<double> lambda;
  std::optional<lorentz::FluidParams> fluid;
  std::optional<SliceRef> slice;
  std::optional<std::vector<std::optional<std::pair<double, double>>>> region_bounds;
  std::optional<FlowWindow> flow;
  std::vector<int> grid;  // per chart axis
  std::optional<std::vector<std::pair<double, double>>> sample_bounds;

  quad::Region region() const;
  /// Per-axis bounds used for random sampling (sample_bounds when given,
  /// otherwise the chart domain).
  std::vector<std::pair<double, double>> sampling_box() const;
};

/// Load and validate a scenario file. Throws IoError, ParseError (with
/// the offending key path), SchemaError, SignatureMismatch.
Scenario load_scenario(const std::string& path);
/// Same from an in-memory JSON document.
Scenario parse_scenario(const std::string& json_text);

}  // namespace volex::cli
