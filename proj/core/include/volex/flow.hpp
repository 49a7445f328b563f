#pragma once

#include <span>
#include <string>
#include <vector>

#include "volex/chart.hpp"
#include "volex/geometry.hpp"

namespace volex::flow {

/// A sampled trajectory of the local one-parameter group generated by a
/// vector field: strictly increasing parameter values and the points
/// reached (periodic coordinates wrapped into [0, period)).
struct FlowPath {
  std::vector<double> times;
  std::vector<std::vector<double>> points;
};

/// Classic fixed-step RK4 integration of dx^k/dt = xi^k(x) from x0 over
/// [0, t_final]. Throws LeftDomain (with an exit-time estimate) when the
/// trajectory crosses a bounded coordinate interval, NonFinite on blowup.
FlowPath integrate_trajectory(const Chart& chart, const geom::VectorFieldSpec& xi,
                              std::span<const double> x0, double t_final, int steps);

enum class PullbackQuantity { VolumeCoefficient, ScalarField };

/// Flow-pullback estimate of a Lie derivative at p by central differences
/// of the pulled-back quantity at parameter +-h. For the volume
/// coefficient the flow-map Jacobian determinant is obtained by
/// differentiating a single RK4 step in jet arithmetic, and the result is
/// normalized by sqrt|g|(p) so it estimates the expansion rate div xi.
double lie_pullback_estimate(const Chart& chart, const geom::MetricSpec& g,
                             const geom::VectorFieldSpec& xi, PullbackQuantity quantity,
                             std::span<const double> p, double h,
                             const Expr* scalar_field = nullptr);

enum class Monotonicity { Constant, Nondecreasing, Nonincreasing, Mixed };

const char* to_string(Monotonicity m);

struct QuantityProfile {
  std::vector<double> values;
  Monotonicity classification;
  double min;
  double max;
};

struct MonotonicityReport {
  QuantityProfile div_xi;      // div xi along the path
  QuantityProfile lie_div_xi;  // xi^k d_k(div xi) along the path
};

/// Sample div xi and its derivative along the flow and classify each as
/// nondecreasing / nonincreasing / constant / mixed with tolerance 1e-9.
MonotonicityReport monotonicity_profile(const Chart& chart, const geom::MetricSpec& g,
                                        const geom::VectorFieldSpec& xi, const FlowPath& path);

/// Classify a sampled sequence with the given slack.
Monotonicity classify_sequence(std::span<const double> values, double tol = 1e-9);

}  // namespace volex::flow
