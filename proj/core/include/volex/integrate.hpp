#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "volex/chart.hpp"
#include "volex/geometry.hpp"

namespace volex::quad {

/// Per-coordinate sample counts. Periodic directions use N equal
/// intervals with no duplicated endpoint (trapezoid, spectrally accurate
/// for smooth periodic integrands); bounded directions use composite
/// Simpson including both endpoints (N rounded up to odd).
class GridSpec {
 public:
  explicit GridSpec(std::vector<int> counts);
  static GridSpec uniform(int n, int axes);

  const std::vector<int>& counts() const { return counts_; }
  int count(int axis) const { return counts_[axis]; }

 private:
  std::vector<int> counts_;
};

struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Quadrature rule for one chart axis over its full domain.
AxisRule axis_rule(const Chart& chart, int axis, int n);
/// Rule over an explicit closed interval (composite Simpson).
AxisRule simpson_rule(double lo, double hi, int n);

using ScalarFn = std::function<double(std::span<const double>)>;

/// integral of f dv over the whole (compact) chart; the integrand is
/// f * sqrt|det g| and the reduction is deterministic pairwise summation.
double integrate(const Chart& chart, const geom::MetricSpec& g, const ScalarFn& f,
                 const GridSpec& grid);

/// Vol(M) = integral of 1; must be positive.
double total_volume(const Chart& chart, const geom::MetricSpec& g, const GridSpec& grid);

struct GreenResult {
  double residual;      // integral of div X dv (should vanish on a closed chart)
  double abs_integral;  // integral of |div X| dv, for relative judging
};

/// Closed-manifold balance of the divergence integral.
GreenResult green_check(const Chart& chart, const geom::MetricSpec& g,
                        const geom::VectorFieldSpec& x, const GridSpec& grid);

struct LogRateGreenResult {
  double residual;  // integral of (L_xi(div xi) + (div xi)^2) dv
  double integrand_min;
  double integrand_max;
};

/// Balance of the expansion-acceleration integral; the integrand sign
/// data feeds the flow diagnostics.
LogRateGreenResult log_rate_green_check(const Chart& chart, const geom::MetricSpec& g,
                                        const geom::VectorFieldSpec& xi, const GridSpec& grid);

/// A product sub-region of a chart. Axes with sub-bounds contribute two
/// boundary faces each (outward orientation implied); every other axis
/// must be periodic when the region is used for boundary balance.
class Region {
 public:
  Region(const Chart& chart,
         std::vector<std::optional<std::pair<double, double>>> sub_bounds);

  const Chart& chart() const { return *chart_; }
  bool has_sub_bounds(int axis) const { return static_cast<bool>(sub_bounds_[axis]); }
  std::pair<double, double> sub_bounds(int axis) const { return *sub_bounds_[axis]; }

  struct Face {
    int axis;
    double value;
    int orientation;  // +1 at the upper bound, -1 at the lower bound
  };
  std::vector<Face> faces() const;

 private:
  const Chart* chart_;
  std::vector<std::optional<std::pair<double, double>>> sub_bounds_;
};

/// integral of f dv over a region (sub-bounded axes use Simpson on the
/// sub-interval; other axes use their full-domain rule).
double integrate_region(const Region& region, const geom::MetricSpec& g, const ScalarFn& f,
                        const GridSpec& grid);

struct BoundaryResult {
  double bulk;      // integral over the region of div X dv
  double boundary;  // sum over faces of the signed flux
  double residual;  // bulk - boundary
};

/// Divergence-theorem balance for an expression vector field.
BoundaryResult boundary_check(const Region& region, const geom::MetricSpec& g,
                              const geom::VectorFieldSpec& x, const GridSpec& grid);

/// Balance for the derived field (div xi) xi: the bulk integrand is the
/// exact expansion-acceleration coefficient and the flux is (div xi) xi^a.
BoundaryResult boundary_check_log_rate(const Region& region, const geom::MetricSpec& g,
                                       const geom::VectorFieldSpec& xi, const GridSpec& grid);

struct L1Result {
  double value;
  bool causal_warning;  // g(X,X) < 0 encountered (timelike stretches)
};

/// integral over the region of sqrt|g(X,X)| dv; the truncated-domain
/// monitor for integrability hypotheses (never a global assertion).
L1Result truncated_l1(const Region& region, const geom::MetricSpec& g,
                      const geom::VectorFieldSpec& x, const GridSpec& grid);

}  // namespace volex::quad
