#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "volex/chart.hpp"
#include "volex/flow.hpp"
#include "volex/geometry.hpp"
#include "volex/integrate.hpp"

namespace volex::soliton {

/// A candidate Ricci-soliton structure: -2 Ric = L_xi g + 2 lambda g.
struct SolitonSpec {
  const Chart* chart;
  const geom::MetricSpec* g;
  const geom::VectorFieldSpec* xi;
  double lambda;

  SolitonSpec(const Chart& c, const geom::MetricSpec& metric, const geom::VectorFieldSpec& field,
              double lam);
};

/// 2 Ric + L_xi g + 2 lambda g at a point; the zero matrix iff the
/// structure is a soliton there.
struct SolitonResidual {
  Matrix matrix;
  double max_abs;
};
SolitonResidual soliton_residual(const SolitonSpec& s, std::span<const double> p);

/// Pointwise identity for the log-rate field of a soliton:
///   div((div xi) xi) = -L_xi s + (s + n lambda)^2.
/// When the structure is not numerically a soliton at p the identity need
/// not hold and hypothesis_met is false.
struct LogRateIdentity {
  double lhs;
  double rhs;
  double residual;
  double scalar_curvature;
  double lie_scalar;       // xi^k d_k s (directional finite difference)
  bool hypothesis_met;     // soliton residual below threshold at p
  double soliton_residual; // the max-abs used for the hypothesis check
};
LogRateIdentity log_rate_identity(const SolitonSpec& s, std::span<const double> p,
                         double hypothesis_tol = 1e-6);

/// Monotone-scalar-curvature diagnostic along a flow path: when L_xi s is
/// nonincreasing the forced conclusions are s = -n lambda and div xi = 0;
/// both are reported with pass thresholds, together with integrability
/// telemetry over nested truncations when a region is supplied.
struct MonotoneCurvatureReport {
  flow::Monotonicity lie_scalar_class;  // classification of s along the path
  double max_abs_s_plus_n_lambda;
  double max_abs_div_xi;
  bool conclusion_s_pass;    // |s + n lambda| <= 1e-6 along the path
  bool conclusion_div_pass;  // |div xi| <= 1e-6 along the path
  bool hypothesis_monotone;  // L_xi s nonincreasing along the path
  std::optional<double> l1_inner;   // truncated L1 of (div xi) xi, inner box
  std::optional<double> l1_outer;   // same over the enlarged box
  bool l1_growing;                  // outer noticeably exceeds inner
  std::string note;
};
MonotoneCurvatureReport monotone_curvature_diagnostic(const SolitonSpec& s, const flow::FlowPath& path,
                             const quad::Region* l1_region = nullptr,
                             const quad::GridSpec* l1_grid = nullptr);

}  // namespace volex::soliton
