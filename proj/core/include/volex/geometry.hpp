#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "volex/chart.hpp"
#include "volex/expr.hpp"
#include "volex/jet.hpp"
#include "volex/linalg.hpp"

namespace volex::geom {

/// Metric component expressions g_ij on a chart; symmetric by
/// construction (lower triangle stored).
class MetricSpec {
 public:
  MetricSpec(const Chart& chart, std::vector<Expr> lower_triangle);
  static MetricSpec parse(const Chart& chart, const std::vector<std::vector<std::string>>& rows);

  int dim() const { return n_; }
  const Expr& at(int i, int j) const { return comps_[Jet2::pack(i, j)]; }

  /// Component values only (no derivatives).
  Matrix values(std::span<const double> p) const;

 private:
  int n_;
  std::vector<Expr> comps_;  // packed lower triangle
};

/// Vector field component expressions X^k on a chart.
class VectorFieldSpec {
 public:
  VectorFieldSpec(const Chart& chart, std::vector<Expr> components);
  static VectorFieldSpec parse(const Chart& chart, const std::vector<std::string>& comps);

  int dim() const { return static_cast<int>(comps_.size()); }
  const Expr& component(int k) const { return comps_[k]; }

  std::vector<double> values(std::span<const double> p) const;
  std::vector<Jet2> jets(std::span<const double> p) const;

 private:
  std::vector<Expr> comps_;
};

/// Metric value, gradient and Hessian at a point: g_ij, d_k g_ij, d_k d_l g_ij.
class MetricJets {
 public:
  MetricJets(const MetricSpec& g, std::span<const double> p);
  int dim() const { return n_; }
  const Matrix& value() const { return value_; }
  double d(int k, int i, int j) const { return comps_[Jet2::pack(i, j)].grad(k); }
  double dd(int k, int l, int i, int j) const { return comps_[Jet2::pack(i, j)].hess(k, l); }

 private:
  int n_;
  std::vector<Jet2> comps_;
  Matrix value_;
};

/// Levi-Civita connection coefficients, symmetric in the lower index pair.
class Christoffel {
 public:
  explicit Christoffel(int n);
  int dim() const { return n_; }
  double& at(int k, int i, int j) { return data_[idx(k, i, j)]; }
  double at(int k, int i, int j) const { return data_[idx(k, i, j)]; }

 private:
  std::size_t idx(int k, int i, int j) const {
    return static_cast<std::size_t>(k) * m_ + Jet2::pack(i, j);
  }
  int n_;
  std::size_t m_;
  std::vector<double> data_;
};

struct MetricData {
  Matrix matrix;
  Matrix inverse;
  double det;
  double sqrt_abs_det;
};

struct CurvaturePack {
  Christoffel gamma;
  Matrix ricci;   // symmetric as stored (lower triangle computed, mirrored)
  double scalar;  // s = trace_g Ric
};

struct ExpansionAcceleration {
  double lie_of_div;   // xi^k d_k(div xi)
  double accel_coeff;  // lie_of_div + (div xi)^2
};

/// Metric matrix/inverse/determinant at a point; throws SingularMetric
/// when |det| < 1e-14 and checks the declared signature.
MetricData metric_at(const Chart& chart, const MetricSpec& g, std::span<const double> p);

/// sqrt|det g| only; no signature check (that is validated once per
/// scenario, not per grid node). Throws SingularMetric.
double sqrt_abs_det_at(const MetricSpec& g, std::span<const double> p);

/// Signature check via eigenvalue signs; throws SignatureMismatch.
void check_signature(const Chart& chart, const Matrix& g_matrix);

/// Gamma^k_ij = (1/2) g^{kl} (d_i g_jl + d_j g_il - d_l g_ij).
Christoffel christoffel(const Chart& chart, const MetricSpec& g, std::span<const double> p);
Christoffel christoffel(const MetricJets& jets, const Matrix& inv);

/// Ricci tensor and scalar curvature. Gamma is exact from jets of g;
/// dGamma is central-differenced with step 1e-5 scaled per coordinate.
/// Convention anchored so the unit 2-sphere has scalar curvature +2.
CurvaturePack curvature(const Chart& chart, const MetricSpec& g, std::span<const double> p);

/// div X = (1/sqrt|g|) d_k (sqrt|g| X^k), evaluated exactly from jets.
double divergence(const Chart& chart, const MetricSpec& g, const VectorFieldSpec& x,
                  std::span<const double> p);

/// Coefficient of the volume-element Lie derivative; computed through the
/// log-determinant route (determinant propagated in jet arithmetic), an
/// independent code path from divergence().
double lie_volume_rate(const Chart& chart, const MetricSpec& g, const VectorFieldSpec& xi,
                       std::span<const double> p);

/// Gradient of the scalar field div X, exact from order-2 jets of g and X.
std::vector<double> divergence_gradient(const Chart& chart, const MetricSpec& g,
                                        const VectorFieldSpec& x, std::span<const double> p);

ExpansionAcceleration expansion_acceleration(const Chart& chart, const MetricSpec& g,
                                             const VectorFieldSpec& xi,
                                             std::span<const double> p);

/// (L_xi g)_ij = xi^k d_k g_ij + g_kj d_i xi^k + g_ik d_j xi^k.
Matrix lie_metric(const Chart& chart, const MetricSpec& g, const VectorFieldSpec& xi,
                  std::span<const double> p);

/// Acceleration of the flow: xidot^k = xi^i d_i xi^k + Gamma^k_ij xi^i xi^j.
std::vector<double> acceleration_vector(const Chart& chart, const MetricSpec& g,
                                        const VectorFieldSpec& xi, std::span<const double> p);

/// Divergence of a derived (non-expression) vector field by central
/// finite differences of sqrt|g| F^k; step is scaled per coordinate.
using FieldFn = std::function<std::vector<double>(std::span<const double>)>;
double divergence_of(const Chart& chart, const MetricSpec& g, const FieldFn& field,
                     std::span<const double> p, double step = 1e-5);

/// Finite-difference step for coordinate k at base value x.
inline double fd_step(double h0, double x) {
  const double a = std::abs(x);
  return h0 * (a > 1.0 ? a : 1.0);
}

}  // namespace volex::geom
