#include "volex/flow.hpp"

#include <cmath>

#include "volex/errors.hpp"

namespace volex::flow {

namespace {

void eval_field(const geom::VectorFieldSpec& xi, std::span<const double> x,
                std::vector<double>& out) {
  const int n = xi.dim();
  out.resize(n);
  for (int k = 0; k < n; ++k) out[k] = xi.component(k).eval(x);
}

// One RK4 step (plain values).
void rk4_step(const geom::VectorFieldSpec& xi, std::vector<double>& x, double dt) {
  const int n = static_cast<int>(x.size());
  static thread_local std::vector<double> k1, k2, k3, k4, tmp;
  eval_field(xi, x, k1);
  tmp.resize(n);
  for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
  eval_field(xi, tmp, k2);
  for (int i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
  eval_field(xi, tmp, k3);
  for (int i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
  eval_field(xi, tmp, k4);
  for (int i = 0; i < n; ++i)
    x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// One RK4 step in jet arithmetic seeded on the initial point; the
// endpoint jets carry the step-map Jacobian.
std::vector<Jet2> rk4_step_jets(const geom::VectorFieldSpec& xi, std::span<const double> x0,
                                double dt) {
  const int n = static_cast<int>(x0.size());
  std::vector<Jet2> x(n);
  for (int i = 0; i < n; ++i) x[i] = Jet2::variable(n, i, x0[i]);
  auto field = [&](const std::vector<Jet2>& pt) {
    std::vector<Jet2> f(n);
    for (int k = 0; k < n; ++k) f[k] = xi.component(k).eval_at(pt);
    return f;
  };
  const Jet2 half = Jet2::constant(n, 0.5 * dt);
  const Jet2 full = Jet2::constant(n, dt);
  auto k1 = field(x);
  std::vector<Jet2> tmp(n);
  for (int i = 0; i < n; ++i) tmp[i] = x[i] + half * k1[i];
  auto k2 = field(tmp);
  for (int i = 0; i < n; ++i) tmp[i] = x[i] + half * k2[i];
  auto k3 = field(tmp);
  for (int i = 0; i < n; ++i) tmp[i] = x[i] + full * k3[i];
  auto k4 = field(tmp);
  const Jet2 sixth = Jet2::constant(n, dt / 6.0);
  const Jet2 two = Jet2::constant(n, 2.0);
  for (int i = 0; i < n; ++i)
    x[i] = x[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
  return x;
}

}  // namespace

FlowPath integrate_trajectory(const Chart& chart, const geom::VectorFieldSpec& xi,
                              std::span<const double> x0, double t_final, int steps) {
  if (steps < 1) throw Error("integrate_trajectory: steps must be >= 1");
  if (!(t_final > 0.0)) throw Error("integrate_trajectory: t_final must be positive");
  if (!chart.contains(x0)) throw LeftDomain("initial point outside chart bounds", 0.0);

  const int n = chart.dim();
  const double dt = t_final / steps;
  FlowPath path;
  path.times.reserve(steps + 1);
  path.points.reserve(steps + 1);

  std::vector<double> x(x0.begin(), x0.end());
  chart.wrap(x);
  path.times.push_back(0.0);
  path.points.push_back(x);

  for (int s = 1; s <= steps; ++s) {
    std::vector<double> prev = x;
    rk4_step(xi, x, dt);
    for (double c : x)
      if (!std::isfinite(c)) throw NonFinite("trajectory became non-finite");
    // Bounded coordinates: estimate the crossing time by linear
    // interpolation between the last inside point and the violator.
    for (int i = 0; i < n; ++i) {
      if (!chart.bounded(i)) continue;
      const auto [lo, hi] = chart.bounds(i);
      if (x[i] >= lo && x[i] <= hi) continue;
      const double target = x[i] < lo ? lo : hi;
      const double denom = x[i] - prev[i];
      const double frac = denom != 0.0 ? (target - prev[i]) / denom : 0.0;
      throw LeftDomain("trajectory left chart bounds in coordinate '" + chart.name(i) + "'",
                       (s - 1 + frac) * dt);
    }
    chart.wrap(x);
    path.times.push_back(s * dt);
    path.points.push_back(x);
  }
  return path;
}

double lie_pullback_estimate(const Chart& chart, const geom::MetricSpec& g,
                             const geom::VectorFieldSpec& xi, PullbackQuantity quantity,
                             std::span<const double> p, double h, const Expr* scalar_field) {
  if (!(h > 0.0)) throw Error("lie_pullback_estimate: h must be positive");

  auto flowed = [&](double dt) { return rk4_step_jets(xi, p, dt); };

  if (quantity == PullbackQuantity::ScalarField) {
    if (!scalar_field) throw Error("scalar-field pullback requires a field expression");
    auto value_at = [&](double dt) {
      const auto jets = flowed(dt);
      std::vector<double> q(jets.size());
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = jets[i].value();
      if (!chart.contains(q)) throw LeftDomain("pullback stencil left chart bounds", dt);
      return scalar_field->eval(q);
    };
    return (value_at(h) - value_at(-h)) / (2.0 * h);
  }

  // Volume coefficient: Q(t) = sqrt|g|(phi_t(p)) * det(D phi_t), estimated
  // with one jet-differentiated RK4 step per side; normalized by
  // sqrt|g|(p) so the result estimates div xi at p.
  auto q_at = [&](double dt) {
    const auto jets = flowed(dt);
    const int n = static_cast<int>(jets.size());
    std::vector<double> q(n);
    Matrix jac(n);
    for (int i = 0; i < n; ++i) {
      q[i] = jets[i].value();
      for (int j = 0; j < n; ++j) jac(i, j) = jets[i].grad(j);
    }
    if (!chart.contains(q)) throw LeftDomain("pullback stencil left chart bounds", dt);
    return geom::sqrt_abs_det_at(g, q) * determinant(jac);
  };
  const double root = geom::sqrt_abs_det_at(g, p);
  return (q_at(h) - q_at(-h)) / (2.0 * h * root);
}

const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Constant: return "constant";
    case Monotonicity::Nondecreasing: return "nondecreasing";
    case Monotonicity::Nonincreasing: return "nonincreasing";
    case Monotonicity::Mixed: return "mixed";
  }
  return "?";
}

Monotonicity classify_sequence(std::span<const double> values, double tol) {
  bool nondec = true, noninc = true;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double d = values[i] - values[i - 1];
    if (d < -tol) nondec = false;
    if (d > tol) noninc = false;
  }
  if (nondec && noninc) return Monotonicity::Constant;
  if (nondec) return Monotonicity::Nondecreasing;
  if (noninc) return Monotonicity::Nonincreasing;
  return Monotonicity::Mixed;
}

MonotonicityReport monotonicity_profile(const Chart& chart, const geom::MetricSpec& g,
                                        const geom::VectorFieldSpec& xi, const FlowPath& path) {
  MonotonicityReport rep;
  const std::size_t m = path.points.size();
  rep.div_xi.values.reserve(m);
  rep.lie_div_xi.values.reserve(m);
  for (const auto& pt : path.points) {
    rep.div_xi.values.push_back(geom::divergence(chart, g, xi, pt));
    rep.lie_div_xi.values.push_back(geom::expansion_acceleration(chart, g, xi, pt).lie_of_div);
  }
  for (QuantityProfile* q : {&rep.div_xi, &rep.lie_div_xi}) {
    q->classification = classify_sequence(q->values);
    q->min = q->values.empty() ? 0.0 : q->values[0];
    q->max = q->min;
    for (double v : q->values) {
      q->min = std::min(q->min, v);
      q->max = std::max(q->max, v);
    }
  }
  return rep;
}

}  // namespace volex::flow
