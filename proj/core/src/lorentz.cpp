#include "volex/lorentz.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "volex/errors.hpp"

namespace volex::lorentz {

namespace {

constexpr double kNullTol = 1e-12;
constexpr double kEnergyThreshold = 1e-10;
constexpr double kGrowthThreshold = 1e-9;
constexpr double kStrictThreshold = 1e-6;

}  // namespace

const char* to_string(Causal c) {
  switch (c) {
    case Causal::Timelike: return "timelike";
    case Causal::Spacelike: return "spacelike";
    case Causal::Null: return "null";
  }
  return "?";
}

CausalClass causal_classify(const Chart& chart, const geom::MetricSpec& g,
                            const geom::VectorFieldSpec& x, std::span<const double> p) {
  (void)chart;
  const Matrix gm = g.values(p);
  const auto xv = x.values(p);
  double norm2 = 0.0;
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) norm2 += gm(i, j) * xv[i] * xv[j];
  CausalClass out;
  out.norm2 = norm2;
  if (std::abs(norm2) <= kNullTol) {
    out.type = Causal::Null;
    return out;
  }
  out.type = norm2 < 0.0 ? Causal::Timelike : Causal::Spacelike;
  std::vector<double> unit = xv;
  const double scale = 1.0 / std::sqrt(std::abs(norm2));
  for (double& c : unit) c *= scale;
  out.unit = std::move(unit);
  return out;
}

SliceSpec::SliceSpec(const Chart& chart, const geom::MetricSpec& g, int time_axis, double value)
    : chart_(&chart), g_(&g), time_axis_(time_axis), value_(value) {
  if (!chart.lorentzian())
    throw SignatureMismatch("slice analysis requires a Lorentzian chart");
  if (chart.dim() < 3)
    throw Error("slice analysis requires chart dimension >= 3");
  if (time_axis < 0 || time_axis >= chart.dim())
    throw Error("slice coordinate index out of range");
  if (chart.bounded(time_axis)) {
    const auto [lo, hi] = chart.bounds(time_axis);
    if (value < lo || value > hi)
      throw Error("slice value outside the chart interval for its coordinate");
  }
  for (int a = 0; a < chart.dim(); ++a)
    if (a != time_axis) spatial_axes_.push_back(a);

  // Validate the shift-free lapse form by sampling: g_ti = 0 within 1e-12,
  // g_tt < 0 (N > 0), spatial block positive definite.
  for (const auto& p : sample_domain_points(chart, 20, 0x5eed0001ULL)) {
    const Matrix gm = g.values(p);
    for (int a : spatial_axes_)
      if (std::abs(gm(time_axis, a)) > 1e-12)
        throw NotLapseForm("metric has a nonzero shift component g_t" + chart.name(a));
    if (!(gm(time_axis, time_axis) < 0.0))
      throw NotLapseForm("g_tt must be negative (lapse form)");
    Matrix h(static_cast<int>(spatial_axes_.size()));
    for (std::size_t i = 0; i < spatial_axes_.size(); ++i)
      for (std::size_t j = 0; j < spatial_axes_.size(); ++j)
        h(static_cast<int>(i), static_cast<int>(j)) = gm(spatial_axes_[i], spatial_axes_[j]);
    for (double ev : symmetric_eigenvalues(h))
      if (!(ev > 0.0)) throw NotLapseForm("induced spatial metric is not positive definite");
  }
}

std::vector<double> SliceSpec::embed(std::span<const double> spatial) const {
  std::vector<double> p(chart_->dim());
  p[time_axis_] = value_;
  for (std::size_t i = 0; i < spatial_axes_.size(); ++i) p[spatial_axes_[i]] = spatial[i];
  return p;
}

double SliceSpec::lapse(std::span<const double> p) const {
  const double gtt = g_->at(time_axis_, time_axis_).eval(p);
  if (!(gtt < 0.0)) throw NotLapseForm("g_tt must be negative (lapse form)");
  return std::sqrt(-gtt);
}

std::vector<double> SliceSpec::normal(std::span<const double> p) const {
  std::vector<double> xi(chart_->dim(), 0.0);
  xi[time_axis_] = 1.0 / lapse(p);
  return xi;
}

namespace {

// Everything extrinsic needs from the metric jets at one chart point.
struct LapseLocal {
  geom::MetricJets jets;
  int t;
  std::vector<int> sp;
  double lapse;    // N
  double dt_lapse; // d_t N
  Matrix h;
  Matrix hinv;

  LapseLocal(const SliceSpec& slice, std::span<const double> p)
      : jets(slice.metric(), p), t(slice.time_axis()), sp(slice.spatial_axes()) {
    const double gtt = jets.value()(t, t);
    if (!(gtt < 0.0)) throw NotLapseForm("g_tt must be negative (lapse form)");
    lapse = std::sqrt(-gtt);
    dt_lapse = -jets.d(t, t, t) / (2.0 * lapse);
    const int m = static_cast<int>(sp.size());
    h = Matrix(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) h(i, j) = jets.value()(sp[i], sp[j]);
    hinv = inverse(h);
  }
};

}  // namespace

double normal_divergence(const SliceSpec& slice, std::span<const double> p) {
  // Generic route: div xi = d_mu xi^mu + (1/2) xi^mu tr(g^{-1} d_mu g)
  // for xi = (-g_tt)^{-1/2} d_t; only mu = t contributes.
  const geom::MetricJets jets(slice.metric(), p);
  const int t = slice.time_axis();
  const int n = slice.chart().dim();
  const double gtt = jets.value()(t, t);
  if (!(gtt < 0.0)) throw NotLapseForm("g_tt must be negative (lapse form)");
  const double lapse = std::sqrt(-gtt);
  const double dt_xi_t = 0.5 * jets.d(t, t, t) / (lapse * lapse * lapse);
  const Matrix inv = inverse(jets.value());
  double tr = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tr += inv(i, j) * jets.d(t, j, i);
  return dt_xi_t + 0.5 * tr / lapse;
}

ShearPack extrinsic_geometry(const SliceSpec& slice, std::span<const double> spatial) {
  const auto p = slice.embed(spatial);
  LapseLocal loc(slice, p);
  const int m = static_cast<int>(loc.sp.size());

  Matrix k(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      k(i, j) = loc.jets.d(loc.t, loc.sp[i], loc.sp[j]) / (2.0 * loc.lapse);

  double theta = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) theta += loc.hinv(i, j) * k(j, i);

  Matrix sigma(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) sigma(i, j) = k(i, j) - theta / m * loc.h(i, j);

  double s2 = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          s2 += loc.hinv(i, a) * loc.hinv(j, b) * sigma(i, j) * sigma(a, b);

  const double div = normal_divergence(slice, p);
  return ShearPack{std::move(k), theta, std::move(sigma), s2, std::abs(theta - div)};
}

double normal_lie_theta(const SliceSpec& slice, std::span<const double> p) {
  LapseLocal loc(slice, p);
  const int m = static_cast<int>(loc.sp.size());
  const int t = loc.t;

  // theta = T / (2N) with T = h^{ij} d_t h_ij;
  // d_t theta = d_t T / (2N) - T d_t N / (2 N^2)
  double T = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) T += loc.hinv(i, j) * loc.jets.d(t, loc.sp[j], loc.sp[i]);

  double dT = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      // d_t h^{ij} = -h^{ia} (d_t h_ab) h^{bj}
      double dhinv = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          dhinv -= loc.hinv(i, a) * loc.jets.d(t, loc.sp[a], loc.sp[b]) * loc.hinv(b, j);
      dT += dhinv * loc.jets.d(t, loc.sp[j], loc.sp[i]);
      dT += loc.hinv(i, j) * loc.jets.dd(t, t, loc.sp[j], loc.sp[i]);
    }

  const double dtheta = dT / (2.0 * loc.lapse) - T * loc.dt_lapse / (2.0 * loc.lapse * loc.lapse);
  return dtheta / loc.lapse;  // xi^t d_t theta
}

double normal_ric_xi_xi(const SliceSpec& slice, std::span<const double> p) {
  const auto curv = geom::curvature(slice.chart(), slice.metric(), p);
  const int t = slice.time_axis();
  const double lapse = slice.lapse(p);
  return curv.ricci(t, t) / (lapse * lapse);
}

std::vector<double> normal_acceleration(const SliceSpec& slice, std::span<const double> p) {
  const int n = slice.chart().dim();
  const int t = slice.time_axis();
  const geom::Christoffel gamma = geom::christoffel(slice.chart(), slice.metric(), p);
  const geom::MetricJets jets(slice.metric(), p);
  const double gtt = jets.value()(t, t);
  if (!(gtt < 0.0)) throw NotLapseForm("g_tt must be negative (lapse form)");
  const double lapse = std::sqrt(-gtt);
  const double xi_t = 1.0 / lapse;
  // d_t xi^t for xi^t = (-g_tt)^{-1/2}
  const double dt_xi_t = 0.5 * jets.d(t, t, t) / (lapse * lapse * lapse);
  std::vector<double> acc(n, 0.0);
  for (int mu = 0; mu < n; ++mu) acc[mu] = gamma.at(mu, t, t) * xi_t * xi_t;
  acc[t] += xi_t * dt_xi_t;
  return acc;
}

RaychaudhuriTerms raychaudhuri_residual(const SliceSpec& slice,
                                        std::span<const double> spatial) {
  const auto p = slice.embed(spatial);
  const int n = slice.chart().dim();

  geom::FieldFn accel = [&](std::span<const double> q) {
    return normal_acceleration(slice, q);
  };
  const double lhs = geom::divergence_of(slice.chart(), slice.metric(), accel, p);

  const auto shear = extrinsic_geometry(slice, spatial);
  const double ric = normal_ric_xi_xi(slice, p);
  const double lie = normal_lie_theta(slice, p);
  const double theta_sq = shear.theta * shear.theta / (n - 1);
  const double rhs = ric + shear.sigma_norm2 + theta_sq + lie;
  return RaychaudhuriTerms{lhs, ric, shear.sigma_norm2, theta_sq, lie, lhs - rhs};
}

namespace {

struct SliceGrid {
  std::vector<quad::AxisRule> rules;  // one per spatial axis
  std::vector<int> axes;

  SliceGrid(const SliceSpec& slice, const quad::GridSpec& grid, bool require_periodic) {
    const Chart& chart = slice.chart();
    if (static_cast<int>(grid.counts().size()) != chart.dim())
      throw Error("grid axis count does not match chart dimension");
    for (int a : slice.spatial_axes()) {
      if (require_periodic && !chart.periodic(a))
        throw NonCompactDomain("closed-slice analysis requires periodic spatial coordinate '" +
                               chart.name(a) + "'");
      rules.push_back(quad::axis_rule(chart, a, grid.count(a)));
      axes.push_back(a);
    }
  }

  // Visit all tensor-product nodes; f(spatial_point, weight).
  void visit(const std::function<void(std::span<const double>, double)>& f) const {
    const int dim = static_cast<int>(rules.size());
    std::size_t total = 1;
    for (const auto& r : rules) total *= r.nodes.size();
    std::vector<double> q(dim);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      double w = 1.0;
      for (int a = dim - 1; a >= 0; --a) {
        const std::size_t na = rules[a].nodes.size();
        const std::size_t ia = rem % na;
        rem /= na;
        q[a] = rules[a].nodes[ia];
        w *= rules[a].weights[ia];
      }
      f(q, w);
    }
  }
};

double induced_root_det(const SliceSpec& slice, std::span<const double> spatial) {
  const auto p = slice.embed(spatial);
  const Matrix gm = slice.metric().values(p);
  const auto& sp = slice.spatial_axes();
  Matrix h(static_cast<int>(sp.size()));
  for (std::size_t i = 0; i < sp.size(); ++i)
    for (std::size_t j = 0; j < sp.size(); ++j)
      h(static_cast<int>(i), static_cast<int>(j)) = gm(sp[i], sp[j]);
  const double det = determinant(h);
  if (!(det > 0.0)) throw NotLapseForm("induced metric determinant must be positive");
  return std::sqrt(det);
}

}  // namespace

double slice_volume(const SliceSpec& slice, const quad::GridSpec& grid) {
  SliceGrid sg(slice, grid, /*require_periodic=*/false);
  std::vector<double> terms;
  sg.visit([&](std::span<const double> q, double w) {
    terms.push_back(w * induced_root_det(slice, q));
  });
  return pairwise_sum(terms);
}

SliceIntegralResult closed_slice_integral(const SliceSpec& slice, const quad::GridSpec& grid) {
  SliceGrid sg(slice, grid, /*require_periodic=*/true);
  const int n = slice.chart().dim();
  std::vector<double> terms, vol_terms;
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  sg.visit([&](std::span<const double> q, double w) {
    const auto p = slice.embed(q);
    const auto shear = extrinsic_geometry(slice, q);
    const double integrand = normal_ric_xi_xi(slice, p) + shear.sigma_norm2 +
                             shear.theta * shear.theta / (n - 1) + normal_lie_theta(slice, p);
    mn = std::min(mn, integrand);
    mx = std::max(mx, integrand);
    const double rv = induced_root_det(slice, q);
    terms.push_back(w * integrand * rv);
    vol_terms.push_back(w * rv);
  });
  return SliceIntegralResult{pairwise_sum(terms), pairwise_sum(vol_terms), mn, mx};
}

FluidCheck perfect_fluid_ricci(const SliceSpec& slice, const FluidParams& fluid,
                               std::span<const double> spatial) {
  const auto p = slice.embed(spatial);
  const double mu = fluid.mu.eval(p);
  const double rho = fluid.rho.eval(p);
  const double fluid_value = 4.0 * std::numbers::pi * (mu + 3.0 * rho);
  const double ric = normal_ric_xi_xi(slice, p);
  return FluidCheck{fluid_value, ric, fluid_value - ric};
}

EnergyScan energy_condition_scan(const SliceSpec& slice, const quad::GridSpec& grid) {
  SliceGrid sg(slice, grid, /*require_periodic=*/false);
  EnergyScan scan;
  scan.min = std::numeric_limits<double>::infinity();
  scan.max = -scan.min;
  scan.samples = 0;
  long violations = 0;
  sg.visit([&](std::span<const double> q, double) {
    const auto p = slice.embed(q);
    const double v = normal_ric_xi_xi(slice, p);
    if (v < scan.min) {
      scan.min = v;
      scan.min_point = p;
    }
    scan.max = std::max(scan.max, v);
    if (v < -kEnergyThreshold) ++violations;
    ++scan.samples;
  });
  scan.violation_fraction = scan.samples ? static_cast<double>(violations) / scan.samples : 0.0;
  return scan;
}

TheoremDiagnostics theorem_diagnostics(const SliceSpec& slice, const quad::GridSpec& grid,
                                       const flow::FlowPath* flow_window,
                                       const quad::Region* region,
                                       const QuantityOverride* inject) {
  const Chart& chart = slice.chart();
  const int n = chart.dim();
  TheoremDiagnostics diag;

  diag.slice_closed = true;
  for (int a : slice.spatial_axes())
    if (!chart.periodic(a)) diag.slice_closed = false;

  auto ric_at = [&](std::span<const double> p) {
    return inject && inject->ric_xi_xi ? inject->ric_xi_xi(p) : normal_ric_xi_xi(slice, p);
  };
  auto lie_at = [&](std::span<const double> p) {
    return inject && inject->lie_theta ? inject->lie_theta(p) : normal_lie_theta(slice, p);
  };

  // Hypothesis telemetry over the slice grid.
  diag.energy.threshold = kEnergyThreshold;
  diag.growth.threshold = kGrowthThreshold;
  diag.energy.min = std::numeric_limits<double>::infinity();
  diag.energy.max = -diag.energy.min;
  diag.growth.min = diag.energy.min;
  diag.growth.max = -diag.energy.min;
  SliceGrid sg(slice, grid, /*require_periodic=*/false);
  std::vector<double> slice_integral_terms, vol_terms;
  sg.visit([&](std::span<const double> q, double w) {
    const auto p = slice.embed(q);
    const double e = ric_at(p);
    const double l = lie_at(p);
    const auto shear = extrinsic_geometry(slice, q);
    if (e < diag.energy.min) {
      diag.energy.min = e;
      diag.energy.min_point = p;
    }
    if (e > diag.energy.max) {
      diag.energy.max = e;
      diag.energy.max_point = p;
    }
    if (l < diag.growth.min) {
      diag.growth.min = l;
      diag.growth.min_point = p;
    }
    if (l > diag.growth.max) {
      diag.growth.max = l;
      diag.growth.max_point = p;
      diag.strict_point = p;
      diag.strict_value = l;
    }
    diag.max_extrinsic = std::max(diag.max_extrinsic, shear.k.max_abs());
    const double integrand = e + shear.sigma_norm2 + shear.theta * shear.theta / (n - 1) + l;
    const double rv = induced_root_det(slice, q);
    slice_integral_terms.push_back(w * integrand * rv);
    vol_terms.push_back(w * rv);
  });
  diag.energy.holds = diag.energy.min >= -diag.energy.threshold;
  diag.growth.holds = diag.growth.min >= -diag.growth.threshold;
  diag.growth_strict = diag.growth.max > kStrictThreshold;

  diag.volume = pairwise_sum(vol_terms);
  diag.slice_integral = pairwise_sum(slice_integral_terms);
  diag.slice_integral_tolerance = 1e-6 * diag.volume;
  diag.slice_integral_balanced = std::abs(diag.slice_integral) <= diag.slice_integral_tolerance;

  if (flow_window) {
    std::vector<double> thetas;
    thetas.reserve(flow_window->points.size());
    for (const auto& pt : flow_window->points)
      thetas.push_back(normal_divergence(slice, pt));
    diag.theta_along_flow = flow::classify_sequence(thetas);
    diag.notes.push_back(std::string("expansion rate along the flow window is ") +
                         flow::to_string(*diag.theta_along_flow));
  }

  // Region balance (the boundary form of the log-rate divergence theorem)
  // for the normal congruence: only slice-coordinate faces carry flux.
  if (region) {
    std::vector<quad::AxisRule> rules;
    for (int a = 0; a < chart.dim(); ++a) {
      if (region->has_sub_bounds(a)) {
        const auto [lo, hi] = region->sub_bounds(a);
        rules.push_back(quad::simpson_rule(lo, hi, grid.count(a)));
      } else {
        rules.push_back(quad::axis_rule(chart, a, grid.count(a)));
      }
    }
    auto visit_product = [&](const std::vector<quad::AxisRule>& rr,
                             const std::function<void(std::span<const double>, double)>& f) {
      const int dim = static_cast<int>(rr.size());
      std::size_t total = 1;
      for (const auto& r : rr) total *= r.nodes.size();
      std::vector<double> p(dim);
      for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        double w = 1.0;
        for (int a = dim - 1; a >= 0; --a) {
          const std::size_t na = rr[a].nodes.size();
          const std::size_t ia = rem % na;
          rem /= na;
          p[a] = rr[a].nodes[ia];
          w *= rr[a].weights[ia];
        }
        f(p, w);
      }
    };

    diag.region_lie_theta_min = std::numeric_limits<double>::infinity();
    diag.region_lie_theta_max = -diag.region_lie_theta_min;
    std::vector<double> bulk_terms;
    visit_product(rules, [&](std::span<const double> p, double w) {
      const double l = lie_at(p);
      const double theta = normal_divergence(slice, p);
      diag.region_lie_theta_min = std::min(diag.region_lie_theta_min, l);
      diag.region_lie_theta_max = std::max(diag.region_lie_theta_max, l);
      bulk_terms.push_back(w * (l + theta * theta) *
                           geom::sqrt_abs_det_at(slice.metric(), p));
    });

    std::vector<double> flux_terms;
    diag.theta_faces_max = 0.0;
    for (const auto& face : region->faces()) {
      if (face.axis != slice.time_axis()) continue;  // normal flux vanishes laterally
      std::vector<quad::AxisRule> lateral;
      std::vector<int> lat_axes;
      for (int a = 0; a < chart.dim(); ++a) {
        if (a == face.axis) continue;
        lateral.push_back(rules[a]);
        lat_axes.push_back(a);
      }
      std::vector<double> terms;
      std::vector<double> p(chart.dim());
      p[face.axis] = face.value;
      visit_product(lateral, [&](std::span<const double> q, double w) {
        for (std::size_t i = 0; i < lat_axes.size(); ++i) p[lat_axes[i]] = q[i];
        const double theta = normal_divergence(slice, p);
        diag.theta_faces_max = std::max(diag.theta_faces_max, std::abs(theta));
        const double xi_t = 1.0 / slice.lapse(p);
        terms.push_back(w * geom::sqrt_abs_det_at(slice.metric(), p) * theta * xi_t);
      });
      flux_terms.push_back(face.orientation * pairwise_sum(terms));
    }
    const double bulk = pairwise_sum(bulk_terms);
    const double boundary = pairwise_sum(flux_terms);
    diag.region_balance_result = quad::BoundaryResult{bulk, boundary, bulk - boundary};
  }

  // Verdict assembly. A conclusion is only asserted when its hypothesis
  // telemetry holds.
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  if (!diag.energy.holds) {
    diag.verdict = "closed-slice obstruction not applicable: energy hypothesis fails, witness "
                   "Ric(xi,xi) = " +
                   fmt(diag.energy.min) + " at a slice point";
  } else if (!diag.growth.holds) {
    diag.verdict =
        "closed-slice obstruction not applicable: growth hypothesis fails, witness "
        "L_xi(div xi) = " +
        fmt(diag.growth.min) +
        (diag.slice_closed ? "; closed slice consistent with the vanishing integral" : "");
  } else if (diag.growth_strict) {
    if (diag.slice_closed) {
      diag.contradiction = true;
      diag.verdict =
          "contradiction detected: nonnegative hypotheses with a strict growth point on a "
          "closed slice force a positive integral (value " +
          fmt(diag.slice_integral) + "); inputs violate the identity stack or the model";
    } else {
      diag.verdict = "closed-slice obstruction applies: the slice cannot be closed; consistent "
                     "(a spatial direction is not periodic)";
    }
  } else {
    diag.verdict = "nonnegative hypotheses without strict growth: totally geodesic conclusion "
                   "expected, max |K| = " +
                   fmt(diag.max_extrinsic) +
                   (diag.max_extrinsic <= 1e-8 ? " (consistent: K = 0)"
                                               : " (completeness/L1 hypotheses unverifiable)");
  }

  if (diag.region_balance_result) {
    const bool cond1 = diag.region_lie_theta_min >= -kGrowthThreshold &&
                       diag.region_lie_theta_max > kStrictThreshold;
    const bool cond2 = diag.theta_faces_max <= 1e-6;
    if (cond1 && cond2) {
      diag.contradiction = true;
      diag.notes.push_back(
          "region balance contradiction: nondecreasing log-rate with a nonzero point and "
          "vanishing boundary expansion cannot coexist (bulk " +
          fmt(diag.region_balance_result->bulk) + ", boundary " + fmt(diag.region_balance_result->boundary) + ")");
    } else {
      diag.notes.push_back("region balance: bulk " + fmt(diag.region_balance_result->bulk) + " vs boundary " +
                           fmt(diag.region_balance_result->boundary) + "; condition (1) " +
                           (cond1 ? "holds" : "fails") + ", condition (2) " +
                           (cond2 ? "holds" : "fails"));
    }
  }
  return diag;
}

}  // namespace volex::lorentz
