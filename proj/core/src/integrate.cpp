#include "volex/integrate.hpp"

#include <cmath>
#include <limits>

#include "volex/errors.hpp"
#include "volex/linalg.hpp"

namespace volex::quad {

GridSpec::GridSpec(std::vector<int> counts) : counts_(std::move(counts)) {
  for (int n : counts_)
    if (n < 4) throw Error("grid: per-axis sample count must be >= 4");
}

GridSpec GridSpec::uniform(int n, int axes) {
  return GridSpec(std::vector<int>(static_cast<std::size_t>(axes), n));
}

AxisRule simpson_rule(double lo, double hi, int n) {
  if (n % 2 == 0) ++n;  // Simpson needs an odd node count
  AxisRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = lo + i * h;
    r.weights[i] = (i == 0 || i == n - 1) ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
  }
  return r;
}

AxisRule axis_rule(const Chart& chart, int axis, int n) {
  if (chart.periodic(axis)) {
    AxisRule r;
    r.nodes.resize(n);
    const double per = chart.period(axis);
    const double w = per / n;
    r.weights.assign(n, w);
    for (int i = 0; i < n; ++i) r.nodes[i] = i * w;
    return r;
  }
  if (chart.bounded(axis)) {
    const auto [lo, hi] = chart.bounds(axis);
    return simpson_rule(lo, hi, n);
  }
  throw NonCompactDomain("coordinate '" + chart.name(axis) + "' is unbounded");
}

namespace {

// Tensor-product quadrature with a fixed lexicographic node order and a
// deterministic pairwise reduction.
double product_quad(const std::vector<AxisRule>& rules, const ScalarFn& weighted_f) {
  const int dim = static_cast<int>(rules.size());
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.nodes.size();

  std::vector<double> terms(total);
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> p(dim);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double w = 1.0;
    for (int a = dim - 1; a >= 0; --a) {
      const std::size_t na = rules[a].nodes.size();
      idx[a] = rem % na;
      rem /= na;
      p[a] = rules[a].nodes[idx[a]];
      w *= rules[a].weights[idx[a]];
    }
    terms[flat] = w * weighted_f(p);
  }
  return pairwise_sum(terms);
}

std::vector<AxisRule> chart_rules(const Chart& chart, const GridSpec& grid) {
  if (static_cast<int>(grid.counts().size()) != chart.dim())
    throw Error("grid axis count does not match chart dimension");
  std::vector<AxisRule> rules;
  rules.reserve(chart.dim());
  for (int a = 0; a < chart.dim(); ++a) rules.push_back(axis_rule(chart, a, grid.count(a)));
  return rules;
}

}  // namespace

double integrate(const Chart& chart, const geom::MetricSpec& g, const ScalarFn& f,
                 const GridSpec& grid) {
  if (!chart.compact())
    throw NonCompactDomain("integration requires all coordinates periodic or bounded");
  const auto rules = chart_rules(chart, grid);
  return product_quad(rules, [&](std::span<const double> p) {
    return f(p) * geom::sqrt_abs_det_at(g, p);
  });
}

double total_volume(const Chart& chart, const geom::MetricSpec& g, const GridSpec& grid) {
  const double v = integrate(chart, g, [](std::span<const double>) { return 1.0; }, grid);
  if (!(v > 0.0)) throw Error("total volume must be positive");
  return v;
}

namespace {

// The balance checks model closed manifolds; bounded axes carry a
// boundary whose flux the plain integral cannot see.
void require_closed(const Chart& chart) {
  for (int a = 0; a < chart.dim(); ++a)
    if (!chart.periodic(a))
      throw NonCompactDomain("closed-chart balance requires periodic coordinate '" +
                             chart.name(a) + "'");
}

}  // namespace

GreenResult green_check(const Chart& chart, const geom::MetricSpec& g,
                        const geom::VectorFieldSpec& x, const GridSpec& grid) {
  require_closed(chart);
  double abs_integral = 0.0;
  const double residual = integrate(
      chart, g,
      [&](std::span<const double> p) { return geom::divergence(chart, g, x, p); }, grid);
  abs_integral = integrate(
      chart, g,
      [&](std::span<const double> p) { return std::abs(geom::divergence(chart, g, x, p)); },
      grid);
  return GreenResult{residual, abs_integral};
}

LogRateGreenResult log_rate_green_check(const Chart& chart, const geom::MetricSpec& g,
                                        const geom::VectorFieldSpec& xi, const GridSpec& grid) {
  require_closed(chart);
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  const double residual = integrate(
      chart, g,
      [&](std::span<const double> p) {
        const double a = geom::expansion_acceleration(chart, g, xi, p).accel_coeff;
        mn = std::min(mn, a);
        mx = std::max(mx, a);
        return a;
      },
      grid);
  return LogRateGreenResult{residual, mn, mx};
}

Region::Region(const Chart& chart,
               std::vector<std::optional<std::pair<double, double>>> sub_bounds)
    : chart_(&chart), sub_bounds_(std::move(sub_bounds)) {
  if (static_cast<int>(sub_bounds_.size()) != chart.dim())
    throw Error("region: one (optional) sub-interval per coordinate required");
  for (int a = 0; a < chart.dim(); ++a) {
    if (!sub_bounds_[a]) continue;
    const auto [lo, hi] = *sub_bounds_[a];
    if (!(lo < hi))
      throw FaceNotSlice("region sub-bounds on '" + chart.name(a) + "' must satisfy lo < hi");
    if (chart.bounded(a)) {
      const auto [clo, chi] = chart.bounds(a);
      if (lo < clo || hi > chi)
        throw FaceNotSlice("region sub-bounds on '" + chart.name(a) +
                           "' exceed the chart interval");
    } else if (chart.periodic(a)) {
      if (lo < 0.0 || hi > chart.period(a))
        throw FaceNotSlice("region sub-bounds on '" + chart.name(a) +
                           "' exceed one period");
    }
  }
}

std::vector<Region::Face> Region::faces() const {
  std::vector<Face> f;
  for (int a = 0; a < chart_->dim(); ++a) {
    if (!sub_bounds_[a]) continue;
    const auto [lo, hi] = *sub_bounds_[a];
    f.push_back(Face{a, hi, +1});
    f.push_back(Face{a, lo, -1});
  }
  return f;
}

namespace {

std::vector<AxisRule> region_rules(const Region& region, const GridSpec& grid,
                                   bool require_periodic_lateral) {
  const Chart& chart = region.chart();
  std::vector<AxisRule> rules;
  rules.reserve(chart.dim());
  for (int a = 0; a < chart.dim(); ++a) {
    if (region.has_sub_bounds(a)) {
      const auto [lo, hi] = region.sub_bounds(a);
      rules.push_back(simpson_rule(lo, hi, grid.count(a)));
    } else {
      if (require_periodic_lateral && !chart.periodic(a))
        throw FaceNotSlice("lateral coordinate '" + chart.name(a) +
                           "' must be periodic (or carry region sub-bounds)");
      rules.push_back(axis_rule(chart, a, grid.count(a)));
    }
  }
  return rules;
}

// Face flux by the coordinate divergence theorem:
//   sum_faces orientation * integral sqrt|g| X^a dx^{others}
// which coincides with the unit-normal formulation through the cofactor
// identity g^{aa} = det(h) / det(g).
double face_flux(const Region& region, const geom::MetricSpec& g, const Region::Face& face,
                 const std::vector<AxisRule>& rules,
                 const std::function<double(std::span<const double>)>& x_component) {
  const Chart& chart = region.chart();
  const int dim = chart.dim();
  std::vector<AxisRule> lateral;
  std::vector<int> lat_axes;
  for (int a = 0; a < dim; ++a) {
    if (a == face.axis) continue;
    lateral.push_back(rules[a]);
    lat_axes.push_back(a);
  }
  std::vector<double> p(dim);
  p[face.axis] = face.value;
  const double f = product_quad(lateral, [&](std::span<const double> q) {
    for (std::size_t i = 0; i < lat_axes.size(); ++i) p[lat_axes[i]] = q[i];
    return geom::sqrt_abs_det_at(g, p) * x_component(p);
  });
  return face.orientation * f;
}

}  // namespace

double integrate_region(const Region& region, const geom::MetricSpec& g, const ScalarFn& f,
                        const GridSpec& grid) {
  const Chart& chart = region.chart();
  if (static_cast<int>(grid.counts().size()) != chart.dim())
    throw Error("grid axis count does not match chart dimension");
  const auto rules = region_rules(region, grid, /*require_periodic_lateral=*/false);
  return product_quad(rules, [&](std::span<const double> p) {
    return f(p) * geom::sqrt_abs_det_at(g, p);
  });
}

namespace {

BoundaryResult boundary_balance(const Region& region, const geom::MetricSpec& g,
                                const GridSpec& grid, const ScalarFn& div_fn,
                                const std::function<double(std::span<const double>, int)>& comp) {
  const Chart& chart = region.chart();
  if (static_cast<int>(grid.counts().size()) != chart.dim())
    throw Error("grid axis count does not match chart dimension");
  const auto rules = region_rules(region, grid, /*require_periodic_lateral=*/true);

  const double bulk = product_quad(rules, [&](std::span<const double> p) {
    return div_fn(p) * geom::sqrt_abs_det_at(g, p);
  });

  std::vector<double> fluxes;
  for (const auto& face : region.faces())
    fluxes.push_back(face_flux(region, g, face, rules,
                               [&](std::span<const double> p) { return comp(p, face.axis); }));
  const double boundary = pairwise_sum(fluxes);
  return BoundaryResult{bulk, boundary, bulk - boundary};
}

}  // namespace

BoundaryResult boundary_check(const Region& region, const geom::MetricSpec& g,
                              const geom::VectorFieldSpec& x, const GridSpec& grid) {
  const Chart& chart = region.chart();
  return boundary_balance(
      region, g, grid,
      [&](std::span<const double> p) { return geom::divergence(chart, g, x, p); },
      [&](std::span<const double> p, int axis) { return x.component(axis).eval(p); });
}

BoundaryResult boundary_check_log_rate(const Region& region, const geom::MetricSpec& g,
                                       const geom::VectorFieldSpec& xi, const GridSpec& grid) {
  const Chart& chart = region.chart();
  return boundary_balance(
      region, g, grid,
      [&](std::span<const double> p) {
        // div((div xi) xi) = xi^k d_k(div xi) + (div xi)^2, exact from jets
        return geom::expansion_acceleration(chart, g, xi, p).accel_coeff;
      },
      [&](std::span<const double> p, int axis) {
        return geom::divergence(chart, g, xi, p) * xi.component(axis).eval(p);
      });
}

L1Result truncated_l1(const Region& region, const geom::MetricSpec& g,
                      const geom::VectorFieldSpec& x, const GridSpec& grid) {
  const Chart& chart = region.chart();
  bool causal = false;
  const double v = integrate_region(
      region, g,
      [&](std::span<const double> p) {
        const Matrix gm = g.values(p);
        const auto xv = x.values(p);
        double q = 0.0;
        for (int i = 0; i < chart.dim(); ++i)
          for (int j = 0; j < chart.dim(); ++j) q += gm(i, j) * xv[i] * xv[j];
        if (q < 0.0) causal = true;
        return std::sqrt(std::abs(q));
      },
      grid);
  return L1Result{v, causal};
}

}  // namespace volex::quad
