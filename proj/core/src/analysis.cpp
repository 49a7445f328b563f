#include "volex/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "volex/errors.hpp"
#include "volex/flow.hpp"
#include "volex/soliton.hpp"
#include "volex/version.hpp"

namespace volex::cli {

namespace {

constexpr unsigned long long kSampleSeed = 0x5eed0003ULL;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

quad::GridSpec grid_for(const Scenario& s, const AnalysisOptions& opt) {
  if (opt.grid) return quad::GridSpec::uniform(*opt.grid, s.chart->dim());
  return quad::GridSpec(s.grid);
}

std::vector<int> grid_counts(const Scenario& s, const AnalysisOptions& opt) {
  if (opt.grid) return std::vector<int>(s.chart->dim(), *opt.grid);
  return s.grid;
}

Report make_report(const Scenario& s, const std::string& analysis,
                   const AnalysisOptions& opt) {
  Report r;
  r.tool = std::string("volex ") + kVersion;
  r.scenario = s.name;
  r.analysis = analysis;
  r.grid = grid_counts(s, opt);
  r.point_labels = s.chart->names();
  return r;
}

std::vector<std::vector<double>> sample_points(const Scenario& s, int count) {
  const auto box = s.sampling_box();
  return sample_domain_points(*s.chart, count, kSampleSeed, &box);
}

// Spatial sample points on a slice (the slice coordinate pinned).
std::vector<std::vector<double>> slice_samples(const Scenario& s, const lorentz::SliceSpec& slice,
                                               int count) {
  auto pts = sample_points(s, count);
  std::vector<std::vector<double>> spatial(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int a : slice.spatial_axes()) spatial[i].push_back(pts[i][a]);
  return spatial;
}

lorentz::SliceSpec require_slice(const Scenario& s) {
  if (!s.slice) throw SchemaError("analysis requires a slice block", "slice");
  return lorentz::SliceSpec(*s.chart, *s.metric, s.slice->axis, s.slice->value);
}

void run_green(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  const double tol = opt.tol.value_or(1e-10);
  const auto res = quad::green_check(*s.chart, *s.metric, *s.field, grid_for(s, opt));
  const bool pass = std::abs(res.residual) <= tol * (1.0 + res.abs_integral);
  r.add(Record::check("green_residual", res.residual, tol, pass,
                      "integral of div X dv over the closed chart"));
  r.add(Record::info("abs_divergence_integral", res.abs_integral));
}

void run_log_rate_balance(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  const double tol = opt.tol.value_or(1e-10);
  const auto res = quad::log_rate_green_check(*s.chart, *s.metric, *s.field, grid_for(s, opt));
  const double scale = 1.0 + std::max(std::abs(res.integrand_min), std::abs(res.integrand_max));
  const bool pass = std::abs(res.residual) <= tol * scale;
  r.add(Record::check("log_rate_green_residual", res.residual, tol, pass,
                      "integral of (L_xi(div xi) + (div xi)^2) dv"));
  r.add(Record::info("integrand_min", res.integrand_min));
  r.add(Record::info("integrand_max", res.integrand_max));
  if (res.integrand_min < -1e-12 && res.integrand_max > 1e-12)
    r.notes.push_back("integrand attains both signs, as the balance requires");
}

void run_volume(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  double vol = 0.0;
  if (s.slice) {
    const auto slice = require_slice(s);
    vol = lorentz::slice_volume(slice, grid_for(s, opt));
    r.notes.push_back("volume of the slice {" + s.chart->name(s.slice->axis) +
                      " = " + fmt(s.slice->value) + "} with the induced metric");
  } else {
    vol = quad::total_volume(*s.chart, *s.metric, grid_for(s, opt));
  }
  r.add(Record::check("volume", vol, 0.0, vol > 0.0 && std::isfinite(vol),
                      "judged against positivity"));
}

void run_flow(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  if (!s.flow) throw SchemaError("analysis requires a flow block", "flow");
  const double tol = opt.tol.value_or(1e-4);
  const auto& w = *s.flow;
  const auto path =
      flow::integrate_trajectory(*s.chart, *s.field, w.start, w.t_final, w.steps);

  // Dual-path expansion rate at the window start: coordinate formula,
  // log-determinant route, and the flow-pullback estimate.
  const double by_divergence = geom::divergence(*s.chart, *s.metric, *s.field, w.start);
  const double by_log_det = geom::lie_volume_rate(*s.chart, *s.metric, *s.field, w.start);
  const double h = 1e-3;
  const double by_pullback = flow::lie_pullback_estimate(
      *s.chart, *s.metric, *s.field, flow::PullbackQuantity::VolumeCoefficient, w.start, h);
  r.add(Record::check("expansion_rate_dual_path_gap", std::abs(by_divergence - by_log_det),
                      1e-12, std::abs(by_divergence - by_log_det) <= 1e-12,
                      "coordinate formula vs log-determinant route"));
  r.add(Record::check("expansion_rate_pullback_gap", std::abs(by_pullback - by_divergence), tol,
                      std::abs(by_pullback - by_divergence) <= tol,
                      "flow-pullback estimate at h = 0.001"));
  r.add(Record::info("expansion_rate", by_divergence));

  const auto mono = flow::monotonicity_profile(*s.chart, *s.metric, *s.field, path);
  r.add(Record::info("div_xi_min", mono.div_xi.min,
                     std::string("classification: ") + flow::to_string(mono.div_xi.classification)));
  r.add(Record::info("div_xi_max", mono.div_xi.max));
  r.add(Record::info("lie_div_xi_min", mono.lie_div_xi.min,
                     std::string("classification: ") +
                         flow::to_string(mono.lie_div_xi.classification)));
  r.add(Record::info("lie_div_xi_max", mono.lie_div_xi.max));

  for (std::size_t i = 0; i < path.points.size(); ++i) {
    r.samples.push_back(SampleRow{path.points[i], "div_xi", mono.div_xi.values[i]});
    r.samples.push_back(SampleRow{path.points[i], "lie_div_xi", mono.lie_div_xi.values[i]});
  }
}

void run_soliton(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  if (!s.lambda) throw SchemaError("analysis requires a lambda value", "lambda");
  const double tol = opt.tol.value_or(1e-6);
  const soliton::SolitonSpec spec(*s.chart, *s.metric, *s.field, *s.lambda);

  double res_max = 0.0, identity_max = 0.0;
  bool any_identity = false;
  const auto pts = sample_points(s, 50);
  for (const auto& p : pts) {
    const auto sr = soliton::soliton_residual(spec, p);
    res_max = std::max(res_max, sr.max_abs);
    const auto id = soliton::log_rate_identity(spec, p, tol);
    if (id.hypothesis_met) {
      any_identity = true;
      identity_max = std::max(identity_max, std::abs(id.residual));
    }
    r.samples.push_back(SampleRow{p, "soliton_residual", sr.max_abs});
    r.samples.push_back(SampleRow{p, "log_rate_identity_residual", id.residual});
  }
  r.add(Record::check("soliton_residual_max", res_max, tol, res_max <= tol,
                      "max |2 Ric + L_xi g + 2 lambda g| over 50 sample points"));
  if (any_identity) {
    r.add(Record::check("log_rate_identity_residual_max", identity_max, tol, identity_max <= tol,
                        "div((div xi) xi) vs -L_xi s + (s + n lambda)^2"));
    const auto id0 = soliton::log_rate_identity(spec, pts.front(), tol);
    r.add(Record::info("log_rate_identity_lhs", id0.lhs));
    r.add(Record::info("log_rate_identity_rhs", id0.rhs));
  } else {
    r.notes.push_back("identity hypothesis unmet everywhere sampled (not a soliton); "
                      "identity residuals not judged");
  }

  if (s.flow) {
    const auto path =
        flow::integrate_trajectory(*s.chart, *s.field, s.flow->start, s.flow->t_final,
                                   s.flow->steps);
    std::optional<quad::Region> region;
    if (s.region_bounds) region.emplace(s.region());
    const auto grid = grid_for(s, opt);
    const auto mono = soliton::monotone_curvature_diagnostic(
        spec, path, region ? &*region : nullptr, region ? &grid : nullptr);
    r.add(Record::info("forced_s_plus_n_lambda_max", mono.max_abs_s_plus_n_lambda,
                       mono.conclusion_s_pass ? "within 1e-6" : "exceeds 1e-6"));
    r.add(Record::info("forced_div_xi_max", mono.max_abs_div_xi,
                       mono.conclusion_div_pass ? "within 1e-6" : "exceeds 1e-6"));
    r.notes.push_back("scalar curvature along the flow window is " +
                      std::string(flow::to_string(mono.lie_scalar_class)));
    r.notes.push_back(mono.note);
    if (mono.l1_inner && mono.l1_outer) {
      r.add(Record::info("truncated_l1_inner", *mono.l1_inner));
      r.add(Record::info("truncated_l1_outer", *mono.l1_outer));
    }
  }
}

void run_raychaudhuri(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  const double tol = opt.tol.value_or(1e-6);
  const auto slice = require_slice(s);
  const auto spatial_pts = slice_samples(s, slice, 50);

  double res_max = 0.0;
  for (const auto& q : spatial_pts) {
    const auto terms = lorentz::raychaudhuri_residual(slice, q);
    res_max = std::max(res_max, std::abs(terms.residual));
    r.samples.push_back(SampleRow{slice.embed(q), "raychaudhuri_residual", terms.residual});
  }
  r.add(Record::check("raychaudhuri_residual_max", res_max, tol, res_max <= tol,
                      "max |div xidot - (Ric(xi,xi) + g(sigma,sigma) + theta^2/(n-1) + "
                      "L_xi theta)| over 50 slice points"));

  const auto t0 = lorentz::raychaudhuri_residual(slice, spatial_pts.front());
  r.add(Record::info("term_div_accel", t0.lhs_div_accel));
  r.add(Record::info("term_ric_xi_xi", t0.ric_xi_xi));
  r.add(Record::info("term_sigma_norm2", t0.sigma_norm2));
  r.add(Record::info("term_theta_sq", t0.theta_sq_term));
  r.add(Record::info("term_lie_theta", t0.lie_theta));

  if (s.fluid) {
    double gap_max = 0.0;
    for (const auto& q : spatial_pts) {
      const auto fc = lorentz::perfect_fluid_ricci(slice, *s.fluid, q);
      gap_max = std::max(gap_max, std::abs(fc.gap));
      r.samples.push_back(SampleRow{slice.embed(q), "perfect_fluid_gap", fc.gap});
    }
    r.add(Record::check("perfect_fluid_gap_max", gap_max, tol, gap_max <= tol,
                        "4 pi (mu + 3 rho) vs Ric(xi,xi) over 50 slice points"));
  }
}

void run_slice_integral(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  const double tol = opt.tol.value_or(1e-6);
  const auto slice = require_slice(s);
  const auto res = lorentz::closed_slice_integral(slice, grid_for(s, opt));
  const bool pass = std::abs(res.integral) <= tol * res.volume;
  r.add(Record::check("closed_slice_integral", res.integral, tol, pass,
                      "judged against tol * Vol(M'), Vol = " + fmt(res.volume)));
  r.add(Record::info("slice_volume", res.volume));
  r.add(Record::info("integrand_min", res.integrand_min));
  r.add(Record::info("integrand_max", res.integrand_max));
}

void run_energy(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  const auto slice = require_slice(s);
  const auto scan = lorentz::energy_condition_scan(slice, grid_for(s, opt));
  const bool pass = scan.violation_fraction == 0.0;
  r.add(Record::check("energy_violation_fraction", scan.violation_fraction, 1e-10, pass,
                      "fraction of slice nodes with Ric(xi,xi) < -1e-10"));
  r.add(Record::info("ric_xi_xi_min", scan.min));
  r.add(Record::info("ric_xi_xi_max", scan.max));
  if (!scan.min_point.empty()) {
    std::string pt = "(";
    for (std::size_t i = 0; i < scan.min_point.size(); ++i)
      pt += (i ? ", " : "") + fmt(scan.min_point[i]);
    r.notes.push_back("minimum attained at " + pt + ")");
  }
}

void run_boundary(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  const double tol = opt.tol.value_or(1e-6);
  const auto region = s.region();
  const auto res =
      quad::boundary_check_log_rate(region, *s.metric, *s.field, grid_for(s, opt));
  const double scale = 1.0 + std::abs(res.bulk) + std::abs(res.boundary);
  const bool pass = std::abs(res.residual) <= tol * scale;
  r.add(Record::check("region_balance_residual", res.residual, tol, pass,
                      "bulk minus boundary for the field (div xi) xi"));
  r.add(Record::info("bulk", res.bulk));
  r.add(Record::info("boundary", res.boundary));
}

void scan_chart_nodes(const Scenario& s, const quad::GridSpec& grid,
                      const std::function<void(std::span<const double>)>& visit) {
  const Chart& chart = *s.chart;
  std::vector<quad::AxisRule> rules;
  for (int a = 0; a < chart.dim(); ++a)
    rules.push_back(quad::axis_rule(chart, a, grid.count(a)));
  std::size_t total = 1;
  for (const auto& rule : rules) total *= rule.nodes.size();
  std::vector<double> p(chart.dim());
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int a = chart.dim() - 1; a >= 0; --a) {
      const std::size_t na = rules[a].nodes.size();
      p[a] = rules[a].nodes[rem % na];
      rem /= na;
    }
    visit(p);
  }
}

void run_diagnose(const Scenario& s, const AnalysisOptions& opt, Report& r) {
  const auto grid = grid_for(s, opt);

  if (s.slice) {
    const auto slice = require_slice(s);
    std::optional<flow::FlowPath> path;
    if (s.flow)
      path = flow::integrate_trajectory(*s.chart, *s.field, s.flow->start, s.flow->t_final,
                                        s.flow->steps);
    std::optional<quad::Region> region;
    if (s.region_bounds) region.emplace(s.region());
    const auto diag = lorentz::theorem_diagnostics(slice, grid, path ? &*path : nullptr,
                                                   region ? &*region : nullptr);
    r.add(Record::info("hypothesis_energy_min", diag.energy.min,
                       diag.energy.holds
                           ? "Ric(xi,xi) >= 0 holds on the slice (threshold 1e-10)"
                           : "energy hypothesis fails; witness value (threshold 1e-10)"));
    r.add(Record::info("hypothesis_growth_min", diag.growth.min,
                       diag.growth.holds
                           ? "L_xi(div xi) >= 0 holds on the slice (threshold 1e-9)"
                           : "growth hypothesis fails; witness value (threshold 1e-9)"));
    r.add(Record::info("growth_max", diag.growth.max,
                       diag.growth_strict ? "strict growth point present" : "no strict point"));
    r.add(Record::info("closed_slice_integral", diag.slice_integral));
    r.add(Record::info("slice_volume", diag.volume));
    r.add(Record::info("max_extrinsic_curvature", diag.max_extrinsic));
    if (diag.region_balance_result) {
      r.add(Record::info("region_bulk", diag.region_balance_result->bulk));
      r.add(Record::info("region_boundary", diag.region_balance_result->boundary));
    }
    r.notes.push_back(diag.verdict);
    for (const auto& note : diag.notes) r.notes.push_back(note);
    if (diag.contradiction) {
      r.add(Record::check("diagnostic_consistency", 1.0, 0.0, false,
                          "contradiction detected between hypotheses and integral balance"));
    }
    return;
  }

  if (s.lambda) {
    run_soliton(s, opt, r);
    return;
  }

  // Closed Riemannian chart: sign telemetry for the balance obstructions.
  double div_min = std::numeric_limits<double>::infinity(), div_max = -div_min;
  double acc_min = div_min, acc_max = -div_min;
  scan_chart_nodes(s, grid, [&](std::span<const double> p) {
    const double d = geom::divergence(*s.chart, *s.metric, *s.field, p);
    const auto acc = geom::expansion_acceleration(*s.chart, *s.metric, *s.field, p);
    div_min = std::min(div_min, d);
    div_max = std::max(div_max, d);
    acc_min = std::min(acc_min, acc.lie_of_div);
    acc_max = std::max(acc_max, acc.lie_of_div);
  });
  const auto green = quad::green_check(*s.chart, *s.metric, *s.field, grid);
  const auto eq4 = quad::log_rate_green_check(*s.chart, *s.metric, *s.field, grid);
  r.add(Record::info("div_xi_min", div_min));
  r.add(Record::info("div_xi_max", div_max));
  r.add(Record::info("lie_div_xi_min", acc_min));
  r.add(Record::info("lie_div_xi_max", acc_max));
  r.add(Record::info("green_residual", green.residual));
  r.add(Record::info("log_rate_green_residual", eq4.residual));
  const bool sign_definite = div_min >= -1e-9 || div_max <= 1e-9;
  if (sign_definite && std::max(std::abs(div_min), std::abs(div_max)) <= 1e-9) {
    r.notes.push_back("div xi vanishes on the grid: the flow preserves the volume element");
  } else if (sign_definite) {
    r.notes.push_back("div xi is sign-definite and nonzero: inconsistent with the closed-chart "
                      "balance; check the green_residual record");
  } else {
    r.notes.push_back("div xi attains both signs: monotone-volume hypotheses not met, "
                      "balance holds as required");
  }
  if (acc_min >= -1e-9 && acc_max > 1e-6)
    r.notes.push_back("L_xi(div xi) is nonnegative with a strict point: no such flow exists on "
                      "a closed chart (balance obstruction)");
}

}  // namespace

const std::vector<std::string>& analysis_names() {
  static const std::vector<std::string> names = {
      "green", "eq4", "volume", "flow", "soliton",
      "raychaudhuri", "eq7", "energy", "boundary", "diagnose"};
  return names;
}

Report run_analysis(const Scenario& s, const std::string& analysis, const AnalysisOptions& opt) {
  Report r = make_report(s, analysis, opt);
  if (analysis == "green")
    run_green(s, opt, r);
  else if (analysis == "eq4")
    run_log_rate_balance(s, opt, r);
  else if (analysis == "volume")
    run_volume(s, opt, r);
  else if (analysis == "flow")
    run_flow(s, opt, r);
  else if (analysis == "soliton")
    run_soliton(s, opt, r);
  else if (analysis == "raychaudhuri")
    run_raychaudhuri(s, opt, r);
  else if (analysis == "eq7")
    run_slice_integral(s, opt, r);
  else if (analysis == "energy")
    run_energy(s, opt, r);
  else if (analysis == "boundary")
    run_boundary(s, opt, r);
  else if (analysis == "diagnose")
    run_diagnose(s, opt, r);
  else
    throw SchemaError("unknown analysis '" + analysis + "'", "analysis");
  return r;
}

}  // namespace volex::cli
