#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "volex/errors.hpp"
#include "volex/flow.hpp"
#include "volex/soliton.hpp"

using namespace volex;
using namespace volex::test;

namespace {

struct GaussianCase {
  Chart chart = plane_chart();
  geom::MetricSpec g = identity_metric(chart);
  geom::VectorFieldSpec xi = field(chart, {"-x1", "-x2"});
  soliton::SolitonSpec spec{chart, g, xi, 1.0};
};

struct SphereCase {
  Chart chart = sphere_chart();
  geom::MetricSpec g = sphere_metric(chart);
  geom::VectorFieldSpec xi = field(chart, {"0", "0"});
  soliton::SolitonSpec spec{chart, g, xi, -1.0};
};

const std::vector<std::pair<double, double>> kSphereBox{{0.3, 2.84}, {0.0, kTwoPi}};
const std::vector<std::pair<double, double>> kPlaneBox{{-2.0, 2.0}, {-2.0, 2.0}};

}  // namespace

TEST_CASE("soliton residual") {
  SUBCASE("gaussian structure on the flat plane (lambda = 1)") {
    GaussianCase c;
    for (const auto& p : sample_domain_points(c.chart, 50, 101, &kPlaneBox))
      CHECK(soliton::soliton_residual(c.spec, p).max_abs < 1e-8);
  }
  SUBCASE("unit sphere with zero field (lambda = -1): Ric = g") {
    SphereCase c;
    for (const auto& p : sample_domain_points(c.chart, 50, 102, &kSphereBox))
      CHECK(soliton::soliton_residual(c.spec, p).max_abs < 1e-6);
  }
  SUBCASE("flat torus with lambda = 0.5 is not a soliton: residual = g") {
    const Chart chart = torus_chart();
    const auto g = identity_metric(chart);
    const auto xi = field(chart, {"0", "0"});
    const soliton::SolitonSpec spec(chart, g, xi, 0.5);
    const auto res = soliton::soliton_residual(spec, std::vector<double>{1.0, 2.0});
    CHECK(res.max_abs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.matrix(1, 1) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("Lorentzian charts are rejected") {
    const Chart chart = flrw_chart();
    const auto g = flrw_metric(chart);
    const auto xi = field(chart, {"1", "0", "0", "0"});
    CHECK_THROWS_AS(soliton::SolitonSpec(chart, g, xi, 1.0), SignatureMismatch);
  }
}

TEST_CASE("log-rate identity for solitons") {
  SUBCASE("gaussian: lhs = rhs = n^2 lambda^2 = 4 within 1e-7 at 50 points") {
    GaussianCase c;
    for (const auto& p : sample_domain_points(c.chart, 50, 103, &kPlaneBox)) {
      const auto id = soliton::log_rate_identity(c.spec, p);
      CHECK(id.hypothesis_met);
      CHECK(id.lhs == doctest::Approx(4.0).epsilon(1e-7));
      CHECK(id.rhs == doctest::Approx(4.0).epsilon(1e-7));
      CHECK(std::abs(id.residual) < 1e-7);
    }
  }
  SUBCASE("sphere: s = 2 = -n lambda, both sides vanish within 1e-6") {
    SphereCase c;
    for (const auto& p : sample_domain_points(c.chart, 50, 104, &kSphereBox)) {
      const auto id = soliton::log_rate_identity(c.spec, p);
      CHECK(id.hypothesis_met);
      CHECK(std::abs(id.lhs) < 1e-6);
      CHECK(std::abs(id.rhs) < 1e-6);
      CHECK(id.scalar_curvature == doctest::Approx(2.0).epsilon(1e-6));
    }
  }
  SUBCASE("trivial flat structure: 0 = 0") {
    const Chart chart = torus_chart();
    const auto g = identity_metric(chart);
    const auto xi = field(chart, {"0", "0"});
    const soliton::SolitonSpec spec(chart, g, xi, 0.0);
    const auto id = soliton::log_rate_identity(spec, std::vector<double>{0.3, 0.8});
    CHECK(id.hypothesis_met);
    CHECK(std::abs(id.lhs) < 1e-10);
    CHECK(std::abs(id.rhs) < 1e-10);
  }
  SUBCASE("non-soliton inputs are flagged, not judged") {
    const Chart chart = torus_chart();
    const auto g = identity_metric(chart);
    const auto xi = field(chart, {"0", "0"});
    const soliton::SolitonSpec spec(chart, g, xi, 0.5);
    const auto id = soliton::log_rate_identity(spec, std::vector<double>{0.3, 0.8});
    CHECK(!id.hypothesis_met);
    CHECK(id.soliton_residual == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("monotone-curvature diagnostic") {
  SUBCASE("gaussian: conclusions fail, integrability telemetry explains why") {
    GaussianCase c;
    const auto path =
        flow::integrate_trajectory(c.chart, c.xi, std::vector<double>{1.0, 0.0}, 1.0, 100);
    const quad::Region region(c.chart,
                              {std::make_pair(-5.0, 5.0), std::make_pair(-5.0, 5.0)});
    const quad::GridSpec grid = quad::GridSpec::uniform(65, 2);
    const auto rep = soliton::monotone_curvature_diagnostic(c.spec, path, &region, &grid);
    CHECK(rep.hypothesis_monotone);  // s = 0 constant along the path
    CHECK(rep.max_abs_s_plus_n_lambda == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(!rep.conclusion_s_pass);
    CHECK(rep.max_abs_div_xi == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(!rep.conclusion_div_pass);
    CHECK(rep.l1_growing);  // |(div xi) xi| = 2|x| is not integrable
  }
  SUBCASE("sphere: all conclusions pass") {
    SphereCase c;
    const auto path =
        flow::integrate_trajectory(c.chart, c.xi, std::vector<double>{1.0, 1.0}, 1.0, 50);
    const auto rep = soliton::monotone_curvature_diagnostic(c.spec, path);
    CHECK(rep.hypothesis_monotone);
    CHECK(rep.max_abs_s_plus_n_lambda < 1e-6);
    CHECK(rep.conclusion_s_pass);
    CHECK(rep.max_abs_div_xi < 1e-6);
    CHECK(rep.conclusion_div_pass);
  }
  SUBCASE("flat torus with lambda = 0 passes trivially") {
    const Chart chart = torus_chart();
    const auto g = identity_metric(chart);
    const auto xi = field(chart, {"0", "0"});
    const soliton::SolitonSpec spec(chart, g, xi, 0.0);
    const auto path =
        flow::integrate_trajectory(chart, xi, std::vector<double>{1.0, 1.0}, 1.0, 10);
    const auto rep = soliton::monotone_curvature_diagnostic(spec, path);
    CHECK(rep.hypothesis_monotone);
    CHECK(rep.conclusion_s_pass);
    CHECK(rep.conclusion_div_pass);
  }
}

TEST_CASE("joint exercise: residual and identity at 50 random points per scenario") {
  // exercises Ric, L_xi g, s, div and directional derivatives together
  GaussianCase gc;
  SphereCase sc;
  for (const auto& p : sample_domain_points(gc.chart, 50, 105, &kPlaneBox)) {
    CHECK(soliton::soliton_residual(gc.spec, p).max_abs < 1e-6);
    CHECK(std::abs(soliton::log_rate_identity(gc.spec, p).residual) < 1e-6);
  }
  for (const auto& p : sample_domain_points(sc.chart, 50, 106, &kSphereBox)) {
    CHECK(soliton::soliton_residual(sc.spec, p).max_abs < 1e-6);
    CHECK(std::abs(soliton::log_rate_identity(sc.spec, p).residual) < 1e-6);
  }
}
