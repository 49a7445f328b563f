#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "test_helpers.hpp"
#include "volex/analysis.hpp"
#include "volex/errors.hpp"
#include "volex/report.hpp"
#include "volex/scenario.hpp"

using namespace volex;
using namespace volex::cli;

namespace {

std::string scenario_path(const std::string& name) {
  return std::string(VOLEX_SCENARIO_DIR) + "/" + name + ".json";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_volex(const std::string& args) {
  const std::string cmd = std::string(VOLEX_BIN) + " " + args;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("shipped catalog loads and validates") {
  const char* names[] = {"flat_torus_incompressible", "torus_gradient", "torus_shear",
                         "flrw_matter", "flrw_desitter", "kasner_like", "gaussian_soliton",
                         "sphere_soliton", "flrw_strip_region"};
  for (const char* name : names) {
    const Scenario s = load_scenario(scenario_path(name));
    CHECK(s.name == name);
    CHECK(s.chart->dim() >= 2);
  }
  const Scenario flrw = load_scenario(scenario_path("flrw_matter"));
  CHECK(flrw.chart->dim() == 4);
  CHECK(flrw.chart->lorentzian());
  CHECK(flrw.slice.has_value());
  CHECK(flrw.fluid.has_value());
  CHECK(flrw.region_bounds.has_value());
}

TEST_CASE("schema violations name the offending key") {
  const std::string good = slurp(scenario_path("flrw_matter"));
  SUBCASE("malformed metric expression") {
    std::string bad = good;
    const auto pos = bad.find("t^(4/3)");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 7, "t^(4/3");  // drop the closing parenthesis
    try {
      parse_scenario(bad);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.key_path == "metric[1][1]");
    }
  }
  SUBCASE("riemannian chart with a lorentzian metric") {
    std::string bad = good;
    const auto pos = bad.find("lorentzian");
    bad.replace(pos, 10, "riemannian");
    CHECK_THROWS_AS(parse_scenario(bad), SignatureMismatch);
  }
  SUBCASE("asymmetric metric") {
    const char* text = R"({
      "name": "bad",
      "chart": {"signature": "riemannian", "coordinates": ["x1", "x2"],
                "domain": {"x1": {"period": 1.0}, "x2": {"period": 1.0}}},
      "metric": [["1", "x1"], ["x2", "1"]],
      "field": ["0", "0"]
    })";
    try {
      parse_scenario(text);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.key_path == "metric[0][1]");
    }
  }
  SUBCASE("missing field block") {
    const char* text = R"({
      "name": "bad",
      "chart": {"signature": "riemannian", "coordinates": ["x1", "x2"],
                "domain": {"x1": {"period": 1.0}, "x2": {"period": 1.0}}},
      "metric": [["1", "0"], ["0", "1"]]
    })";
    CHECK_THROWS_AS(parse_scenario(text), SchemaError);
  }
  SUBCASE("broken JSON") {
    CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/path.json"), IoError);
  }
}

TEST_CASE("run_analysis pass/fail semantics") {
  SUBCASE("green on the gradient torus passes") {
    const Scenario s = load_scenario(scenario_path("torus_gradient"));
    const Report r = run_analysis(s, "green");
    CHECK(r.pass);
    REQUIRE(!r.records.empty());
    CHECK(r.records[0].name == "green_residual");
    CHECK(std::abs(r.records[0].value) < 1e-10);
    REQUIRE(r.records[0].tolerance.has_value());
  }
  SUBCASE("raychaudhuri on matter FLRW passes") {
    const Scenario s = load_scenario(scenario_path("flrw_matter"));
    const Report r = run_analysis(s, "raychaudhuri");
    CHECK(r.pass);
    CHECK(std::abs(r.records[0].value) < 1e-6);
  }
  SUBCASE("soliton on the gaussian structure passes with lhs = rhs = 4") {
    const Scenario s = load_scenario(scenario_path("gaussian_soliton"));
    const Report r = run_analysis(s, "soliton");
    CHECK(r.pass);
    double lhs = 0.0, rhs = 0.0;
    for (const auto& rec : r.records) {
      if (rec.name == "log_rate_identity_lhs") lhs = rec.value;
      if (rec.name == "log_rate_identity_rhs") rhs = rec.value;
    }
    CHECK(lhs == doctest::Approx(4.0).epsilon(1e-7));
    CHECK(rhs == doctest::Approx(4.0).epsilon(1e-7));
  }
  SUBCASE("energy on de Sitter fails (condition violated everywhere)") {
    const Scenario s = load_scenario(scenario_path("flrw_desitter"));
    const Report r = run_analysis(s, "energy", AnalysisOptions{8, std::nullopt});
    CHECK(!r.pass);
  }
  SUBCASE("judged records always carry their tolerance") {
    const Scenario s = load_scenario(scenario_path("torus_gradient"));
    for (const char* analysis : {"green", "eq4", "volume", "flow"}) {
      const Report r = run_analysis(s, analysis);
      for (const auto& rec : r.records)
        if (rec.pass.has_value()) CHECK(rec.tolerance.has_value());
    }
  }
  SUBCASE("unknown analysis is a schema error") {
    const Scenario s = load_scenario(scenario_path("torus_gradient"));
    CHECK_THROWS_AS(run_analysis(s, "nope"), SchemaError);
  }
}

TEST_CASE("jets of every shipped expression match the FD oracle") {
  const char* names[] = {"flat_torus_incompressible", "torus_gradient", "torus_shear",
                         "flrw_matter", "flrw_desitter", "kasner_like", "gaussian_soliton",
                         "sphere_soliton", "flrw_strip_region"};
  for (const char* name : names) {
    const Scenario s = load_scenario(scenario_path(name));
    const int n = s.chart->dim();
    std::vector<const volex::Expr*> exprs;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) exprs.push_back(&s.metric->at(i, j));
    for (int k = 0; k < n; ++k) exprs.push_back(&s.field->component(k));
    if (s.fluid) {
      exprs.push_back(&s.fluid->mu);
      exprs.push_back(&s.fluid->rho);
    }
    const auto box = s.sampling_box();
    const auto points = volex::sample_domain_points(*s.chart, 100, 77, &box);
    for (const auto* e : exprs) {
      for (std::size_t pi = 0; pi < points.size(); pi += 9) {  // 12 points per expr
        const auto& p = points[pi];
        const volex::Jet2 jet = e->eval_jet2(p);
        for (int i = 0; i < n; ++i) {
          const double fd = volex::test::fd_grad(*e, p, i);
          CHECK(std::abs(jet.grad(i) - fd) / (1.0 + std::abs(fd)) < 1e-6);
          for (int j = 0; j <= i; ++j) {
            const double fdh = volex::test::fd_hess(*e, p, i, j);
            CHECK(std::abs(jet.hess(i, j) - fdh) / (1.0 + std::abs(fdh)) < 1e-6);
          }
        }
      }
    }
  }
}

TEST_CASE("every shipped scenario passes its applicable analyses") {
  struct Entry {
    const char* name;
    std::vector<const char*> analyses;
  };
  const Entry catalog[] = {
      {"flat_torus_incompressible", {"green", "eq4", "volume", "flow", "diagnose"}},
      {"torus_gradient", {"green", "eq4", "volume", "flow", "diagnose"}},
      {"torus_shear", {"green", "eq4", "volume", "flow", "diagnose"}},
      {"flrw_matter", {"volume", "flow", "raychaudhuri", "eq7", "energy", "boundary",
                       "diagnose"}},
      {"flrw_desitter", {"volume", "flow", "raychaudhuri", "eq7", "diagnose"}},
      {"kasner_like", {"volume", "flow", "raychaudhuri", "eq7", "energy", "diagnose"}},
      {"gaussian_soliton", {"volume", "flow", "soliton", "boundary", "diagnose"}},
      {"sphere_soliton", {"volume", "flow", "soliton", "diagnose"}},
      {"flrw_strip_region", {"volume", "raychaudhuri", "eq7", "energy", "boundary",
                             "diagnose"}},
  };
  for (const auto& entry : catalog) {
    const Scenario s = load_scenario(scenario_path(entry.name));
    for (const char* analysis : entry.analyses) {
      CAPTURE(entry.name);
      CAPTURE(analysis);
      const Report r = run_analysis(s, analysis, AnalysisOptions{8, std::nullopt});
      CHECK(r.pass);
    }
  }
}

TEST_CASE("the flow pullback oracle holds on every fixture with a window") {
  const char* names[] = {"flat_torus_incompressible", "torus_gradient", "torus_shear",
                         "flrw_matter", "flrw_desitter", "kasner_like", "gaussian_soliton",
                         "sphere_soliton"};
  for (const char* name : names) {
    const Scenario s = load_scenario(scenario_path(name));
    REQUIRE(s.flow.has_value());
    const Report r = run_analysis(s, "flow");
    CAPTURE(name);
    for (const auto& rec : r.records)
      if (rec.name == "expansion_rate_pullback_gap") {
        CHECK(rec.pass.has_value());
        CHECK(*rec.pass);
        CHECK(rec.value < 1e-4);
      }
  }
}

TEST_CASE("balance analyses reject charts with boundary") {
  const Scenario s = load_scenario(scenario_path("flrw_matter"));
  CHECK_THROWS_AS(run_analysis(s, "green"), NonCompactDomain);
  CHECK_THROWS_AS(run_analysis(s, "eq4"), NonCompactDomain);
}

TEST_CASE("report serialization") {
  const Scenario s = load_scenario(scenario_path("flrw_matter"));
  const Report r = run_analysis(s, "raychaudhuri");
  SUBCASE("json re-parses and round-trips the records") {
    const std::string json = to_json(r);
    CHECK(json.find("\"scenario\": \"flrw_matter\"") != std::string::npos);
    CHECK(json.find("\"analysis\": \"raychaudhuri\"") != std::string::npos);
    CHECK(json.find("raychaudhuri_residual_max") != std::string::npos);
  }
  SUBCASE("csv row count equals sample count") {
    const std::string csv = to_csv(r);
    std::size_t rows = 0;
    for (char c : csv)
      if (c == '\n') ++rows;
    CHECK(rows == r.samples.size() + 1);  // header
  }
  SUBCASE("two in-process runs serialize identically") {
    const Report r2 = run_analysis(s, "raychaudhuri");
    CHECK(to_json(r) == to_json(r2));
    CHECK(to_csv(r) == to_csv(r2));
  }
}

TEST_CASE("volex binary: exit codes and byte-identical reports") {
  const std::string tmp = std::string(VOLEX_TEST_TMPDIR);
  SUBCASE("validate on the catalog") {
    CHECK(run_volex("validate " + scenario_path("flrw_matter") + " > /dev/null") == 0);
  }
  SUBCASE("input error exits 2") {
    CHECK(run_volex("validate /nonexistent.json 2> /dev/null") == 2);
    CHECK(run_volex("run /nonexistent.json --analysis green 2> /dev/null") == 2);
  }
  SUBCASE("check failure exits 1") {
    CHECK(run_volex("run " + scenario_path("flrw_desitter") +
                    " --analysis energy --grid 8 > /dev/null") == 1);
  }
  SUBCASE("pass exits 0 and reports are byte-identical across runs") {
    const std::string out1 = tmp + "/r1.json";
    const std::string out2 = tmp + "/r2.json";
    CHECK(run_volex("run " + scenario_path("torus_gradient") + " --analysis eq4 --out " +
                    out1) == 0);
    CHECK(run_volex("run " + scenario_path("torus_gradient") + " --analysis eq4 --out " +
                    out2) == 0);
    CHECK(slurp(out1) == slurp(out2));
  }
  SUBCASE("csv output is written alongside the report") {
    const std::string out = tmp + "/r.json";
    const std::string csv = tmp + "/r.csv";
    CHECK(run_volex("run " + scenario_path("flat_torus_incompressible") +
                    " --analysis flow --out " + out + " --csv " + csv) == 0);
    const std::string table = slurp(csv);
    CHECK(table.rfind("scenario,analysis,x1,x2,quantity,value", 0) == 0);
  }
}
