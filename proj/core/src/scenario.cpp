#include "volex/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "volex/errors.hpp"

namespace volex::cli {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& what, const std::string& key) {
  throw SchemaError(what, key);
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    schema_fail(std::string("missing required key '") + key + "'", path);
  return obj.at(key);
}

std::string expr_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  schema_fail("expected an expression string or number", key);
}

Expr parse_expr(const std::string& text, const Chart& chart, const std::string& key) {
  try {
    return Expr::parse(text, chart);
  } catch (const SyntaxError& e) {
    throw ParseError(e.what(), key);
  } catch (const UnknownSymbol& e) {
    throw ParseError(e.what(), key);
  }
}

Chart parse_chart(const json& jc) {
  const json& jsig = require(jc, "signature", "chart");
  const std::string sig_name = jsig.is_string() ? jsig.get<std::string>() : "";
  Signature sig;
  if (sig_name == "riemannian")
    sig = Signature::Riemannian;
  else if (sig_name == "lorentzian")
    sig = Signature::Lorentzian;
  else
    schema_fail("signature must be \"riemannian\" or \"lorentzian\"", "chart.signature");

  const json& jcoords = require(jc, "coordinates", "chart");
  if (!jcoords.is_array() || jcoords.size() < 2)
    schema_fail("coordinates must be an array of at least two names", "chart.coordinates");
  std::vector<std::string> names;
  for (const auto& c : jcoords) {
    if (!c.is_string()) schema_fail("coordinate names must be strings", "chart.coordinates");
    names.push_back(c.get<std::string>());
  }
  if (jc.contains("dimension") &&
      jc.at("dimension").get<std::size_t>() != names.size())
    schema_fail("dimension does not match the coordinate list", "chart.dimension");

  const json& jdom = require(jc, "domain", "chart");
  std::vector<CoordDomain> domains;
  for (const auto& name : names) {
    const std::string key = "chart.domain." + name;
    if (!jdom.contains(name)) {
      domains.push_back(CoordDomain::unbounded());
      continue;
    }
    const json& d = jdom.at(name);
    const bool has_period = d.contains("period");
    const bool has_bounds = d.contains("bounds");
    if (has_period && has_bounds)
      schema_fail("coordinate cannot be both periodic and bounded", key);
    if (has_period) {
      if (!d.at("period").is_number()) schema_fail("period must be a number", key);
      domains.push_back(CoordDomain::periodic(d.at("period").get<double>()));
    } else if (has_bounds) {
      const json& b = d.at("bounds");
      if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
        schema_fail("bounds must be [lo, hi]", key);
      domains.push_back(CoordDomain::bounded(b[0].get<double>(), b[1].get<double>()));
    } else {
      domains.push_back(CoordDomain::unbounded());
    }
  }
  try {
    return Chart(sig, std::move(names), std::move(domains));
  } catch (const Error& e) {
    throw SchemaError(e.what(), "chart");
  }
}

}  // namespace

quad::Region Scenario::region() const {
  if (!region_bounds) throw SchemaError("scenario has no region block", "region");
  return quad::Region(*chart, *region_bounds);
}

std::vector<std::pair<double, double>> Scenario::sampling_box() const {
  if (sample_bounds) return *sample_bounds;
  std::vector<std::pair<double, double>> box;
  for (int a = 0; a < chart->dim(); ++a) {
    if (chart->periodic(a))
      box.emplace_back(0.0, chart->period(a));
    else if (chart->bounded(a))
      box.emplace_back(chart->bounds(a));
    else
      box.emplace_back(-2.0, 2.0);
  }
  return box;
}

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), "$");
  }

  Scenario s;
  s.name = require(doc, "name", "$").is_string() ? doc.at("name").get<std::string>() : "";
  if (s.name.empty()) schema_fail("name must be a non-empty string", "name");

  s.chart = std::make_shared<Chart>(parse_chart(require(doc, "chart", "$")));
  const Chart& chart = *s.chart;
  const int n = chart.dim();

  // metric: full n x n matrix of expressions, mirror-symmetric.
  const json& jm = require(doc, "metric", "$");
  if (!jm.is_array() || static_cast<int>(jm.size()) != n)
    schema_fail("metric must be an n x n matrix of expressions", "metric");
  std::vector<Expr> lower;
  for (int i = 0; i < n; ++i) {
    const json& row = jm.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      schema_fail("metric row " + std::to_string(i) + " must have n entries",
                  "metric[" + std::to_string(i) + "]");
    for (int j = 0; j <= i; ++j) {
      const std::string key = "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      lower.push_back(parse_expr(expr_text(row.at(j), key), chart, key));
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const std::string key = "metric[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      Expr upper = parse_expr(expr_text(jm.at(i).at(j), key), chart, key);
      if (!(upper == lower[Jet2::pack(j, i)]))
        schema_fail("metric entry is not the mirror of its transpose", key);
    }
  s.metric = std::make_shared<geom::MetricSpec>(chart, std::move(lower));

  // field: n component expressions.
  const json& jf = require(doc, "field", "$");
  if (!jf.is_array() || static_cast<int>(jf.size()) != n)
    schema_fail("field must have one component per coordinate", "field");
  std::vector<Expr> comps;
  for (int k = 0; k < n; ++k) {
    const std::string key = "field[" + std::to_string(k) + "]";
    comps.push_back(parse_expr(expr_text(jf.at(k), key), chart, key));
  }
  s.field = std::make_shared<geom::VectorFieldSpec>(chart, std::move(comps));

  if (doc.contains("lambda")) {
    if (!doc.at("lambda").is_number()) schema_fail("lambda must be a number", "lambda");
    s.lambda = doc.at("lambda").get<double>();
  }

  if (doc.contains("fluid")) {
    const json& jfl = doc.at("fluid");
    Expr mu = parse_expr(expr_text(require(jfl, "mu", "fluid"), "fluid.mu"), chart, "fluid.mu");
    Expr rho =
        parse_expr(expr_text(require(jfl, "rho", "fluid"), "fluid.rho"), chart, "fluid.rho");
    s.fluid = lorentz::FluidParams{std::move(mu), std::move(rho)};
  }

  if (doc.contains("slice")) {
    const json& js = doc.at("slice");
    const json& jc = require(js, "coordinate", "slice");
    if (!jc.is_string()) schema_fail("slice coordinate must be a name", "slice.coordinate");
    const int axis = chart.coord_index(jc.get<std::string>());
    if (axis < 0) schema_fail("slice coordinate is not declared on the chart", "slice.coordinate");
    const json& jv = require(js, "value", "slice");
    if (!jv.is_number()) schema_fail("slice value must be a number", "slice.value");
    s.slice = SliceRef{axis, jv.get<double>()};
  }

  if (doc.contains("region")) {
    const json& jr = doc.at("region");
    if (!jr.is_object()) schema_fail("region must map coordinate names to [lo, hi]", "region");
    std::vector<std::optional<std::pair<double, double>>> bounds(n, std::nullopt);
    for (const auto& [key, value] : jr.items()) {
      const int axis = chart.coord_index(key);
      if (axis < 0) schema_fail("region key is not a coordinate", "region." + key);
      if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
          !value[1].is_number())
        schema_fail("region bounds must be [lo, hi]", "region." + key);
      bounds[axis] = std::make_pair(value[0].get<double>(), value[1].get<double>());
    }
    s.region_bounds = std::move(bounds);
  }

  if (doc.contains("flow")) {
    const json& jw = doc.at("flow");
    const json& jstart = require(jw, "start", "flow");
    if (!jstart.is_array() || static_cast<int>(jstart.size()) != n)
      schema_fail("flow.start must have one value per coordinate", "flow.start");
    FlowWindow w;
    for (const auto& v : jstart) {
      if (!v.is_number()) schema_fail("flow.start entries must be numbers", "flow.start");
      w.start.push_back(v.get<double>());
    }
    w.t_final = require(jw, "t_final", "flow").get<double>();
    w.steps = jw.contains("steps") ? jw.at("steps").get<int>() : 200;
    if (w.steps < 1) schema_fail("flow.steps must be >= 1", "flow.steps");
    s.flow = std::move(w);
  }

  if (doc.contains("grid")) {
    const json& jg = doc.at("grid");
    if (jg.is_number_integer()) {
      s.grid.assign(n, jg.get<int>());
    } else if (jg.is_array() && static_cast<int>(jg.size()) == n) {
      for (const auto& v : jg) s.grid.push_back(v.get<int>());
    } else {
      schema_fail("grid must be an integer or one integer per coordinate", "grid");
    }
  } else {
    s.grid.assign(n, 32);
  }
  for (int g : s.grid)
    if (g < 4) schema_fail("grid counts must be >= 4", "grid");

  if (doc.contains("sample_bounds")) {
    const json& jb = doc.at("sample_bounds");
    if (!jb.is_object()) schema_fail("sample_bounds must map names to [lo, hi]", "sample_bounds");
    auto box = s.sampling_box();
    for (const auto& [key, value] : jb.items()) {
      const int axis = chart.coord_index(key);
      if (axis < 0) schema_fail("sample_bounds key is not a coordinate", "sample_bounds." + key);
      if (!value.is_array() || value.size() != 2)
        schema_fail("sample_bounds must be [lo, hi]", "sample_bounds." + key);
      box[axis] = {value[0].get<double>(), value[1].get<double>()};
    }
    s.sample_bounds = std::move(box);
  }

  // Signature validation at 20 deterministic sample points.
  for (const auto& p : sample_domain_points(chart, 20, 0x5eed0002ULL))
    geom::metric_at(chart, *s.metric, p);

  // Region block validity (throws FaceNotSlice on bad bounds).
  if (s.region_bounds) (void)s.region();

  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace volex::cli
