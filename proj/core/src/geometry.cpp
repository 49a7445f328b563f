#include "volex/geometry.hpp"

#include <cmath>

#include "volex/errors.hpp"

namespace volex::geom {

MetricSpec::MetricSpec(const Chart& chart, std::vector<Expr> lower_triangle)
    : n_(chart.dim()), comps_(std::move(lower_triangle)) {
  if (static_cast<int>(comps_.size()) != n_ * (n_ + 1) / 2)
    throw Error("metric spec needs n(n+1)/2 lower-triangle components");
}

MetricSpec MetricSpec::parse(const Chart& chart,
                             const std::vector<std::vector<std::string>>& rows) {
  const int n = chart.dim();
  if (static_cast<int>(rows.size()) != n)
    throw Error("metric: expected a full n x n matrix of expressions");
  std::vector<Expr> lower;
  lower.resize(0);
  lower.reserve(n * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw Error("metric: row length mismatch");
    for (int j = 0; j <= i; ++j) lower.push_back(Expr::parse(rows[i][j], chart));
  }
  // Symmetry: the upper triangle must parse to the same AST as its mirror.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Expr upper = Expr::parse(rows[i][j], chart);
      if (!(upper == lower[Jet2::pack(j, i)]))
        throw Error("metric: entry (" + std::to_string(i) + "," + std::to_string(j) +
                    ") is not the mirror of its transpose");
    }
  return MetricSpec(chart, std::move(lower));
}

Matrix MetricSpec::values(std::span<const double> p) const {
  Matrix m(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = comps_[Jet2::pack(i, j)].eval(p);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

VectorFieldSpec::VectorFieldSpec(const Chart& chart, std::vector<Expr> components)
    : comps_(std::move(components)) {
  if (static_cast<int>(comps_.size()) != chart.dim())
    throw Error("vector field spec needs one component per coordinate");
}

VectorFieldSpec VectorFieldSpec::parse(const Chart& chart, const std::vector<std::string>& comps) {
  std::vector<Expr> parsed;
  parsed.reserve(comps.size());
  for (const auto& c : comps) parsed.push_back(Expr::parse(c, chart));
  return VectorFieldSpec(chart, std::move(parsed));
}

std::vector<double> VectorFieldSpec::values(std::span<const double> p) const {
  std::vector<double> v(comps_.size());
  for (std::size_t k = 0; k < comps_.size(); ++k) v[k] = comps_[k].eval(p);
  return v;
}

std::vector<Jet2> VectorFieldSpec::jets(std::span<const double> p) const {
  std::vector<Jet2> v(comps_.size());
  for (std::size_t k = 0; k < comps_.size(); ++k) v[k] = comps_[k].eval_jet2(p);
  return v;
}

MetricJets::MetricJets(const MetricSpec& g, std::span<const double> p)
    : n_(g.dim()), value_(g.dim()) {
  comps_.resize(static_cast<std::size_t>(n_) * (n_ + 1) / 2);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) {
      Jet2 jet = g.at(i, j).eval_jet2(p);
      value_(i, j) = jet.value();
      value_(j, i) = jet.value();
      comps_[Jet2::pack(i, j)] = std::move(jet);
    }
}

Christoffel::Christoffel(int n)
    : n_(n), m_(static_cast<std::size_t>(n) * (n + 1) / 2), data_(n * m_, 0.0) {}

namespace {

struct MetricLocal {
  MetricJets jets;
  Matrix inv;
  double det;

  MetricLocal(const MetricSpec& g, std::span<const double> p) : jets(g, p), det(0.0) {
    inv = inverse(jets.value(), &det);
  }
};

double sqrt_abs(double x) { return std::sqrt(std::abs(x)); }

// trace(g^{-1} d_k g)
double trace_inv_dg(const MetricLocal& m, int k) {
  const int n = m.jets.dim();
  double tr = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tr += m.inv(i, j) * m.jets.d(k, j, i);
  return tr;
}

}  // namespace

MetricData metric_at(const Chart& chart, const MetricSpec& g, std::span<const double> p) {
  Matrix mat = g.values(p);
  if (!mat.all_finite()) throw NonFinite("metric components non-finite");
  const double det = determinant(mat);
  if (std::abs(det) < 1e-14) throw SingularMetric("metric determinant below 1e-14");
  Matrix inv = inverse(mat);
  check_signature(chart, mat);
  return MetricData{std::move(mat), std::move(inv), det, sqrt_abs(det)};
}

double sqrt_abs_det_at(const MetricSpec& g, std::span<const double> p) {
  const double det = determinant(g.values(p));
  if (std::abs(det) < 1e-14) throw SingularMetric("metric determinant below 1e-14");
  return std::sqrt(std::abs(det));
}

void check_signature(const Chart& chart, const Matrix& g_matrix) {
  const auto ev = symmetric_eigenvalues(g_matrix);
  int negatives = 0;
  for (double lambda : ev) {
    if (std::abs(lambda) < 1e-12)
      throw SingularMetric("metric eigenvalue within 1e-12 of zero");
    if (lambda < 0.0) ++negatives;
  }
  const int expected = chart.lorentzian() ? 1 : 0;
  if (negatives != expected)
    throw SignatureMismatch("metric has " + std::to_string(negatives) +
                            " negative eigenvalue(s), expected " + std::to_string(expected));
}

Christoffel christoffel(const MetricJets& jets, const Matrix& inv) {
  const int n = jets.dim();
  Christoffel gamma(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += inv(k, l) * (jets.d(i, j, l) + jets.d(j, i, l) - jets.d(l, i, j));
        gamma.at(k, i, j) = 0.5 * sum;
      }
  return gamma;
}

Christoffel christoffel(const Chart& chart, const MetricSpec& g, std::span<const double> p) {
  (void)chart;
  MetricLocal m(g, p);
  return christoffel(m.jets, m.inv);
}

CurvaturePack curvature(const Chart& chart, const MetricSpec& g, std::span<const double> p) {
  const int n = g.dim();
  MetricLocal m(g, p);
  Christoffel gamma = christoffel(m.jets, m.inv);

  // dGamma[k] = d Gamma / d x^k by central differences of the exact Gamma.
  std::vector<Christoffel> dgamma;
  dgamma.reserve(n);
  std::vector<double> q(p.begin(), p.end());
  for (int k = 0; k < n; ++k) {
    const double h = fd_step(1e-5, p[k]);
    q[k] = p[k] + h;
    Christoffel plus = christoffel(chart, g, q);
    q[k] = p[k] - h;
    Christoffel minus = christoffel(chart, g, q);
    q[k] = p[k];
    Christoffel d(n);
    for (int c = 0; c < n; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
          d.at(c, i, j) = (plus.at(c, i, j) - minus.at(c, i, j)) / (2.0 * h);
    dgamma.push_back(std::move(d));
  }

  // c_l = Gamma^k_{kl}
  std::vector<double> contracted(n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) contracted[l] += gamma.at(k, k, l);

  // Ric_ij = d_k Gamma^k_ij - d_j Gamma^k_ki + c_l Gamma^l_ij - Gamma^k_jl Gamma^l_ki
  Matrix ric(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) v += dgamma[k].at(k, i, j);
      for (int k = 0; k < n; ++k) v -= dgamma[j].at(k, k, i);
      for (int l = 0; l < n; ++l) v += contracted[l] * gamma.at(l, i, j);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) v -= gamma.at(k, j, l) * gamma.at(l, k, i);
      ric(i, j) = v;
      ric(j, i) = v;
    }
  if (!ric.all_finite()) throw NonFinite("Ricci tensor non-finite");

  double scalar = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scalar += m.inv(i, j) * ric(j, i);

  return CurvaturePack{std::move(gamma), std::move(ric), scalar};
}

double divergence(const Chart& chart, const MetricSpec& g, const VectorFieldSpec& x,
                  std::span<const double> p) {
  (void)chart;
  const int n = g.dim();
  MetricLocal m(g, p);
  const auto xj = x.jets(p);
  double div = 0.0;
  for (int k = 0; k < n; ++k)
    div += xj[k].grad(k) + 0.5 * xj[k].value() * trace_inv_dg(m, k);
  return div;
}

double lie_volume_rate(const Chart& chart, const MetricSpec& g, const VectorFieldSpec& xi,
                       std::span<const double> p) {
  (void)chart;
  const int n = g.dim();
  // Determinant propagated through jet arithmetic (LU with value pivoting),
  // then log-sqrt; independent of the trace identity used by divergence().
  std::vector<Jet2> a;
  a.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.push_back(g.at(i, j).eval_jet2(p));
  auto at = [&](int i, int j) -> Jet2& { return a[static_cast<std::size_t>(i) * n + j]; };

  // Pivot product = +-det as a locally smooth function; since only
  // |det| is needed, the swap parity never enters.
  Jet2 det = Jet2::constant(n, 1.0);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(at(r, col).value()) > std::abs(at(pivot, col).value())) pivot = r;
    if (pivot != col)
      for (int j = 0; j < n; ++j) std::swap(at(pivot, j), at(col, j));
    if (std::abs(at(col, col).value()) < 1e-300)
      throw SingularMetric("metric determinant vanishes (jet path)");
    det = det * at(col, col);
    for (int r = col + 1; r < n; ++r) {
      Jet2 f = at(r, col) / at(col, col);
      for (int j = col; j < n; ++j) at(r, j) = at(r, j) - f * at(col, j);
    }
  }
  if (std::abs(det.value()) < 1e-14) throw SingularMetric("metric determinant below 1e-14");
  Jet2 absdet = det.value() < 0.0 ? -det : det;
  Jet2 vol = jet_sqrt(absdet);

  const auto xj = xi.jets(p);
  double rate = 0.0;
  for (int k = 0; k < n; ++k)
    rate += xj[k].grad(k) + xj[k].value() * vol.grad(k) / vol.value();
  return rate;
}

namespace {

struct DivWithGradient {
  double div;
  std::vector<double> grad;
};

// One-pass evaluation of div X and its coordinate gradient:
//   div X   = d_k X^k + (1/2) X^k tr(g^{-1} d_k g)
//   d_m div = d_m d_k X^k + (1/2) [ d_m X^k tr(g^{-1} d_k g)
//             + X^k tr(d_m g^{-1} d_k g + g^{-1} d_m d_k g) ],
// with d_m g^{-1} = -g^{-1} (d_m g) g^{-1} hoisted out of the k loop.
DivWithGradient divergence_with_gradient(const MetricSpec& g, const VectorFieldSpec& x,
                                         std::span<const double> p) {
  const int n = g.dim();
  MetricLocal m(g, p);
  const auto xj = x.jets(p);

  std::vector<double> trk(n, 0.0);
  for (int k = 0; k < n; ++k) trk[k] = trace_inv_dg(m, k);

  DivWithGradient out{0.0, std::vector<double>(n, 0.0)};
  for (int k = 0; k < n; ++k) out.div += xj[k].grad(k) + 0.5 * xj[k].value() * trk[k];

  std::vector<Matrix> dinv(n);
  for (int mu = 0; mu < n; ++mu) {
    Matrix d(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) v -= m.inv(i, a) * m.jets.d(mu, a, b) * m.inv(b, j);
        d(i, j) = v;
      }
    dinv[mu] = std::move(d);
  }

  for (int mu = 0; mu < n; ++mu) {
    double v = 0.0;
    for (int k = 0; k < n; ++k) {
      v += xj[k].hess(mu, k);
      v += 0.5 * xj[k].grad(mu) * trk[k];
      double tr = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          tr += dinv[mu](i, j) * m.jets.d(k, j, i) + m.inv(i, j) * m.jets.dd(mu, k, j, i);
      v += 0.5 * xj[k].value() * tr;
    }
    out.grad[mu] = v;
  }
  return out;
}

}  // namespace

std::vector<double> divergence_gradient(const Chart& chart, const MetricSpec& g,
                                        const VectorFieldSpec& x, std::span<const double> p) {
  (void)chart;
  return divergence_with_gradient(g, x, p).grad;
}

ExpansionAcceleration expansion_acceleration(const Chart& chart, const MetricSpec& g,
                                             const VectorFieldSpec& xi,
                                             std::span<const double> p) {
  (void)chart;
  const auto dg = divergence_with_gradient(g, xi, p);
  const auto xv = xi.values(p);
  double lie = 0.0;
  for (std::size_t k = 0; k < xv.size(); ++k) lie += xv[k] * dg.grad[k];
  return ExpansionAcceleration{lie, lie + dg.div * dg.div};
}

Matrix lie_metric(const Chart& chart, const MetricSpec& g, const VectorFieldSpec& xi,
                  std::span<const double> p) {
  (void)chart;
  const int n = g.dim();
  MetricJets jets(g, p);
  const auto xj = xi.jets(p);
  Matrix lie(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) {
        v += xj[k].value() * jets.d(k, i, j);
        v += jets.value()(k, j) * xj[k].grad(i);
        v += jets.value()(i, k) * xj[k].grad(j);
      }
      lie(i, j) = v;
      lie(j, i) = v;
    }
  return lie;
}

std::vector<double> acceleration_vector(const Chart& chart, const MetricSpec& g,
                                        const VectorFieldSpec& xi, std::span<const double> p) {
  const int n = g.dim();
  Christoffel gamma = christoffel(chart, g, p);
  const auto xj = xi.jets(p);
  std::vector<double> acc(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
      v += xj[i].value() * xj[k].grad(i);
      for (int j = 0; j < n; ++j) v += gamma.at(k, i, j) * xj[i].value() * xj[j].value();
    }
    acc[k] = v;
  }
  return acc;
}

double divergence_of(const Chart& chart, const MetricSpec& g, const FieldFn& field,
                     std::span<const double> p, double step) {
  (void)chart;
  const int n = g.dim();
  const double root = sqrt_abs_det_at(g, p);
  std::vector<double> q(p.begin(), p.end());
  double div = 0.0;
  for (int k = 0; k < n; ++k) {
    const double h = fd_step(step, p[k]);
    q[k] = p[k] + h;
    const double wp = sqrt_abs_det_at(g, q) * field(q)[k];
    q[k] = p[k] - h;
    const double wm = sqrt_abs_det_at(g, q) * field(q)[k];
    q[k] = p[k];
    div += (wp - wm) / (2.0 * h);
  }
  return div / root;
}

}  // namespace volex::geom
