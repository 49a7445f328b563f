#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "volex/chart.hpp"
#include "volex/expr.hpp"
#include "volex/geometry.hpp"

namespace volex::test {

inline constexpr double kTwoPi = 6.283185307179586476925287;

// ---- stock charts and metrics used across the suite ----

inline Chart torus_chart(double period = kTwoPi) {
  return Chart(Signature::Riemannian, {"x1", "x2"},
               {CoordDomain::periodic(period), CoordDomain::periodic(period)});
}

inline Chart plane_chart(double half_width = 6.0) {
  return Chart(Signature::Riemannian, {"x1", "x2"},
               {CoordDomain::bounded(-half_width, half_width),
                CoordDomain::bounded(-half_width, half_width)});
}

inline Chart sphere_chart(double excision = 1e-3) {
  return Chart(Signature::Riemannian, {"theta", "phi"},
               {CoordDomain::bounded(excision, 3.14159265358979323846 - excision),
                CoordDomain::periodic(kTwoPi)});
}

inline Chart flrw_chart() {
  return Chart(Signature::Lorentzian, {"t", "x", "y", "z"},
               {CoordDomain::bounded(0.5, 2.5), CoordDomain::periodic(1.0),
                CoordDomain::periodic(1.0), CoordDomain::periodic(1.0)});
}

inline geom::MetricSpec identity_metric(const Chart& chart) {
  std::vector<Expr> lower;
  for (int i = 0; i < chart.dim(); ++i)
    for (int j = 0; j <= i; ++j)
      lower.push_back(Expr::number(i == j ? 1.0 : 0.0, chart));
  return geom::MetricSpec(chart, std::move(lower));
}

/// Lorentzian diag(-1, f, f, f) (or general per-axis entries).
inline geom::MetricSpec diag_metric(const Chart& chart, const std::vector<std::string>& diag) {
  std::vector<Expr> lower;
  for (int i = 0; i < chart.dim(); ++i)
    for (int j = 0; j <= i; ++j)
      lower.push_back(i == j ? Expr::parse(diag[i], chart) : Expr::number(0.0, chart));
  return geom::MetricSpec(chart, std::move(lower));
}

inline geom::MetricSpec flrw_metric(const Chart& chart) {
  return diag_metric(chart, {"-1", "t^(4/3)", "t^(4/3)", "t^(4/3)"});
}

inline geom::MetricSpec desitter_metric(const Chart& chart) {
  return diag_metric(chart, {"-1", "exp(2*t)", "exp(2*t)", "exp(2*t)"});
}

inline geom::MetricSpec kasner_metric(const Chart& chart) {
  return diag_metric(chart, {"-1", "t^(4/3)", "t^(4/3)", "t^(-2/3)"});
}

inline geom::MetricSpec sphere_metric(const Chart& chart) {
  return geom::MetricSpec(chart, {Expr::number(1.0, chart), Expr::number(0.0, chart),
                                  Expr::parse("sin(theta)^2", chart)});
}

inline geom::VectorFieldSpec field(const Chart& chart, const std::vector<std::string>& comps) {
  return geom::VectorFieldSpec::parse(chart, comps);
}

// ---- finite-difference oracle for jets (Richardson-extrapolated) ----

inline double fd_grad(const Expr& e, std::vector<double> p, int i, double h = 1e-4) {
  auto diff = [&](double step) {
    p[i] += step;
    const double fp = e.eval(p);
    p[i] -= 2.0 * step;
    const double fm = e.eval(p);
    p[i] += step;
    return (fp - fm) / (2.0 * step);
  };
  const double d1 = diff(h);
  const double d2 = diff(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

inline double fd_hess(const Expr& e, std::vector<double> p, int i, int j, double h = 1e-4) {
  auto second = [&](double step) {
    if (i == j) {
      const double f0 = e.eval(p);
      p[i] += step;
      const double fp = e.eval(p);
      p[i] -= 2.0 * step;
      const double fm = e.eval(p);
      p[i] += step;
      return (fp - 2.0 * f0 + fm) / (step * step);
    }
    double sum = 0.0;
    for (int si : {+1, -1})
      for (int sj : {+1, -1}) {
        p[i] += si * step;
        p[j] += sj * step;
        sum += si * sj * e.eval(p);
        p[i] -= si * step;
        p[j] -= sj * step;
      }
    return sum / (4.0 * step * step);
  };
  const double d1 = second(h);
  const double d2 = second(h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

// ---- random expression generator (domain-safe by construction) ----

class ExprGen {
 public:
  ExprGen(const Chart& chart, unsigned long long seed) : chart_(chart), rng_(seed) {}

  Expr next(int max_depth = 4) {
    ExprBuilder b(chart_);
    const int root = gen(b, max_depth);
    return b.finish(root);
  }

 private:
  int gen(ExprBuilder& b, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    switch (pick(rng_)) {
      case 0: {
        std::uniform_real_distribution<double> num(0.1, 3.0);
        return b.number(num(rng_));
      }
      case 1: {
        std::uniform_int_distribution<int> coord(0, chart_.dim() - 1);
        return b.symbol(coord(rng_));
      }
      case 2: return b.binary(Expr::BinOp::Add, gen(b, depth - 1), gen(b, depth - 1));
      case 3: return b.binary(Expr::BinOp::Sub, gen(b, depth - 1), gen(b, depth - 1));
      case 4: return b.binary(Expr::BinOp::Mul, gen(b, depth - 1), gen(b, depth - 1));
      case 5: {
        // keep denominators away from zero: 1 + cosh(x) style
        const int denom = b.binary(
            Expr::BinOp::Add, b.number(1.5),
            b.call(Expr::Func::Tanh, gen(b, depth - 1)));
        return b.binary(Expr::BinOp::Div, gen(b, depth - 1), denom);
      }
      case 6: return b.neg(gen(b, depth - 1));
      case 7: {
        std::uniform_int_distribution<int> fn(0, 4);
        static const Expr::Func funcs[] = {Expr::Func::Sin, Expr::Func::Cos, Expr::Func::Exp,
                                           Expr::Func::Sinh, Expr::Func::Tanh};
        // bound exp arguments with tanh to avoid overflow
        int arg = gen(b, depth - 1);
        const Expr::Func f = funcs[fn(rng_)];
        if (f == Expr::Func::Exp || f == Expr::Func::Sinh)
          arg = b.call(Expr::Func::Tanh, arg);
        return b.call(f, arg);
      }
      case 8: {
        std::uniform_int_distribution<int> ex(2, 3);
        return b.binary(Expr::BinOp::Pow, gen(b, depth - 1), b.number(ex(rng_)));
      }
      default: {
        // sqrt / log of a strictly positive expression
        const int pos = b.binary(Expr::BinOp::Add, b.number(1.5),
                                 b.call(Expr::Func::Tanh, gen(b, depth - 1)));
        std::uniform_int_distribution<int> fn(0, 1);
        return b.call(fn(rng_) ? Expr::Func::Sqrt : Expr::Func::Log, pos);
      }
    }
  }

  const Chart& chart_;
  std::mt19937_64 rng_;
};

}  // namespace volex::test
