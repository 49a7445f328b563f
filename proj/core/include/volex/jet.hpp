#pragma once

#include <span>
#include <vector>

namespace volex {

/// Order-2 jet of a scalar quantity with respect to n coordinates:
/// value, gradient and Hessian, propagated exactly (to roundoff) through
/// arithmetic by truncated Taylor rules. The Hessian is stored as a packed
/// lower triangle, so symmetry holds bitwise by construction.
class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(int dim) { set_dim(dim); }

  static Jet2 constant(int dim, double v);
  /// Seed for coordinate `index`: value v, gradient e_index, zero Hessian.
  static Jet2 variable(int dim, int index, double v);

  int dim() const { return n_; }
  double value() const { return v_; }
  double grad(int i) const { return g_[i]; }
  double hess(int i, int j) const { return h_[pack(i, j)]; }
  std::span<const double> gradient() const { return g_; }
  bool all_finite() const;

  /// Resize to dimension n and zero everything.
  void set_dim(int n);
  void set_value(double v) { v_ = v; }
  double& grad_ref(int i) { return g_[i]; }
  double& hess_ref(int i, int j) { return h_[pack(i, j)]; }

  // In-place kernels used by the expression evaluator; `out` must not
  // alias an operand.
  static void add(Jet2& out, const Jet2& a, const Jet2& b);
  static void sub(Jet2& out, const Jet2& a, const Jet2& b);
  static void mul(Jet2& out, const Jet2& a, const Jet2& b);
  static void div(Jet2& out, const Jet2& a, const Jet2& b);
  static void neg(Jet2& out, const Jet2& a);
  /// Chain rule for a univariate f: out = f(a) given f(a.v), f'(a.v), f''(a.v).
  static void compose(Jet2& out, const Jet2& a, double f0, double f1, double f2);
  /// a^e for constant exponent; integer exponents allow any base,
  /// fractional exponents require a positive base.
  static void pow_const(Jet2& out, const Jet2& a, double e);
  /// General a^b (both varying); requires a positive base.
  static void pow_jet(Jet2& out, const Jet2& a, const Jet2& b);

  // Value-semantics operators for cold paths and tests.
  friend Jet2 operator+(const Jet2& a, const Jet2& b);
  friend Jet2 operator-(const Jet2& a, const Jet2& b);
  friend Jet2 operator*(const Jet2& a, const Jet2& b);
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
  friend Jet2 operator-(const Jet2& a);

  static int pack(int i, int j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }

 private:
  int n_ = 0;
  double v_ = 0.0;
  std::vector<double> g_;
  std::vector<double> h_;  // packed lower triangle, n(n+1)/2
};

/// sqrt(a), a > 0 elementwise rules; throws DomainError on a.value < 0.
Jet2 jet_sqrt(const Jet2& a);
Jet2 jet_log(const Jet2& a);
Jet2 jet_exp(const Jet2& a);
Jet2 jet_abs(const Jet2& a);

}  // namespace volex
