#include "volex/jet.hpp"

#include <cmath>

#include "volex/errors.hpp"

namespace volex {

Jet2 Jet2::constant(int dim, double v) {
  Jet2 j(dim);
  j.v_ = v;
  return j;
}

Jet2 Jet2::variable(int dim, int index, double v) {
  Jet2 j(dim);
  j.v_ = v;
  j.g_[index] = 1.0;
  return j;
}

bool Jet2::all_finite() const {
  if (!std::isfinite(v_)) return false;
  for (double x : g_)
    if (!std::isfinite(x)) return false;
  for (double x : h_)
    if (!std::isfinite(x)) return false;
  return true;
}

void Jet2::set_dim(int n) {
  n_ = n;
  v_ = 0.0;
  g_.assign(static_cast<std::size_t>(n), 0.0);
  h_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
}

namespace {
inline void size_like(Jet2& out, const Jet2& a) {
  if (out.dim() != a.dim()) out.set_dim(a.dim());
}
}  // namespace

void Jet2::add(Jet2& out, const Jet2& a, const Jet2& b) {
  size_like(out, a);
  out.v_ = a.v_ + b.v_;
  const std::size_t ng = a.g_.size(), nh = a.h_.size();
  for (std::size_t i = 0; i < ng; ++i) out.g_[i] = a.g_[i] + b.g_[i];
  for (std::size_t i = 0; i < nh; ++i) out.h_[i] = a.h_[i] + b.h_[i];
}

void Jet2::sub(Jet2& out, const Jet2& a, const Jet2& b) {
  size_like(out, a);
  out.v_ = a.v_ - b.v_;
  const std::size_t ng = a.g_.size(), nh = a.h_.size();
  for (std::size_t i = 0; i < ng; ++i) out.g_[i] = a.g_[i] - b.g_[i];
  for (std::size_t i = 0; i < nh; ++i) out.h_[i] = a.h_[i] - b.h_[i];
}

void Jet2::mul(Jet2& out, const Jet2& a, const Jet2& b) {
  size_like(out, a);
  const int n = a.n_;
  out.v_ = a.v_ * b.v_;
  for (int i = 0; i < n; ++i) out.g_[i] = a.g_[i] * b.v_ + a.v_ * b.g_[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const int ij = i * (i + 1) / 2 + j;
      out.h_[ij] = a.h_[ij] * b.v_ + a.v_ * b.h_[ij] + a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
    }
}

void Jet2::div(Jet2& out, const Jet2& a, const Jet2& b) {
  size_like(out, a);
  const int n = a.n_;
  const double iv = 1.0 / b.v_;
  out.v_ = a.v_ * iv;
  for (int i = 0; i < n; ++i) out.g_[i] = (a.g_[i] - out.v_ * b.g_[i]) * iv;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const int ij = i * (i + 1) / 2 + j;
      out.h_[ij] = (a.h_[ij] - out.v_ * b.h_[ij] - out.g_[i] * b.g_[j] - out.g_[j] * b.g_[i]) * iv;
    }
}

void Jet2::neg(Jet2& out, const Jet2& a) {
  size_like(out, a);
  out.v_ = -a.v_;
  for (std::size_t i = 0; i < a.g_.size(); ++i) out.g_[i] = -a.g_[i];
  for (std::size_t i = 0; i < a.h_.size(); ++i) out.h_[i] = -a.h_[i];
}

void Jet2::compose(Jet2& out, const Jet2& a, double f0, double f1, double f2) {
  size_like(out, a);
  const int n = a.n_;
  out.v_ = f0;
  for (int i = 0; i < n; ++i) out.g_[i] = f1 * a.g_[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      const int ij = i * (i + 1) / 2 + j;
      out.h_[ij] = f1 * a.h_[ij] + f2 * a.g_[i] * a.g_[j];
    }
}

void Jet2::pow_const(Jet2& out, const Jet2& a, double e) {
  const double x = a.v_;
  const bool integral = (e == std::nearbyint(e)) && std::abs(e) < 1e9;
  if (!integral && x <= 0.0)
    throw DomainError("fractional power of a non-positive base");
  if (integral && x == 0.0 && e < 2.0) {
    if (e < 0.0) throw DomainError("negative power of zero");
    // 0^0 -> 1, 0^1 -> x: fall through to std::pow values.
  }
  const double f0 = std::pow(x, e);
  const double f1 = e == 0.0 ? 0.0 : e * std::pow(x, e - 1.0);
  const double f2 = (e == 0.0 || e == 1.0) ? 0.0 : e * (e - 1.0) * std::pow(x, e - 2.0);
  compose(out, a, f0, f1, f2);
}

void Jet2::pow_jet(Jet2& out, const Jet2& a, const Jet2& b) {
  if (a.v_ <= 0.0)
    throw DomainError("variable exponent requires a positive base");
  // a^b = exp(b * log a)
  Jet2 la, bl;
  la.set_dim(a.n_);
  bl.set_dim(a.n_);
  const double x = a.v_;
  compose(la, a, std::log(x), 1.0 / x, -1.0 / (x * x));
  mul(bl, b, la);
  const double ev = std::exp(bl.v_);
  compose(out, bl, ev, ev, ev);
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r;
  Jet2::add(r, a, b);
  return r;
}
Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r;
  Jet2::sub(r, a, b);
  return r;
}
Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  Jet2::mul(r, a, b);
  return r;
}
Jet2 operator/(const Jet2& a, const Jet2& b) {
  Jet2 r;
  Jet2::div(r, a, b);
  return r;
}
Jet2 operator-(const Jet2& a) {
  Jet2 r;
  Jet2::neg(r, a);
  return r;
}

Jet2 jet_sqrt(const Jet2& a) {
  if (a.value() < 0.0) throw DomainError("sqrt of a negative value");
  const double s = std::sqrt(a.value());
  Jet2 r;
  Jet2::compose(r, a, s, 0.5 / s, -0.25 / (s * s * s));
  return r;
}

Jet2 jet_log(const Jet2& a) {
  if (a.value() <= 0.0) throw DomainError("log of a non-positive value");
  const double x = a.value();
  Jet2 r;
  Jet2::compose(r, a, std::log(x), 1.0 / x, -1.0 / (x * x));
  return r;
}

Jet2 jet_exp(const Jet2& a) {
  const double e = std::exp(a.value());
  Jet2 r;
  Jet2::compose(r, a, e, e, e);
  return r;
}

Jet2 jet_abs(const Jet2& a) {
  const double sgn = a.value() > 0.0 ? 1.0 : (a.value() < 0.0 ? -1.0 : 0.0);
  Jet2 r;
  Jet2::compose(r, a, std::abs(a.value()), sgn, 0.0);
  return r;
}

}  // namespace volex
