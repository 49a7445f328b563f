#include "volex/chart.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <random>

#include "volex/errors.hpp"

namespace volex {

namespace {

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

bool reserved_identifier(std::string_view name) {
  static constexpr std::array<std::string_view, 11> kReserved = {
      "sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh", "abs", "pi"};
  return std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end();
}

Chart::Chart(Signature sig, std::vector<std::string> names, std::vector<CoordDomain> domains)
    : sig_(sig), names_(std::move(names)), domains_(std::move(domains)) {
  if (names_.size() < 2) throw Error("chart dimension must be at least 2");
  if (names_.size() != domains_.size())
    throw Error("chart: one domain per coordinate required");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!valid_identifier(names_[i]))
      throw Error("invalid coordinate name '" + names_[i] + "'");
    if (reserved_identifier(names_[i]))
      throw Error("coordinate name '" + names_[i] + "' is reserved");
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j])
        throw Error("duplicate coordinate name '" + names_[i] + "'");
    const auto& d = domains_[i];
    if (d.period && d.bounds)
      throw Error("coordinate '" + names_[i] + "' cannot be both periodic and bounded");
    if (d.period && *d.period <= 0.0)
      throw Error("period of '" + names_[i] + "' must be positive");
    if (d.bounds && !(d.bounds->first < d.bounds->second))
      throw Error("bounds of '" + names_[i] + "' must satisfy lo < hi");
  }
}

int Chart::coord_index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

bool Chart::compact() const {
  for (int i = 0; i < dim(); ++i)
    if (unbounded(i)) return false;
  return true;
}

bool Chart::contains(std::span<const double> p) const {
  for (int i = 0; i < dim(); ++i) {
    if (!bounded(i)) continue;
    const auto [lo, hi] = bounds(i);
    if (p[i] < lo || p[i] > hi) return false;
  }
  return true;
}

void Chart::wrap(std::span<double> p) const {
  for (int i = 0; i < dim(); ++i) {
    if (!periodic(i)) continue;
    const double per = period(i);
    p[i] = std::fmod(p[i], per);
    if (p[i] < 0.0) p[i] += per;
  }
}

std::vector<std::vector<double>> sample_domain_points(
    const Chart& chart, int count, unsigned long long seed,
    const std::vector<std::pair<double, double>>* sub_bounds) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<std::vector<double>> pts(count, std::vector<double>(chart.dim()));
  for (auto& p : pts)
    for (int a = 0; a < chart.dim(); ++a) {
      const double u = uni(rng);
      if (sub_bounds) {
        const auto [lo, hi] = (*sub_bounds)[a];
        p[a] = lo + u * (hi - lo);
      } else if (chart.periodic(a)) {
        p[a] = u * chart.period(a);
      } else if (chart.bounded(a)) {
        const auto [lo, hi] = chart.bounds(a);
        p[a] = lo + u * (hi - lo);
      } else {
        p[a] = -2.0 + 4.0 * u;
      }
    }
  return pts;
}

}  // namespace volex
