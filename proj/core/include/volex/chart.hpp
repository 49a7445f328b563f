#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace volex {

enum class Signature { Riemannian, Lorentzian };

/// Domain of one coordinate: exactly one of periodic (with period > 0),
/// bounded (closed interval), or unbounded.
struct CoordDomain {
  std::optional<double> period;
  std::optional<std::pair<double, double>> bounds;

  static CoordDomain periodic(double p) { return {p, std::nullopt}; }
  static CoordDomain bounded(double lo, double hi) {
    return {std::nullopt, std::make_pair(lo, hi)};
  }
  static CoordDomain unbounded() { return {std::nullopt, std::nullopt}; }
};

/// A coordinate chart: dimension, metric signature, coordinate names and
/// per-coordinate domains. Charts are immutable after construction.
class Chart {
 public:
  Chart(Signature sig, std::vector<std::string> names, std::vector<CoordDomain> domains);

  int dim() const { return static_cast<int>(names_.size()); }
  Signature signature() const { return sig_; }
  bool lorentzian() const { return sig_ == Signature::Lorentzian; }

  const std::string& name(int i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  /// Index of a coordinate name, or -1 when not declared.
  int coord_index(std::string_view name) const;

  bool periodic(int i) const { return domains_[i].period.has_value(); }
  double period(int i) const { return *domains_[i].period; }
  bool bounded(int i) const { return domains_[i].bounds.has_value(); }
  std::pair<double, double> bounds(int i) const { return *domains_[i].bounds; }
  bool unbounded(int i) const { return !periodic(i) && !bounded(i); }

  /// Every coordinate periodic or bounded.
  bool compact() const;
  /// True when p respects all bounded coordinate intervals (periodic and
  /// unbounded coordinates are always accepted).
  bool contains(std::span<const double> p) const;
  /// Wrap periodic coordinates into [0, period).
  void wrap(std::span<double> p) const;

 private:
  Signature sig_;
  std::vector<std::string> names_;
  std::vector<CoordDomain> domains_;
};

/// Names reserved by the expression DSL (functions and constants);
/// charts may not declare coordinates with these names.
bool reserved_identifier(std::string_view name);

/// Deterministic uniform sample points across the chart domain (periodic
/// axes in [0, period), bounded axes in their interval, unbounded axes in
/// [-2, 2]); optional per-axis sub-bounds override the domain.
std::vector<std::vector<double>> sample_domain_points(
    const Chart& chart, int count, unsigned long long seed,
    const std::vector<std::pair<double, double>>* sub_bounds = nullptr);

}  // namespace volex
