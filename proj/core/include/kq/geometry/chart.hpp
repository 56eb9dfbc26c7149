#pragma once

#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kq/jets/scalar_field.hpp"

namespace kq {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Coordinate chart: open coordinate intervals plus strict positivity
/// constraints (e.g. X(p) > 0), and a finite box to draw samples from.
class Chart {
 public:
  static constexpr double kBoundaryMargin = 1e-8;

  Chart() = default;
  Chart(std::vector<std::string> labels, std::vector<Interval> domain);

  int dim() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Interval>& domain() const { return domain_; }
  const std::vector<Interval>& sampling_box() const { return box_; }
  const std::vector<ScalarField>& constraints() const { return constraints_; }

  /// Sampling box defaults to the domain; it must be finite to sample.
  Chart& set_sampling_box(std::vector<Interval> box);
  /// Adds the requirement f(x) > 0.
  Chart& add_constraint(ScalarField f);

  /// True when x is inside the domain and at least kBoundaryMargin away from
  /// every boundary.
  bool contains(std::span<const double> x) const;
  /// Throws DomainError describing the first violated condition.
  void require(std::span<const double> x) const;

  /// Uniform draw from the sampling box shrunk by 1e-3 of each width,
  /// rejecting points that violate a constraint.
  std::vector<double> sample(std::mt19937_64& rng) const;
  std::vector<std::vector<double>> sample(std::mt19937_64& rng, int count) const;

  nlohmann::json to_json() const;
  static Chart from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> labels_;
  std::vector<Interval> domain_;
  std::vector<Interval> box_;
  std::vector<ScalarField> constraints_;
};

}  // namespace kq
