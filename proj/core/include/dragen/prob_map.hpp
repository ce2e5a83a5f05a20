#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dragen/universe.hpp"

namespace dragen {

/// Generation probability for every constructor of a universe, indexed by
/// ConstructorId. Each type's constructors form one distribution.
class ProbMap {
 public:
  ProbMap() = default;
  explicit ProbMap(std::size_t constructor_count, double fill = 0.0)
      : values_(constructor_count, fill) {}

  double operator[](ConstructorId c) const { return values_.at(c.value); }
  double& operator[](ConstructorId c) { return values_.at(c.value); }

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const ProbMap&, const ProbMap&) = default;

 private:
  std::vector<double> values_;
};

inline constexpr double kProbabilityTolerance = 1e-9;

ProbMap uniform_probmap(const Universe& u);

/// Throws ModelError unless the map covers `u`, every entry lies in [0, 1]
/// and every type's constructors sum to 1 within `tolerance`. A type that
/// cannot be reached from the root through positive-probability
/// constructors may instead be all zero (an excluded type).
void validate_probmap(const Universe& u, const ProbMap& p,
                      double tolerance = kProbabilityTolerance);

/// Types reachable from the root through constructors with p > 0.
std::vector<bool> reachable_types(const Universe& u, const ProbMap& p);

/// Rescales the constructors of type `t` so they sum to 1. Leaves the type
/// untouched when its mass is zero.
void normalize_type(const Universe& u, TypeId t, ProbMap& p);

}  // namespace dragen
