#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dragen/prob_map.hpp"
#include "dragen/universe.hpp"

namespace dragen {

/// Pearson's statistic sum (observed - expected)^2 / expected.
/// Throws ModelError on length mismatch or a non-positive expected entry.
double chi_square(std::span<const double> observed, std::span<const double> expected);

/// Target proportions; each weight is multiplied by the generation size.
struct WeightSpec {
  std::vector<std::pair<ConstructorId, double>> weights;
};

/// Scores how far the predicted constructor distribution of a ProbMap is
/// from a target distribution, with some constructors optionally pinned to
/// probability zero. The universe must outlive the cost function.
class CostFunction {
 public:
  /// Chi-square of predicted totals against the targets. Pure.
  double operator()(unsigned size, const ProbMap& p) const;

  bool is_pinned(ConstructorId c) const { return pinned_.at(c.value); }
  std::vector<ConstructorId> pinned() const;

  /// Zeroes pinned entries and renormalizes the remaining constructors of
  /// each family type. Fully pinned types stay all-zero.
  ProbMap constrain(const ProbMap& p) const;

  /// Family types whose constructors are all pinned; they are unreachable
  /// under any constrained ProbMap.
  const std::vector<TypeId>& excluded_types() const { return excluded_types_; }

  const Universe& universe() const { return *universe_; }
  const std::string& description() const { return description_; }

  struct Target {
    ConstructorId constructor;
    double weight;
  };
  const std::vector<Target>& targets() const { return targets_; }

 private:
  friend CostFunction make_cost(const Universe&, std::vector<Target>, std::vector<bool>, std::string);

  const Universe* universe_ = nullptr;
  std::vector<Target> targets_;
  std::vector<bool> pinned_;
  std::vector<TypeId> excluded_types_;
  std::string description_;
};

/// Every family constructor targeted at `size`.
CostFunction uniform_cost(const Universe& u);

/// Listed constructors targeted at weight * size; unlisted ones are free.
CostFunction weighted_cost(const Universe& u, const WeightSpec& spec);

/// Constructors outside the whitelist are pinned to zero; the rest follow
/// the uniform target.
CostFunction only_cost(const Universe& u, std::span<const ConstructorId> whitelist);
CostFunction without_cost(const Universe& u, std::span<const ConstructorId> blacklist);

/// Type-level exclusion. Constructors referencing an excluded type are
/// pinned too. The root may not be excluded.
CostFunction only_types_cost(const Universe& u, std::span<const TypeId> types);
CostFunction without_types_cost(const Universe& u, std::span<const TypeId> types);

/// Parses the command-line cost syntax:
///   uniform | weighted(C=w, ...) | only(C, ...) | without(C, ...)
///   | onlyTypes(T, ...) | withoutTypes(T, ...)
/// Throws ParseError on malformed text and ModelError on unknown names.
CostFunction parse_cost(const Universe& u, std::string_view text);

}  // namespace dragen
