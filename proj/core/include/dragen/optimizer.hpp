#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "dragen/cost.hpp"
#include "dragen/gen_spec.hpp"
#include "dragen/prob_map.hpp"
#include "dragen/universe.hpp"

namespace dragen {

struct SearchConfig {
  double delta = 0.01;     // probability step
  double epsilon = 1e-6;   // minimum cost improvement per step
  std::size_t max_steps = 10'000;
  double quantum = 1e-6;   // rounding grid of the visited set

  /// Throws ModelError when a field is outside its valid range.
  void validate() const;
};

enum class SearchOutcome { LocalMinimum, EpsilonStop, StepCap };

std::string_view to_string(SearchOutcome outcome);

struct SearchStep {
  ProbMap probs;
  double cost = 0.0;
};

struct SearchTrace {
  /// The initial map followed by every accepted move.
  std::vector<SearchStep> steps;
  SearchOutcome outcome = SearchOutcome::LocalMinimum;
  std::size_t evaluations = 0;

  std::size_t moves() const { return steps.empty() ? 0 : steps.size() - 1; }
};

struct SearchResult {
  ProbMap best;
  SearchTrace trace;
};

/// Immediate neighbourhood of `p`: for each unpinned family constructor, in
/// lexicographic order of qualified name, its probability moved by +delta
/// and by -delta (clamped at 0), each followed by renormalizing that type's
/// unpinned constructors. Candidates equal to `p`, or to an earlier
/// candidate, on the `quantum` grid are dropped.
std::vector<ProbMap> neighbors(const Universe& u, const ProbMap& p, double delta,
                               const std::vector<bool>& pinned, double quantum = 1e-6);

/// Greedy best-improvement local search. Deterministic; never evaluates the
/// same quantized ProbMap twice. `init` must already satisfy the cost's
/// pinned constraints.
SearchResult optimize(const CostFunction& cost, unsigned size, const ProbMap& init,
                      const SearchConfig& config = {});

/// Applies the cost's constraints to a uniform map, optimizes it and packages
/// the result as a dragen-strategy GenSpec.
GenSpec derive_generator(const Universe& u, unsigned size, const CostFunction& cost,
                         const SearchConfig& config = {}, SearchTrace* trace = nullptr);

}  // namespace dragen
