#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dragen/gen_spec.hpp"
#include "dragen/rng.hpp"
#include "dragen/universe.hpp"
#include "dragen/value.hpp"

namespace dragen {

inline constexpr std::uint64_t kDefaultDeriveBudget = 1'000'000;

/// Draws values of a universe's root type under one of three strategies:
///
///  - dragen: at remaining size k > 0 pick any constructor of the current
///    type with the spec's ProbMap, at size 0 pick a terminal with the
///    starred probabilities; family children get size k - 1.
///  - megadeth: uniform choice among all constructors (terminals only at
///    size 0); family children get floor(k / 2).
///  - derive: uniform choice with no size bound; gives up after `budget`
///    constructors.
///
/// Foreign types use the spec's probabilities under dragen and uniform
/// choice otherwise. Ground atoms: Int uniform in [-100, 100], Double in
/// [0, 1), Char printable ASCII, Unit.
class Sampler {
 public:
  /// Throws ModelError when the spec does not fit the universe, or when a
  /// size-bounded strategy meets a family type without terminals.
  Sampler(const Universe& u, const GenSpec& spec, std::uint64_t derive_budget = kDefaultDeriveBudget);

  /// std::nullopt only for a derive run that exhausted its budget.
  std::optional<Value> draw(Rng& rng) const;

  /// Same draw as `draw(rng)` but only adds constructor counts into
  /// `counts` (indexed by id); returns the number of constructors, or
  /// std::nullopt when a derive run exhausted its budget. `counts` may be
  /// partially filled in that case.
  std::optional<std::uint64_t> draw_counts(Rng& rng, std::span<std::uint64_t> counts) const;

  Strategy strategy() const { return strategy_; }

 private:
  struct Choice {
    std::vector<ConstructorId> constructors;
    std::vector<double> cumulative;  // empty means uniform
  };

  ConstructorId pick(const Choice& choice, Rng& rng) const;
  std::optional<Value> draw_bounded(Rng& rng) const;
  std::optional<Value> draw_unbounded(Rng& rng) const;

  const Universe* universe_;
  Strategy strategy_;
  unsigned size_;
  std::uint64_t budget_;
  std::vector<Choice> any_;       // per type
  std::vector<Choice> terminal_;  // per family type
  // Derive counting: each constructor's fields in push order, encoded as a
  // type id or kGroundSlot | GroundKind.
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint32_t> slot_offsets_;  // per constructor, plus one
};

Value sample_dragen(const Universe& u, const GenSpec& spec, Rng& rng);
Value sample_megadeth(const Universe& u, unsigned size, Rng& rng);
std::optional<Value> sample_derive(const Universe& u, std::uint64_t budget, Rng& rng);

struct SampleStats {
  std::size_t samples = 0;
  std::vector<double> mean;     // per constructor id, over completed samples
  std::vector<double> std_err;  // standard error of each mean
  std::map<std::uint64_t, std::uint64_t> size_histogram;  // constructors per value -> frequency
  std::size_t budget_exhausted = 0;

  std::size_t completed() const { return samples - budget_exhausted; }
};

struct SampleOptions {
  std::uint64_t derive_budget = kDefaultDeriveBudget;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Runs the spec's strategy `samples` times; sample i uses
/// Rng::for_stream(seed, i). Aggregation is independent of thread count.
SampleStats empirical_stats(const Universe& u, const GenSpec& spec, std::size_t samples,
                            std::uint64_t seed, const SampleOptions& options = {});

}  // namespace dragen
