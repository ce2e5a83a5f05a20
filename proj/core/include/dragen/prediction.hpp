#pragma once

#include <map>
#include <string>
#include <vector>

#include "dragen/mean_matrix.hpp"
#include "dragen/prob_map.hpp"
#include "dragen/universe.hpp"

namespace dragen {

/// Terminal probabilities renormalized per family type; used to fill the
/// last generation level. Indexed by constructor id over the family (zero
/// for non-terminals).
struct StarProbs {
  std::vector<double> values;
  /// Types whose terminals all had probability zero and fell back to a
  /// uniform choice among terminals.
  std::vector<TypeId> uniform_fallback;

  double operator[](ConstructorId c) const { return values.at(c.value); }
};

/// Throws ModelError when a family type has no terminal constructor.
StarProbs star_probs(const Universe& u, const ProbMap& p);

struct ConstructorPrediction {
  double branching = 0.0;   // levels 0 .. n-1
  double last_level = 0.0;  // terminals filling level n
  double total = 0.0;
};

struct PredictionReport {
  unsigned size = 0;
  /// Indexed by family constructor id.
  std::vector<ConstructorPrediction> per_constructor;
  /// Expected count of every foreign constructor reachable through the CDG.
  std::map<ConstructorId, double> foreign;

  double total(ConstructorId c) const { return per_constructor.at(c.value).total; }
};

/// Expected constructor counts of a size-bounded generator of the given
/// size. Constructor-level figures are derived from the type-level process:
/// E[G_k^C].C = E[G_k^T].type(C) * p(C). Throws ModelError for size 0 or
/// when star_probs fails.
PredictionReport predict_constructors(const Universe& u, const ProbMap& p, unsigned size);

/// Same quantities computed directly with the constructor mean matrix.
PredictionReport predict_constructors_direct(const Universe& u, const ProbMap& p, unsigned size);

/// Expected counts of foreign constructors: the sum over CDG paths from each
/// family constructor of its expected count times edge multiplicities and
/// child probabilities. Foreign probabilities are taken from `p`.
std::map<ConstructorId, double> predict_foreign(const Universe& u, const ProbMap& p,
                                                const PredictionReport& report);

/// Least fixpoint of q_t = sum_C p(C) * prod_{family fields f} q_type(f),
/// iterated from zero until successive iterates differ by < 1e-12 (at most
/// 10^6 iterations). Type granularity over the family.
PopulationVector extinction_probability(const Universe& u, const ProbMap& p);

}  // namespace dragen
