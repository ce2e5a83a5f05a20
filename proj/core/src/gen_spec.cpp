#include "dragen/gen_spec.hpp"

#include <string>
#include <utility>

#include "dragen/error.hpp"

namespace dragen {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Dragen: return "dragen";
    case Strategy::Megadeth: return "megadeth";
    case Strategy::Derive: return "derive";
  }
  return "dragen";
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "dragen") return Strategy::Dragen;
  if (name == "megadeth") return Strategy::Megadeth;
  if (name == "derive") return Strategy::Derive;
  throw ModelError("unknown strategy '" + std::string(name) + "' (expected dragen, megadeth or derive)");
}

GenSpec make_spec(const Universe& u, unsigned size, Strategy strategy, ProbMap p, std::string source) {
  validate_probmap(u, p);
  GenSpec spec;
  spec.root = u.root_type().id;
  spec.size = size;
  spec.strategy = strategy;
  spec.universe_hash = u.hash();
  spec.source = std::move(source);
  if (strategy == Strategy::Dragen) {
    spec.star = star_probs(u, p);
  } else {
    // Only the size-bounded strategies need terminals at every family type.
    try {
      spec.star = star_probs(u, p);
    } catch (const ModelError&) {
      spec.star = StarProbs{};
    }
  }
  spec.probabilities = std::move(p);
  return spec;
}

GenSpec uniform_spec(const Universe& u, unsigned size, Strategy strategy, std::string source) {
  return make_spec(u, size, strategy, uniform_probmap(u), std::move(source));
}

}  // namespace dragen
