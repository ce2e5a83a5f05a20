#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dragen/prediction.hpp"
#include "dragen/prob_map.hpp"
#include "dragen/universe.hpp"

namespace dragen {

enum class Strategy { Dragen, Megadeth, Derive };

std::string_view to_string(Strategy strategy);
/// Throws ModelError for an unknown name.
Strategy strategy_from_string(std::string_view name);

/// A tuned generator: everything the sampler needs besides the universe.
struct GenSpec {
  std::string root;
  unsigned size = 0;
  Strategy strategy = Strategy::Dragen;
  ProbMap probabilities;
  StarProbs star;
  std::string universe_hash;
  /// Declaration source, embedded so spec files are self-contained. May be
  /// empty when the caller supplies the universe separately.
  std::string source;
};

/// A uniform spec; used for megadeth/derive runs and untuned generators.
GenSpec uniform_spec(const Universe& u, unsigned size, Strategy strategy, std::string source = {});

/// Builds a spec from an explicit ProbMap (validated).
GenSpec make_spec(const Universe& u, unsigned size, Strategy strategy, ProbMap p,
                  std::string source = {});

}  // namespace dragen
