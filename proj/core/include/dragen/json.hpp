#pragma once

#include <nlohmann/json.hpp>

#include "dragen/gen_spec.hpp"
#include "dragen/mean_matrix.hpp"
#include "dragen/prediction.hpp"
#include "dragen/prob_map.hpp"
#include "dragen/sampler.hpp"
#include "dragen/universe.hpp"
#include "dragen/value.hpp"

namespace dragen {

using Json = nlohmann::ordered_json;

/// `{"probabilities": {"Tree.Node": 0.25, ...}}`, keyed by qualified name.
Json to_json(const Universe& u, const ProbMap& p);

/// Reads a ProbMap document. Keys may be qualified or unambiguous bare
/// names. A type with no listed constructor gets a uniform distribution; a
/// listed type's unlisted constructors get 0. The result is validated.
/// Throws ModelError.
ProbMap probmap_from_json(const Universe& u, const Json& j);

/// `{"size", "expected", "lastLevel", "foreign", "extinction"}`.
Json to_json(const Universe& u, const PredictionReport& report, const PopulationVector& extinction);

/// `{"root", "size", "strategy", "probabilities", "starProbabilities",
/// "universeHash", "source"}`; "source" is omitted when empty.
Json to_json(const Universe& u, const GenSpec& spec);

/// Reads a spec written by to_json. The universe must be the one the spec
/// was built for (checked through the hash). Throws ModelError.
GenSpec spec_from_json(const Universe& u, const Json& j);

/// `{"constructor": "Tree.Node", "fields": [...]}`; Int and Double atoms
/// are numbers, Char a one-character string, Unit null.
Json to_json(const Universe& u, const Value& v);

/// `{"samples", "meanCounts", "stdErr", "sizeHistogram", "budgetExhausted"}`.
Json to_json(const Universe& u, const SampleStats& stats);

}  // namespace dragen
