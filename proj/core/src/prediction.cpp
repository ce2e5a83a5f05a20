#include "dragen/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dragen/cdg.hpp"
#include "dragen/error.hpp"

namespace dragen {

namespace {

constexpr double kExtinctionTolerance = 1e-12;
constexpr unsigned kExtinctionMaxIterations = 1'000'000;

void require_size(unsigned size) {
  if (size == 0) throw ModelError("generation size must be at least 1");
}

// Placeholders of each family type created at level n by parents at level
// n-1: (G_{n-1}^T * M_T).
void fill_terminals(const Universe& u, const StarProbs& star, std::span<const double> placeholders,
                    PredictionReport& report) {
  for (std::uint32_t c = 0; c < u.family_constructor_count(); ++c) {
    const ConstructorId id{c};
    auto& entry = report.per_constructor[c];
    entry.last_level = star[id] * placeholders[u.constructor(id).owner.value];
    entry.total = entry.branching + entry.last_level;
  }
}

}  // namespace

StarProbs star_probs(const Universe& u, const ProbMap& p) {
  StarProbs star;
  star.values.assign(u.family_constructor_count(), 0.0);
  for (TypeId t : u.family()) {
    const std::vector<ConstructorId> terminals = terminal_constructors(u, t);
    if (terminals.empty()) {
      throw ModelError("type '" + u.type(t).id +
                       "' has no terminal constructor; generation cannot terminate");
    }
    double mass = 0.0;
    for (ConstructorId c : terminals) mass += p[c];
    if (mass > 0.0) {
      for (ConstructorId c : terminals) star.values[c.value] = p[c] / mass;
    } else {
      star.uniform_fallback.push_back(t);
      for (ConstructorId c : terminals) {
        star.values[c.value] = 1.0 / static_cast<double>(terminals.size());
      }
    }
  }
  return star;
}

PredictionReport predict_constructors(const Universe& u, const ProbMap& p, unsigned size) {
  require_size(size);
  const StarProbs star = star_probs(u, p);
  const MeanMatrix m = mean_matrix_types(u, p);

  // Type-level populations up to level n-1, then placeholders at level n.
  const PopulationVector g0 = initial_population(u, p, Granularity::Type);
  std::vector<double> generation = g0.values;
  std::vector<double> population(generation.size(), 0.0);
  for (unsigned k = 0; k < size; ++k) {
    if (k > 0) generation = left_multiply(generation, m.entries);
    for (std::size_t i = 0; i < generation.size(); ++i) population[i] += generation[i];
  }
  const std::vector<double> placeholders = left_multiply(generation, m.entries);

  PredictionReport report;
  report.size = size;
  report.per_constructor.resize(u.family_constructor_count());
  for (std::uint32_t c = 0; c < u.family_constructor_count(); ++c) {
    const ConstructorId id{c};
    report.per_constructor[c].branching = population[u.constructor(id).owner.value] * p[id];
  }
  fill_terminals(u, star, placeholders, report);
  report.foreign = predict_foreign(u, p, report);
  return report;
}

PredictionReport predict_constructors_direct(const Universe& u, const ProbMap& p, unsigned size) {
  require_size(size);
  const StarProbs star = star_probs(u, p);
  const MeanMatrix m = mean_matrix_constructors(u, p);
  const PopulationVector g0 = initial_population(u, p, Granularity::Constructor);
  const PopulationVector population = expected_population(g0, m, size - 1);
  const PopulationVector last = expected_generation(g0, m, size - 1);

  std::vector<double> placeholders(u.family_size(), 0.0);
  for (std::uint32_t d = 0; d < u.family_constructor_count(); ++d) {
    for (TypeId t : u.family()) {
      placeholders[t.value] += last.values[d] * branching_factor(u, ConstructorId{d}, t);
    }
  }

  PredictionReport report;
  report.size = size;
  report.per_constructor.resize(u.family_constructor_count());
  for (std::uint32_t c = 0; c < u.family_constructor_count(); ++c) {
    report.per_constructor[c].branching = population.values[c];
  }
  fill_terminals(u, star, placeholders, report);
  report.foreign = predict_foreign(u, p, report);
  return report;
}

std::map<ConstructorId, double> predict_foreign(const Universe& u, const ProbMap& p,
                                                const PredictionReport& report) {
  std::map<ConstructorId, double> out;
  const std::vector<TypeId> order = foreign_topological_order(u);
  if (order.empty()) return out;

  // Expected number of holes of each foreign type, propagated top-down; this
  // sums the path products of the CDG without enumerating paths.
  std::vector<double> holes(u.types().size(), 0.0);
  for (std::uint32_t c = 0; c < u.family_constructor_count(); ++c) {
    const double count = report.per_constructor.at(c).total;
    for (const FieldRef& f : u.constructor(ConstructorId{c}).fields) {
      if (f.kind == FieldRef::Kind::Foreign) holes[f.type.value] += count;
    }
  }
  for (TypeId t : order) {
    for (ConstructorId c : u.type(t).constructors) {
      const double count = holes[t.value] * p[c];
      out[c] = count;
      for (const FieldRef& f : u.constructor(c).fields) {
        if (f.kind == FieldRef::Kind::Foreign) holes[f.type.value] += count;
      }
    }
  }
  return out;
}

PopulationVector extinction_probability(const Universe& u, const ProbMap& p) {
  PopulationVector q{Granularity::Type, {}, std::vector<double>(u.family_size(), 0.0)};
  for (std::uint32_t t = 0; t < u.family_size(); ++t) q.index.push_back(t);

  std::vector<double> next(q.values.size());
  for (unsigned iter = 0; iter < kExtinctionMaxIterations; ++iter) {
    double delta = 0.0;
    for (std::uint32_t t = 0; t < u.family_size(); ++t) {
      double value = 0.0;
      for (ConstructorId c : u.type(TypeId{t}).constructors) {
        double term = p[c];
        for (const FieldRef& f : u.constructor(c).fields) {
          if (f.kind == FieldRef::Kind::Family) term *= q.values[f.type.value];
        }
        value += term;
      }
      next[t] = std::min(value, 1.0);
      delta = std::max(delta, std::abs(next[t] - q.values[t]));
    }
    q.values.swap(next);
    if (delta < kExtinctionTolerance) break;
  }
  return q;
}

}  // namespace dragen
