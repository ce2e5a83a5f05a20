#include "dragen/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>

#include "dragen/error.hpp"

namespace dragen {

namespace {

using Key = std::vector<std::int64_t>;

Key quantize(const Universe& u, const ProbMap& p, double quantum) {
  Key key(u.family_constructor_count());
  for (std::uint32_t c = 0; c < key.size(); ++c) {
    key[c] = std::llround(p[ConstructorId{c}] / quantum);
  }
  return key;
}

std::vector<ConstructorId> lexicographic_family(const Universe& u) {
  std::vector<ConstructorId> order = u.family_constructors();
  std::sort(order.begin(), order.end(), [&u](ConstructorId a, ConstructorId b) {
    return u.constructor(a).qualified < u.constructor(b).qualified;
  });
  return order;
}

void renormalize_unpinned(const Universe& u, TypeId t, const std::vector<bool>& pinned, ProbMap& p) {
  double mass = 0.0;
  for (ConstructorId c : u.type(t).constructors) {
    if (!pinned[c.value]) mass += p[c];
  }
  if (mass <= 0.0) return;
  for (ConstructorId c : u.type(t).constructors) {
    if (!pinned[c.value]) p[c] /= mass;
  }
}

}  // namespace

void SearchConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ModelError("search delta must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ModelError("search epsilon must be positive");
  if (max_steps < 1) throw ModelError("search step cap must be at least 1");
  if (!(quantum > 0.0)) throw ModelError("search quantum must be positive");
}

std::string_view to_string(SearchOutcome outcome) {
  switch (outcome) {
    case SearchOutcome::LocalMinimum: return "LocalMinimum";
    case SearchOutcome::EpsilonStop: return "EpsilonStop";
    case SearchOutcome::StepCap: return "StepCap";
  }
  return "LocalMinimum";
}

std::vector<ProbMap> neighbors(const Universe& u, const ProbMap& p, double delta,
                               const std::vector<bool>& pinned, double quantum) {
  std::vector<ProbMap> out;
  std::set<Key> seen{quantize(u, p, quantum)};
  for (ConstructorId c : lexicographic_family(u)) {
    if (pinned.at(c.value)) continue;
    for (const double step : {delta, -delta}) {
      ProbMap candidate = p;
      candidate[c] = std::max(0.0, p[c] + step);
      renormalize_unpinned(u, u.constructor(c).owner, pinned, candidate);
      if (seen.insert(quantize(u, candidate, quantum)).second) out.push_back(std::move(candidate));
    }
  }
  return out;
}

SearchResult optimize(const CostFunction& cost, unsigned size, const ProbMap& init,
                      const SearchConfig& config) {
  config.validate();
  const Universe& u = cost.universe();
  std::vector<bool> pinned(u.constructors().size(), false);
  for (ConstructorId c : cost.pinned()) pinned[c.value] = true;

  SearchResult result;
  SearchTrace& trace = result.trace;
  std::set<Key> visited{quantize(u, init, config.quantum)};
  ProbMap focus = init;
  double focus_cost = cost(size, focus);
  trace.evaluations = 1;
  trace.steps.push_back({focus, focus_cost});

  while (true) {
    if (trace.moves() >= config.max_steps) {
      trace.outcome = SearchOutcome::StepCap;
      break;
    }
    std::vector<ProbMap> fresh;
    for (ProbMap& candidate : neighbors(u, focus, config.delta, pinned, config.quantum)) {
      if (visited.insert(quantize(u, candidate, config.quantum)).second) {
        fresh.push_back(std::move(candidate));
      }
    }
    if (fresh.empty()) {
      trace.outcome = SearchOutcome::LocalMinimum;
      break;
    }
    std::size_t best = 0;
    double best_cost = 0.0;
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      const double value = cost(size, fresh[i]);
      ++trace.evaluations;
      if (i == 0 || value < best_cost) {
        best = i;
        best_cost = value;
      }
    }
    if (!(best_cost < focus_cost)) {
      trace.outcome = SearchOutcome::LocalMinimum;
      break;
    }
    const double gain = focus_cost - best_cost;
    focus = std::move(fresh[best]);
    focus_cost = best_cost;
    trace.steps.push_back({focus, focus_cost});
    if (gain <= config.epsilon) {
      trace.outcome = SearchOutcome::EpsilonStop;
      break;
    }
  }
  result.best = focus;
  return result;
}

GenSpec derive_generator(const Universe& u, unsigned size, const CostFunction& cost,
                         const SearchConfig& config, SearchTrace* trace) {
  if (&cost.universe() != &u) throw ModelError("cost function was built for a different universe");
  const ProbMap init = cost.constrain(uniform_probmap(u));
  SearchResult result = optimize(cost, size, init, config);
  if (trace != nullptr) *trace = std::move(result.trace);
  return make_spec(u, size, Strategy::Dragen, std::move(result.best));
}

}  // namespace dragen
