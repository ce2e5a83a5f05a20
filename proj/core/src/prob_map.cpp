#include "dragen/prob_map.hpp"

#include <cmath>
#include <string>

#include "dragen/error.hpp"

namespace dragen {

ProbMap uniform_probmap(const Universe& u) {
  ProbMap p(u.constructors().size());
  for (const TypeInfo& t : u.types()) {
    const double share = 1.0 / static_cast<double>(t.constructors.size());
    for (ConstructorId c : t.constructors) p[c] = share;
  }
  return p;
}

void validate_probmap(const Universe& u, const ProbMap& p, double tolerance) {
  if (p.size() != u.constructors().size()) {
    throw ModelError("probability map has " + std::to_string(p.size()) + " entries, universe has " +
                     std::to_string(u.constructors().size()) + " constructors");
  }
  for (std::uint32_t c = 0; c < p.size(); ++c) {
    const double v = p[ConstructorId{c}];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0 + tolerance) {
      throw ModelError("probability of '" + u.constructor(ConstructorId{c}).qualified +
                       "' is out of range: " + std::to_string(v));
    }
  }
  const std::vector<bool> live = reachable_types(u, p);
  for (std::uint32_t t = 0; t < u.types().size(); ++t) {
    const TypeInfo& info = u.type(TypeId{t});
    double sum = 0.0;
    for (ConstructorId c : info.constructors) sum += p[c];
    if (sum == 0.0 && !live[t]) continue;
    if (std::abs(sum - 1.0) > tolerance) {
      throw ModelError("probabilities of type '" + info.id + "' sum to " + std::to_string(sum) +
                       ", expected 1");
    }
  }
}

std::vector<bool> reachable_types(const Universe& u, const ProbMap& p) {
  std::vector<bool> live(u.types().size(), false);
  std::vector<TypeId> work{u.root()};
  live[u.root().value] = true;
  while (!work.empty()) {
    const TypeId t = work.back();
    work.pop_back();
    for (ConstructorId c : u.type(t).constructors) {
      if (!(p[c] > 0.0)) continue;
      for (const FieldRef& f : u.constructor(c).fields) {
        if (f.kind != FieldRef::Kind::Ground && !live[f.type.value]) {
          live[f.type.value] = true;
          work.push_back(f.type);
        }
      }
    }
  }
  return live;
}

void normalize_type(const Universe& u, TypeId t, ProbMap& p) {
  double sum = 0.0;
  for (ConstructorId c : u.type(t).constructors) sum += p[c];
  if (sum <= 0.0) return;
  for (ConstructorId c : u.type(t).constructors) p[c] /= sum;
}

}  // namespace dragen
