#include "dragen/cost.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <string>

#include "dragen/error.hpp"
#include "dragen/prediction.hpp"

namespace dragen {

double chi_square(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) {
    throw ModelError("chi_square: observed and expected differ in length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw ModelError("chi_square: expected entries must be positive");
    const double diff = observed[i] - expected[i];
    sum += diff * diff / expected[i];
  }
  return sum;
}

double CostFunction::operator()(unsigned size, const ProbMap& p) const {
  const PredictionReport report = predict_constructors(*universe_, p, size);
  std::vector<double> observed;
  std::vector<double> expected;
  observed.reserve(targets_.size());
  expected.reserve(targets_.size());
  for (const Target& t : targets_) {
    observed.push_back(report.total(t.constructor));
    expected.push_back(t.weight * static_cast<double>(size));
  }
  return chi_square(observed, expected);
}

std::vector<ConstructorId> CostFunction::pinned() const {
  std::vector<ConstructorId> out;
  for (std::uint32_t c = 0; c < pinned_.size(); ++c) {
    if (pinned_[c]) out.push_back(ConstructorId{c});
  }
  return out;
}

ProbMap CostFunction::constrain(const ProbMap& p) const {
  ProbMap out = p;
  for (TypeId t : universe_->family()) {
    const auto& ctors = universe_->type(t).constructors;
    double mass = 0.0;
    std::size_t free = 0;
    for (ConstructorId c : ctors) {
      if (pinned_[c.value]) {
        out[c] = 0.0;
      } else {
        mass += out[c];
        ++free;
      }
    }
    if (free == 0) continue;
    for (ConstructorId c : ctors) {
      if (pinned_[c.value]) continue;
      out[c] = mass > 0.0 ? out[c] / mass : 1.0 / static_cast<double>(free);
    }
  }
  return out;
}

namespace {

std::string join_names(const Universe& u, std::span<const ConstructorId> ids) {
  std::string out;
  for (ConstructorId c : ids) {
    if (!out.empty()) out += ',';
    out += u.constructor(c).qualified;
  }
  return out;
}

std::string join_types(const Universe& u, std::span<const TypeId> ids) {
  std::string out;
  for (TypeId t : ids) {
    if (!out.empty()) out += ',';
    out += u.type(t).id;
  }
  return out;
}

void require_family(const Universe& u, ConstructorId c) {
  if (!u.in_family(c)) {
    throw ModelError("constructor '" + u.constructor(c).qualified +
                     "' is not part of the branching family");
  }
}

void require_family(const Universe& u, TypeId t) {
  if (!u.in_family(t)) {
    throw ModelError("type '" + u.type(t).id + "' is not part of the branching family");
  }
}

std::vector<CostFunction::Target> uniform_targets(const Universe& u, const std::vector<bool>& pinned) {
  std::vector<CostFunction::Target> targets;
  for (ConstructorId c : u.family_constructors()) {
    if (!pinned[c.value]) targets.push_back({c, 1.0});
  }
  return targets;
}

std::vector<bool> pins_for_types(const Universe& u, const std::set<TypeId>& excluded) {
  if (excluded.contains(u.root())) {
    throw ModelError("the generation root '" + u.root_type().id + "' cannot be excluded");
  }
  std::vector<bool> pinned(u.constructors().size(), false);
  for (TypeId t : excluded) {
    for (ConstructorId c : u.type(t).constructors) pinned[c.value] = true;
  }
  // Constructors with a field of an excluded type can never be generated.
  for (ConstructorId c : u.family_constructors()) {
    for (const FieldRef& f : u.constructor(c).fields) {
      if (f.kind == FieldRef::Kind::Family && excluded.contains(f.type)) pinned[c.value] = true;
    }
  }
  for (TypeId t : u.family()) {
    if (excluded.contains(t)) continue;
    const auto& ctors = u.type(t).constructors;
    if (std::all_of(ctors.begin(), ctors.end(), [&](ConstructorId c) { return pinned[c.value]; })) {
      throw ModelError("excluding " + join_types(u, std::vector<TypeId>(excluded.begin(), excluded.end())) +
                       " disconnects the family: every constructor of '" + u.type(t).id +
                       "' references an excluded type");
    }
  }
  return pinned;
}

}  // namespace

CostFunction make_cost(const Universe& u, std::vector<CostFunction::Target> targets,
                       std::vector<bool> pinned, std::string description) {
  // Types reachable from the root through constructors that remain enabled.
  std::vector<bool> reachable(u.family_size(), false);
  std::vector<TypeId> work{u.root()};
  reachable[u.root().value] = true;
  while (!work.empty()) {
    const TypeId t = work.back();
    work.pop_back();
    for (ConstructorId c : u.type(t).constructors) {
      if (pinned[c.value]) continue;
      for (const FieldRef& f : u.constructor(c).fields) {
        if (f.kind == FieldRef::Kind::Family && !reachable[f.type.value]) {
          reachable[f.type.value] = true;
          work.push_back(f.type);
        }
      }
    }
  }

  CostFunction cost;
  for (TypeId t : u.family()) {
    const auto& ctors = u.type(t).constructors;
    const bool all_pinned =
        std::all_of(ctors.begin(), ctors.end(), [&](ConstructorId c) { return pinned[c.value]; });
    if (all_pinned) {
      if (reachable[t.value]) {
        throw ModelError("constraints remove every constructor of type '" + u.type(t).id + "'");
      }
      cost.excluded_types_.push_back(t);
      continue;
    }
    if (!reachable[t.value]) continue;
    const auto terminals = terminal_constructors(u, t);
    if (std::all_of(terminals.begin(), terminals.end(),
                    [&](ConstructorId c) { return pinned[c.value]; })) {
      throw ModelError("constraints remove every terminal constructor of type '" + u.type(t).id +
                       "'; generation could not terminate");
    }
  }
  cost.universe_ = &u;
  cost.targets_ = std::move(targets);
  cost.pinned_ = std::move(pinned);
  cost.description_ = std::move(description);
  return cost;
}

CostFunction uniform_cost(const Universe& u) {
  std::vector<bool> pinned(u.constructors().size(), false);
  auto targets = uniform_targets(u, pinned);
  return make_cost(u, std::move(targets), std::move(pinned), "uniform");
}

CostFunction weighted_cost(const Universe& u, const WeightSpec& spec) {
  if (spec.weights.empty()) throw ModelError("weighted cost needs at least one constructor");
  std::vector<CostFunction::Target> targets;
  std::set<ConstructorId> seen;
  for (const auto& [c, w] : spec.weights) {
    if (c.value >= u.constructors().size()) throw ModelError("weighted cost: unknown constructor id");
    require_family(u, c);
    if (!(w > 0.0)) {
      throw ModelError("weight of '" + u.constructor(c).qualified + "' must be positive");
    }
    if (!seen.insert(c).second) {
      throw ModelError("constructor '" + u.constructor(c).qualified + "' is weighted twice");
    }
    targets.push_back({c, w});
  }
  std::sort(targets.begin(), targets.end(),
            [](const auto& a, const auto& b) { return a.constructor < b.constructor; });
  std::string description = "weighted(";
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (i > 0) description += ',';
    std::string weight = std::to_string(targets[i].weight);
    weight.erase(weight.find_last_not_of('0') + 1);
    if (weight.back() == '.') weight.pop_back();
    description += u.constructor(targets[i].constructor).qualified + "=" + weight;
  }
  description += ')';
  return make_cost(u, std::move(targets), std::vector<bool>(u.constructors().size(), false),
                   std::move(description));
}

CostFunction only_cost(const Universe& u, std::span<const ConstructorId> whitelist) {
  std::vector<bool> pinned(u.constructors().size(), false);
  for (ConstructorId c : u.family_constructors()) pinned[c.value] = true;
  for (ConstructorId c : whitelist) {
    require_family(u, c);
    pinned[c.value] = false;
  }
  auto targets = uniform_targets(u, pinned);
  return make_cost(u, std::move(targets), std::move(pinned), "only(" + join_names(u, whitelist) + ")");
}

CostFunction without_cost(const Universe& u, std::span<const ConstructorId> blacklist) {
  std::vector<bool> pinned(u.constructors().size(), false);
  for (ConstructorId c : blacklist) {
    require_family(u, c);
    pinned[c.value] = true;
  }
  auto targets = uniform_targets(u, pinned);
  return make_cost(u, std::move(targets), std::move(pinned),
                   "without(" + join_names(u, blacklist) + ")");
}

CostFunction only_types_cost(const Universe& u, std::span<const TypeId> types) {
  std::set<TypeId> excluded;
  for (TypeId t : u.family()) excluded.insert(t);
  for (TypeId t : types) {
    require_family(u, t);
    excluded.erase(t);
  }
  auto pinned = pins_for_types(u, excluded);
  auto targets = uniform_targets(u, pinned);
  return make_cost(u, std::move(targets), std::move(pinned), "onlyTypes(" + join_types(u, types) + ")");
}

CostFunction without_types_cost(const Universe& u, std::span<const TypeId> types) {
  std::set<TypeId> excluded;
  for (TypeId t : types) {
    require_family(u, t);
    excluded.insert(t);
  }
  auto pinned = pins_for_types(u, excluded);
  auto targets = uniform_targets(u, pinned);
  return make_cost(u, std::move(targets), std::move(pinned),
                   "withoutTypes(" + join_types(u, types) + ")");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_args(std::string_view body) {
  std::vector<std::string_view> out;
  if (trim(body).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = body.find(',', start);
    out.push_back(trim(body.substr(start, comma == std::string_view::npos ? body.size() - start
                                                                          : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CostFunction parse_cost(const Universe& u, std::string_view text) {
  const std::string_view spec = trim(text);
  const std::size_t open = spec.find('(');
  const std::string_view name = trim(spec.substr(0, open));
  std::vector<std::string_view> args;
  if (open != std::string_view::npos) {
    if (spec.back() != ')') throw ParseError("cost function: missing ')'", 1, spec.size());
    args = split_args(spec.substr(open + 1, spec.size() - open - 2));
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].empty()) throw ParseError("cost function: empty argument", 1, open + 2);
    }
  }

  auto constructors = [&] {
    std::vector<ConstructorId> ids;
    for (std::string_view a : args) ids.push_back(u.constructor_by_name(a));
    return ids;
  };
  auto types = [&] {
    std::vector<TypeId> ids;
    for (std::string_view a : args) ids.push_back(u.type_by_name(a));
    return ids;
  };

  if (name == "uniform") {
    if (!args.empty()) throw ParseError("cost function: uniform takes no arguments", 1, open + 1);
    return uniform_cost(u);
  }
  if (name == "weighted") {
    WeightSpec weights;
    for (std::string_view a : args) {
      const std::size_t eq = a.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("cost function: expected Constructor=weight, got '" + std::string(a) + "'", 1,
                         open + 1);
      }
      const std::string_view number = trim(a.substr(eq + 1));
      double w = 0.0;
      const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), w);
      if (ec != std::errc() || ptr != number.data() + number.size()) {
        throw ParseError("cost function: invalid weight '" + std::string(number) + "'", 1, open + 1);
      }
      weights.weights.emplace_back(u.constructor_by_name(trim(a.substr(0, eq))), w);
    }
    return weighted_cost(u, weights);
  }
  if (name == "only") return only_cost(u, constructors());
  if (name == "without") return without_cost(u, constructors());
  if (name == "onlyTypes") return only_types_cost(u, types());
  if (name == "withoutTypes") return without_types_cost(u, types());
  throw ParseError("unknown cost function '" + std::string(name) + "'", 1, 1);
}

}  // namespace dragen
