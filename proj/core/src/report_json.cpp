#include "dragen/json.hpp"

#include <string>
#include <vector>

#include "dragen/error.hpp"

namespace dragen {

namespace {

Json probabilities_object(const Universe& u, std::span<const double> values) {
  Json out = Json::object();
  for (std::size_t i = 0; i < values.size(); ++i) out[u.constructors()[i].qualified] = values[i];
  return out;
}

double read_number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ModelError(what + " must be a number");
  return j.get<double>();
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ModelError(std::string("missing field '") + key + "'");
  return j.at(key);
}

ProbMap read_probabilities(const Universe& u, const Json& entries) {
  if (!entries.is_object()) throw ModelError("'probabilities' must be an object");
  ProbMap p(u.constructors().size());
  std::vector<bool> listed(u.types().size(), false);
  std::vector<bool> seen(u.constructors().size(), false);
  for (const auto& [name, value] : entries.items()) {
    const ConstructorId c = u.constructor_by_name(name);
    if (seen[c.value]) throw ModelError("constructor '" + name + "' listed twice");
    seen[c.value] = true;
    p[c] = read_number(value, "probability of '" + name + "'");
    listed[u.constructor(c).owner.value] = true;
  }
  for (std::uint32_t t = 0; t < u.types().size(); ++t) {
    if (listed[t]) continue;
    const auto& ctors = u.types()[t].constructors;
    for (ConstructorId c : ctors) p[c] = 1.0 / static_cast<double>(ctors.size());
  }
  validate_probmap(u, p);
  return p;
}

}  // namespace

Json to_json(const Universe& u, const ProbMap& p) {
  return Json{{"probabilities", probabilities_object(u, p.values())}};
}

ProbMap probmap_from_json(const Universe& u, const Json& j) {
  return read_probabilities(u, require(j, "probabilities"));
}

Json to_json(const Universe& u, const PredictionReport& report, const PopulationVector& extinction) {
  Json expected = Json::object();
  Json last_level = Json::object();
  for (std::size_t i = 0; i < report.per_constructor.size(); ++i) {
    const std::string& name = u.constructors()[i].qualified;
    expected[name] = report.per_constructor[i].total;
    last_level[name] = report.per_constructor[i].last_level;
  }
  Json foreign = Json::object();
  for (const auto& [c, value] : report.foreign) foreign[u.constructor(c).qualified] = value;
  Json ext = Json::object();
  for (std::size_t i = 0; i < extinction.values.size(); ++i) {
    ext[u.types()[extinction.index[i]].id] = extinction.values[i];
  }
  return Json{{"size", report.size},
              {"expected", std::move(expected)},
              {"lastLevel", std::move(last_level)},
              {"foreign", std::move(foreign)},
              {"extinction", std::move(ext)}};
}

Json to_json(const Universe& u, const GenSpec& spec) {
  Json star = Json::object();
  for (std::size_t i = 0; i < spec.star.values.size(); ++i) {
    const ConstructorId c{static_cast<std::uint32_t>(i)};
    if (is_terminal(u, c)) star[u.constructor(c).qualified] = spec.star.values[i];
  }
  Json out{{"root", spec.root},
           {"size", spec.size},
           {"strategy", std::string(to_string(spec.strategy))},
           {"probabilities", probabilities_object(u, spec.probabilities.values())},
           {"starProbabilities", std::move(star)},
           {"universeHash", spec.universe_hash}};
  if (!spec.source.empty()) out["source"] = spec.source;
  return out;
}

GenSpec spec_from_json(const Universe& u, const Json& j) {
  const Json& root = require(j, "root");
  if (!root.is_string() || root.get<std::string>() != u.root_type().id) {
    throw ModelError("spec root does not match the universe root '" + u.root_type().id + "'");
  }
  const Json& hash = require(j, "universeHash");
  if (!hash.is_string() || hash.get<std::string>() != u.hash()) {
    throw ModelError("spec was built for a different set of declarations");
  }
  const Json& size = require(j, "size");
  if (!size.is_number_unsigned()) throw ModelError("'size' must be a non-negative integer");
  const Json& strategy = require(j, "strategy");
  if (!strategy.is_string()) throw ModelError("'strategy' must be a string");
  std::string source = j.contains("source") && j["source"].is_string() ? j["source"].get<std::string>() : "";
  // Star probabilities are a function of the map; recompute rather than trust.
  return make_spec(u, size.get<unsigned>(), strategy_from_string(strategy.get<std::string>()),
                   read_probabilities(u, require(j, "probabilities")), std::move(source));
}

Json to_json(const Universe& u, const Value& v) {
  // Rebuild the tree from the preorder sequence with a stack of open arrays.
  struct Open {
    Json node;
    std::size_t remaining;
  };
  std::vector<Open> stack;
  Json result;
  for (const Term& t : v.terms()) {
    Json node;
    std::size_t arity = 0;
    if (const auto* c = std::get_if<ConstructorId>(&t)) {
      const ConstructorInfo& info = u.constructor(*c);
      node = Json{{"constructor", info.qualified}, {"fields", Json::array()}};
      arity = info.fields.size();
    } else if (const auto* i = std::get_if<std::int64_t>(&t)) {
      node = *i;
    } else if (const auto* d = std::get_if<double>(&t)) {
      node = *d;
    } else if (const auto* ch = std::get_if<char>(&t)) {
      node = std::string(1, *ch);
    }
    if (arity > 0) {
      stack.push_back({std::move(node), arity});
      continue;
    }
    while (true) {
      if (stack.empty()) {
        result = std::move(node);
        break;
      }
      Open& top = stack.back();
      top.node["fields"].push_back(std::move(node));
      if (--top.remaining > 0) break;
      node = std::move(top.node);
      stack.pop_back();
    }
  }
  return result;
}

Json to_json(const Universe& u, const SampleStats& stats) {
  Json hist = Json::object();
  for (const auto& [size, freq] : stats.size_histogram) hist[std::to_string(size)] = freq;
  return Json{{"samples", stats.samples},
              {"meanCounts", probabilities_object(u, stats.mean)},
              {"stdErr", probabilities_object(u, stats.std_err)},
              {"sizeHistogram", std::move(hist)},
              {"budgetExhausted", stats.budget_exhausted}};
}

}  // namespace dragen
