#pragma once

// Declarations used across the suites and reference computations that do
// not share code paths with the library.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dragen/prob_map.hpp"
#include "dragen/universe.hpp"

namespace dragen::testing {

inline constexpr const char* kTree = "data Tree = LeafA | LeafB | LeafC | Node Tree Tree\n";
inline constexpr const char* kTreePrime = "data Tree' = Leaf | NodeA Tree' Tree' | NodeB Tree'\n";
inline constexpr const char* kTreeDoublePrime =
    "data Tree'' = LeafA | LeafB | NodeA Tree'' Tree'' | NodeB Tree''\n";
inline constexpr const char* kT1T2 = "data T1 = A | B T1 T2\ndata T2 = C | D T1\n";
inline constexpr const char* kDeriveT = "data T = A | B T T | C T T\n";
inline constexpr const char* kComposite =
    "data Bool = False | True\n"
    "data Maybe a = Nothing | Just a\n"
    "data Tree = LeafA (Maybe Bool) | LeafB Bool Bool | LeafC | Node Tree Tree\n";

/// Starts from the uniform map and overrides the named constructors.
inline ProbMap probs(const Universe& u, std::initializer_list<std::pair<const char*, double>> entries) {
  ProbMap p = uniform_probmap(u);
  for (const auto& [name, value] : entries) p[u.constructor_by_name(name)] = value;
  return p;
}

inline bool has_family_field(const Universe& u, ConstructorId c) {
  for (const FieldRef& f : u.constructor(c).fields) {
    if (f.kind == FieldRef::Kind::Family) return true;
  }
  return false;
}

/// Expected family-constructor counts of a size-1 generator, by enumerating
/// every outcome: a root choice with probability p, then for each family
/// field a terminal of that field's type drawn with p renormalized over the
/// type's terminals (uniform when they all have p = 0).
inline std::vector<double> depth_one_enumeration(const Universe& u, const ProbMap& p) {
  const std::size_t n = u.family_constructor_count();
  std::vector<double> expected(n, 0.0);

  auto terminal_choices = [&](TypeId t) {
    std::vector<std::pair<std::uint32_t, double>> out;
    double mass = 0.0;
    for (ConstructorId c : u.type(t).constructors) {
      if (!has_family_field(u, c)) {
        out.emplace_back(c.value, p[c]);
        mass += p[c];
      }
    }
    for (auto& [c, w] : out) w = mass > 0.0 ? w / mass : 1.0 / static_cast<double>(out.size());
    return out;
  };

  for (ConstructorId root : u.type(u.root()).constructors) {
    if (p[root] == 0.0) continue;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> slots;
    for (const FieldRef& f : u.constructor(root).fields) {
      if (f.kind == FieldRef::Kind::Family) slots.push_back(terminal_choices(f.type));
    }
    // Odometer over the cartesian product of terminal choices.
    std::vector<std::size_t> pick(slots.size(), 0);
    while (true) {
      double weight = p[root];
      std::vector<std::uint32_t> chosen{root.value};
      for (std::size_t s = 0; s < slots.size(); ++s) {
        weight *= slots[s][pick[s]].second;
        chosen.push_back(slots[s][pick[s]].first);
      }
      for (std::uint32_t c : chosen) expected[c] += weight;
      std::size_t s = 0;
      while (s < slots.size() && ++pick[s] == slots[s].size()) pick[s++] = 0;
      if (s == slots.size()) break;
    }
  }
  return expected;
}

/// Random declarations with 1-4 mutually recursive types and at most 8
/// constructors in total. Every type gets a terminal and a constructor that
/// refers to the next type, so the root's component spans all of them.
inline std::string random_family_source(std::mt19937_64& rng) {
  auto below = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::size_t types = 1 + below(4);
  std::vector<std::size_t> ctor_counts(types, 2);
  std::size_t spare = 8 - 2 * types;
  while (spare > 0 && below(2) == 0) {
    ++ctor_counts[below(types)];
    --spare;
  }
  std::string src;
  for (std::size_t t = 0; t < types; ++t) {
    src += "data R" + std::to_string(t) + " = K" + std::to_string(t) + "_0";
    if (below(3) == 0) src += " Int";
    src += " | K" + std::to_string(t) + "_1 R" + std::to_string((t + 1) % types);
    for (std::size_t c = 2; c < ctor_counts[t]; ++c) {
      src += " | K" + std::to_string(t) + "_" + std::to_string(c);
      const std::size_t fields = below(4);
      for (std::size_t f = 0; f < fields; ++f) src += " R" + std::to_string(below(types));
    }
    src += '\n';
  }
  return src;
}

/// A random ProbMap: independent weights in [0, 1) per type, normalized.
inline ProbMap random_probmap(const Universe& u, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  ProbMap p(u.constructors().size());
  for (const TypeInfo& t : u.types()) {
    double total = 0.0;
    for (ConstructorId c : t.constructors) total += (p[c] = weight(rng) + 1e-3);
    for (ConstructorId c : t.constructors) p[c] /= total;
  }
  return p;
}

}  // namespace dragen::testing
