#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dragen/universe.hpp"

namespace dragen {

struct Unit {
  friend bool operator==(Unit, Unit) { return true; }
};

/// One node of a value in preorder: a constructor (whose children follow)
/// or a ground atom.
using Term = std::variant<ConstructorId, std::int64_t, double, char, Unit>;

/// A generated value stored as its preorder traversal. Arities come from
/// the universe the value was generated for.
class Value {
 public:
  Value() = default;
  explicit Value(std::vector<Term> terms) : terms_(std::move(terms)) {}

  std::span<const Term> terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::vector<Term> terms_;
};

/// Multiset of constructors in the value; ground atoms are not counted.
std::map<ConstructorId, std::uint64_t> count_constructors(const Value& v);

/// Adds the value's constructor counts into `counts` (indexed by id) and
/// returns the total number of constructors.
std::uint64_t accumulate_counts(const Value& v, std::span<std::uint64_t> counts);

/// True when the preorder sequence is exactly one well-typed value of type
/// `root` (arity and every child type match the declarations).
bool type_checks(const Universe& u, const Value& v, TypeId root);

/// Largest number of family-typed ancestors of any family node; the root is
/// at depth 0.
unsigned family_depth(const Universe& u, const Value& v);

/// `(Node (LeafA) (LeafB))`; atoms print as 42, 0.5, 'c' and ().
std::string to_sexp(const Universe& u, const Value& v);

}  // namespace dragen
