#include "dragen/value.hpp"

#include <algorithm>
#include <cstdio>

namespace dragen {

std::map<ConstructorId, std::uint64_t> count_constructors(const Value& v) {
  std::map<ConstructorId, std::uint64_t> counts;
  for (const Term& t : v.terms()) {
    if (const auto* c = std::get_if<ConstructorId>(&t)) ++counts[*c];
  }
  return counts;
}

std::uint64_t accumulate_counts(const Value& v, std::span<std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (const Term& t : v.terms()) {
    if (const auto* c = std::get_if<ConstructorId>(&t)) {
      ++counts[c->value];
      ++total;
    }
  }
  return total;
}

namespace {

bool atom_matches(const Term& t, GroundKind kind) {
  switch (kind) {
    case GroundKind::Int: return std::holds_alternative<std::int64_t>(t);
    case GroundKind::Double: return std::holds_alternative<double>(t);
    case GroundKind::Char: return std::holds_alternative<char>(t);
    case GroundKind::Unit: return std::holds_alternative<Unit>(t);
  }
  return false;
}

}  // namespace

bool type_checks(const Universe& u, const Value& v, TypeId root) {
  std::vector<FieldRef> expected{FieldRef{u.in_family(root) ? FieldRef::Kind::Family : FieldRef::Kind::Foreign,
                                          root, GroundKind::Unit}};
  std::size_t i = 0;
  const auto terms = v.terms();
  while (!expected.empty()) {
    if (i >= terms.size()) return false;
    const FieldRef want = expected.back();
    expected.pop_back();
    const Term& t = terms[i++];
    if (want.kind == FieldRef::Kind::Ground) {
      if (!atom_matches(t, want.ground)) return false;
      continue;
    }
    const auto* c = std::get_if<ConstructorId>(&t);
    if (c == nullptr || c->value >= u.constructors().size()) return false;
    const ConstructorInfo& info = u.constructor(*c);
    if (info.owner != want.type) return false;
    for (auto it = info.fields.rbegin(); it != info.fields.rend(); ++it) expected.push_back(*it);
  }
  return i == terms.size();
}

unsigned family_depth(const Universe& u, const Value& v) {
  // Each pending slot remembers the family depth it will occupy.
  struct Slot {
    bool family;
    unsigned depth;
  };
  std::vector<Slot> pending{{true, 0}};
  unsigned deepest = 0;
  for (const Term& t : v.terms()) {
    if (pending.empty()) break;
    const Slot slot = pending.back();
    pending.pop_back();
    const auto* c = std::get_if<ConstructorId>(&t);
    if (c == nullptr) continue;
    if (slot.family) deepest = std::max(deepest, slot.depth);
    const auto& fields = u.constructor(*c).fields;
    for (auto it = fields.rbegin(); it != fields.rend(); ++it) {
      const bool family = it->kind == FieldRef::Kind::Family;
      pending.push_back({family, family ? slot.depth + 1 : slot.depth});
    }
  }
  return deepest;
}

std::string to_sexp(const Universe& u, const Value& v) {
  std::string out;
  std::vector<std::size_t> remaining;  // children still to print per open constructor
  for (const Term& t : v.terms()) {
    if (!remaining.empty()) out += ' ';
    if (const auto* c = std::get_if<ConstructorId>(&t)) {
      const ConstructorInfo& info = u.constructor(*c);
      out += '(';
      out += info.name;
      if (info.fields.empty()) {
        out += ')';
      } else {
        remaining.push_back(info.fields.size());
        continue;
      }
    } else if (const auto* i = std::get_if<std::int64_t>(&t)) {
      out += std::to_string(*i);
    } else if (const auto* d = std::get_if<double>(&t)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", *d);
      out += buf;
    } else if (const auto* ch = std::get_if<char>(&t)) {
      out += '\'';
      if (*ch == '\'' || *ch == '\\') out += '\\';
      out += *ch;
      out += '\'';
    } else {
      out += "()";
    }
    // A leaf completed: close every constructor whose children are done.
    while (!remaining.empty() && --remaining.back() == 0) {
      remaining.pop_back();
      out += ')';
    }
  }
  return out;
}

}  // namespace dragen
