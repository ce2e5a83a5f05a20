#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dragen/declarations.hpp"

namespace dragen {

struct TypeId {
  std::uint32_t value = 0;
  friend auto operator<=>(const TypeId&, const TypeId&) = default;
};

struct ConstructorId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ConstructorId&, const ConstructorId&) = default;
};

/// A resolved constructor field, classified relative to the root's
/// branching family.
struct FieldRef {
  enum class Kind { Family, Foreign, Ground };

  Kind kind = Kind::Ground;
  TypeId type{};                       // Family / Foreign only
  GroundKind ground = GroundKind::Unit;  // Ground only

  friend bool operator==(const FieldRef&, const FieldRef&) = default;
};

struct ConstructorInfo {
  std::string name;       // as declared, e.g. "Just"
  std::string qualified;  // "<type id>.<name>", e.g. "Maybe[Bool].Just"
  TypeId owner{};
  std::vector<FieldRef> fields;

  friend bool operator==(const ConstructorInfo&, const ConstructorInfo&) = default;
};

struct TypeInfo {
  std::string id;  // "Tree", or "Maybe[Bool]" for a monomorphized application
  std::vector<ConstructorId> constructors;
  bool in_family = false;

  friend bool operator==(const TypeInfo&, const TypeInfo&) = default;
};

/// Monomorphized set of types reachable from a generation root.
///
/// Family types come first (root at index 0), followed by foreign types, so
/// the family's constructors occupy ids [0, family_constructor_count()).
class Universe {
 public:
  TypeId root() const { return TypeId{0}; }
  const TypeInfo& root_type() const { return types_.front(); }

  std::span<const TypeInfo> types() const { return types_; }
  std::span<const ConstructorInfo> constructors() const { return constructors_; }
  std::span<const TypeDecl> declarations() const { return declarations_; }

  const TypeInfo& type(TypeId id) const { return types_.at(id.value); }
  const ConstructorInfo& constructor(ConstructorId id) const { return constructors_.at(id.value); }

  std::size_t family_size() const { return family_size_; }
  std::size_t family_constructor_count() const { return family_constructor_count_; }
  bool in_family(TypeId id) const { return id.value < family_size_; }
  bool in_family(ConstructorId id) const { return id.value < family_constructor_count_; }

  /// Family type ids, root first.
  std::vector<TypeId> family() const;
  std::vector<ConstructorId> family_constructors() const;
  std::vector<TypeId> foreign_types() const;

  /// Successor lists of the type reference graph (u -> v iff some constructor
  /// of u has a field of type v). Ground atoms are not vertices.
  const std::vector<std::vector<TypeId>>& type_graph() const { return type_graph_; }

  std::optional<TypeId> find_type(std::string_view id) const;

  /// Accepts a qualified name ("Tree.Node") or a bare constructor name when
  /// it is unambiguous across the universe.
  std::optional<ConstructorId> find_constructor(std::string_view name) const;

  /// Like find_constructor but throws ModelError naming the constructor.
  ConstructorId constructor_by_name(std::string_view name) const;
  TypeId type_by_name(std::string_view id) const;

  /// Stable 64-bit FNV-1a digest of the printed declarations and root, as hex.
  std::string hash() const;

  friend bool operator==(const Universe&, const Universe&) = default;

 private:
  friend Universe parse_universe(std::string_view source, std::string_view root);
  friend Universe build_universe(std::vector<TypeDecl> decls, std::string_view root);

  std::vector<TypeDecl> declarations_;
  std::vector<TypeInfo> types_;
  std::vector<ConstructorInfo> constructors_;
  std::vector<std::vector<TypeId>> type_graph_;
  std::size_t family_size_ = 0;
  std::size_t family_constructor_count_ = 0;
};

/// Parses DSL source and monomorphizes everything reachable from `root`.
/// The branching family is the strongly connected component of the root in
/// the type graph. Throws ParseError or ModelError.
Universe parse_universe(std::string_view source, std::string_view root);

/// Same as parse_universe over already-parsed declarations.
Universe build_universe(std::vector<TypeDecl> decls, std::string_view root);

/// Number of fields of `c` whose type is `t`.
unsigned branching_factor(const Universe& u, ConstructorId c, TypeId t);

/// Constructors of family type `t` with no family-typed fields.
/// Throws ModelError if `t` is outside the family.
std::vector<ConstructorId> terminal_constructors(const Universe& u, TypeId t);

bool is_terminal(const Universe& u, ConstructorId c);

/// Tarjan's algorithm. Components are returned in reverse topological order
/// of the condensation (sinks first).
std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& graph);

}  // namespace dragen

template <>
struct std::hash<dragen::ConstructorId> {
  std::size_t operator()(dragen::ConstructorId id) const noexcept { return id.value; }
};

template <>
struct std::hash<dragen::TypeId> {
  std::size_t operator()(dragen::TypeId id) const noexcept { return id.value; }
};
