#pragma once

// Source-level algebraic data type declarations and the text DSL:
//
//   data <TypeName> [<tyvar>...] = <Ctor> [<Field>...] ( '|' <Ctor> [<Field>...] )*
//   Field := TypeName | tyvar | '(' TypeName Field+ ')'
//
// Line comments start with `--`. `Int`, `Double`, `Char` and `Unit` are
// builtin ground atoms and cannot be redeclared.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dragen {

enum class GroundKind { Int, Double, Char, Unit };

std::string_view to_string(GroundKind kind);
std::optional<GroundKind> ground_kind_from_name(std::string_view name);

/// A field type as written in the source. Variables carry no arguments.
struct TypeExpr {
  std::string name;
  bool is_variable = false;
  std::vector<TypeExpr> args;

  friend bool operator==(const TypeExpr&, const TypeExpr&) = default;
};

struct ConstructorDecl {
  std::string name;
  std::vector<TypeExpr> fields;

  friend bool operator==(const ConstructorDecl&, const ConstructorDecl&) = default;
};

struct TypeDecl {
  std::string name;
  std::vector<std::string> params;
  std::vector<ConstructorDecl> constructors;

  friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

/// Parses the DSL. Throws ParseError with the offending position.
std::vector<TypeDecl> parse_declarations(std::string_view source);

/// Prints declarations back to the DSL, one `data` line each.
std::string print_declarations(std::span<const TypeDecl> decls);

std::string print_type_expr(const TypeExpr& expr);

}  // namespace dragen
