#include "dragen/universe.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>

#include "dragen/error.hpp"

namespace dragen {

namespace {

constexpr std::size_t kMaxInstances = 4096;

struct ResolvedType {
  std::optional<GroundKind> ground;  // set for ground atoms
  std::string key;                   // instance key for ADTs
};

struct Instance {
  std::size_t decl = 0;
  std::vector<ResolvedType> args;
  std::string key;
  // Per constructor: resolved field types.
  std::vector<std::vector<ResolvedType>> fields;
};

std::string instance_key(const std::string& name, const std::vector<ResolvedType>& args) {
  if (args.empty()) return name;
  std::string key = name + "[";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) key += ',';
    key += args[i].key;
  }
  return key + "]";
}

class Validator {
 public:
  explicit Validator(const std::vector<TypeDecl>& decls) : decls_(decls) {}

  std::map<std::string, std::size_t> run() {
    std::map<std::string, std::size_t> by_name;
    std::set<std::string> ctor_names;
    for (std::size_t i = 0; i < decls_.size(); ++i) {
      const TypeDecl& decl = decls_[i];
      if (ground_kind_from_name(decl.name)) {
        throw ModelError("cannot redeclare builtin type '" + decl.name + "'");
      }
      if (!by_name.emplace(decl.name, i).second) {
        throw ModelError("duplicate type declaration '" + decl.name + "'");
      }
      std::set<std::string> params;
      for (const std::string& p : decl.params) {
        if (!params.insert(p).second) {
          throw ModelError("duplicate type variable '" + p + "' in declaration of '" + decl.name + "'");
        }
      }
      if (decl.constructors.empty()) {
        throw ModelError("type '" + decl.name + "' has no constructors");
      }
      for (const ConstructorDecl& ctor : decl.constructors) {
        if (!ctor_names.insert(ctor.name).second) {
          throw ModelError("duplicate constructor name '" + ctor.name + "'");
        }
      }
    }
    for (const TypeDecl& decl : decls_) {
      for (const ConstructorDecl& ctor : decl.constructors) {
        for (const TypeExpr& field : ctor.fields) check_expr(field, decl, ctor, by_name);
      }
    }
    return by_name;
  }

 private:
  void check_expr(const TypeExpr& expr, const TypeDecl& decl, const ConstructorDecl& ctor,
                  const std::map<std::string, std::size_t>& by_name) const {
    const std::string where = " in constructor '" + ctor.name + "' of '" + decl.name + "'";
    if (expr.is_variable) {
      if (std::find(decl.params.begin(), decl.params.end(), expr.name) == decl.params.end()) {
        throw ModelError("unbound type variable '" + expr.name + "'" + where);
      }
      return;
    }
    if (ground_kind_from_name(expr.name)) {
      if (!expr.args.empty()) {
        throw ModelError("builtin type '" + expr.name + "' takes no arguments" + where);
      }
      return;
    }
    const auto it = by_name.find(expr.name);
    if (it == by_name.end()) {
      throw ModelError("unknown type '" + expr.name + "'" + where);
    }
    const std::size_t arity = decls_[it->second].params.size();
    if (arity != expr.args.size()) {
      throw ModelError("type '" + expr.name + "' expects " + std::to_string(arity) +
                       " argument(s) but was given " + std::to_string(expr.args.size()) + where);
    }
    for (const TypeExpr& arg : expr.args) check_expr(arg, decl, ctor, by_name);
  }

  const std::vector<TypeDecl>& decls_;
};

class Monomorphizer {
 public:
  Monomorphizer(const std::vector<TypeDecl>& decls, const std::map<std::string, std::size_t>& by_name)
      : decls_(decls), by_name_(by_name) {}

  std::vector<Instance> run(std::size_t root_decl) {
    intern(root_decl, {});
    for (std::size_t next = 0; next < instances_.size(); ++next) {
      const std::size_t decl_index = instances_[next].decl;
      const std::vector<ResolvedType> args = instances_[next].args;
      const TypeDecl& decl = decls_[decl_index];
      std::map<std::string, ResolvedType> env;
      for (std::size_t i = 0; i < decl.params.size(); ++i) env.emplace(decl.params[i], args[i]);
      std::vector<std::vector<ResolvedType>> fields;
      for (const ConstructorDecl& ctor : decl.constructors) {
        std::vector<ResolvedType> resolved;
        for (const TypeExpr& field : ctor.fields) resolved.push_back(resolve(field, env));
        fields.push_back(std::move(resolved));
      }
      instances_[next].fields = std::move(fields);
    }
    return std::move(instances_);
  }

  const std::map<std::string, std::size_t>& index() const { return index_; }

 private:
  ResolvedType resolve(const TypeExpr& expr, const std::map<std::string, ResolvedType>& env) {
    if (expr.is_variable) return env.at(expr.name);
    if (auto g = ground_kind_from_name(expr.name)) return ResolvedType{g, std::string(to_string(*g))};
    std::vector<ResolvedType> args;
    for (const TypeExpr& arg : expr.args) args.push_back(resolve(arg, env));
    const std::size_t decl = by_name_.at(expr.name);
    return ResolvedType{std::nullopt, instances_[intern(decl, std::move(args))].key};
  }

  std::size_t intern(std::size_t decl, std::vector<ResolvedType> args) {
    std::string key = instance_key(decls_[decl].name, args);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    if (instances_.size() >= kMaxInstances) {
      throw ModelError("monomorphization of '" + decls_[decl].name +
                       "' does not terminate (polymorphic recursion is unsupported)");
    }
    const std::size_t id = instances_.size();
    index_.emplace(key, id);
    instances_.push_back(Instance{decl, std::move(args), std::move(key), {}});
    return id;
  }

  const std::vector<TypeDecl>& decls_;
  const std::map<std::string, std::size_t>& by_name_;
  std::vector<Instance> instances_;
  std::map<std::string, std::size_t> index_;
};

void tarjan_visit(const std::vector<std::vector<std::uint32_t>>& graph, std::uint32_t v,
                  std::vector<int>& order, std::vector<int>& low, std::vector<bool>& on_stack,
                  std::vector<std::uint32_t>& stack, int& counter,
                  std::vector<std::vector<std::uint32_t>>& out) {
  order[v] = low[v] = counter++;
  stack.push_back(v);
  on_stack[v] = true;
  for (std::uint32_t w : graph[v]) {
    if (order[w] == -1) {
      tarjan_visit(graph, w, order, low, on_stack, stack, counter, out);
      low[v] = std::min(low[v], low[w]);
    } else if (on_stack[w]) {
      low[v] = std::min(low[v], order[w]);
    }
  }
  if (low[v] == order[v]) {
    std::vector<std::uint32_t> component;
    std::uint32_t w = 0;
    do {
      w = stack.back();
      stack.pop_back();
      on_stack[w] = false;
      component.push_back(w);
    } while (w != v);
    std::sort(component.begin(), component.end());
    out.push_back(std::move(component));
  }
}

}  // namespace

std::vector<std::vector<std::uint32_t>> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& graph) {
  const std::size_t n = graph.size();
  std::vector<int> order(n, -1);
  std::vector<int> low(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> out;
  int counter = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (order[v] == -1) tarjan_visit(graph, v, order, low, on_stack, stack, counter, out);
  }
  return out;
}

Universe parse_universe(std::string_view source, std::string_view root) {
  return build_universe(parse_declarations(source), root);
}

Universe build_universe(std::vector<TypeDecl> decls, std::string_view root) {
  const std::map<std::string, std::size_t> by_name = Validator(decls).run();
  const auto root_it = by_name.find(std::string(root));
  if (root_it == by_name.end()) {
    throw ModelError("root type '" + std::string(root) + "' is not declared");
  }
  if (!decls[root_it->second].params.empty()) {
    throw ModelError("root type '" + std::string(root) + "' must not have type parameters");
  }

  Monomorphizer mono(decls, by_name);
  std::vector<Instance> instances = mono.run(root_it->second);
  const std::map<std::string, std::size_t>& index = mono.index();

  // Temporary graph over instances, successors in field order.
  std::vector<std::vector<std::uint32_t>> graph(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    std::set<std::uint32_t> succ;
    for (const auto& ctor_fields : instances[i].fields) {
      for (const ResolvedType& f : ctor_fields) {
        if (!f.ground) succ.insert(static_cast<std::uint32_t>(index.at(f.key)));
      }
    }
    graph[i].assign(succ.begin(), succ.end());
  }

  const auto components = strongly_connected_components(graph);
  std::vector<bool> family_member(instances.size(), false);
  for (const auto& component : components) {
    const bool has_root = std::find(component.begin(), component.end(), 0u) != component.end();
    if (has_root) {
      for (std::uint32_t v : component) family_member[v] = true;
      continue;
    }
    const bool cyclic =
        component.size() > 1 ||
        std::find(graph[component[0]].begin(), graph[component[0]].end(), component[0]) !=
            graph[component[0]].end();
    if (cyclic) {
      throw ModelError("recursive type '" + instances[component[0]].key +
                       "' is reachable from the generation root but is not mutually recursive "
                       "with it; unsupported");
    }
  }

  // Family first (discovery order, root first), then foreign types.
  std::vector<std::uint32_t> final_of(instances.size());
  std::vector<std::uint32_t> order;
  for (std::uint32_t i = 0; i < instances.size(); ++i) {
    if (family_member[i]) order.push_back(i);
  }
  const std::size_t family_size = order.size();
  for (std::uint32_t i = 0; i < instances.size(); ++i) {
    if (!family_member[i]) order.push_back(i);
  }
  for (std::uint32_t pos = 0; pos < order.size(); ++pos) final_of[order[pos]] = pos;

  Universe u;
  u.family_size_ = family_size;
  u.types_.resize(order.size());
  u.type_graph_.resize(order.size());
  for (std::uint32_t pos = 0; pos < order.size(); ++pos) {
    const Instance& inst = instances[order[pos]];
    const TypeDecl& decl = decls[inst.decl];
    TypeInfo& info = u.types_[pos];
    info.id = inst.key;
    info.in_family = pos < family_size;
    for (std::size_t c = 0; c < decl.constructors.size(); ++c) {
      ConstructorInfo ctor;
      ctor.name = decl.constructors[c].name;
      ctor.qualified = inst.key + "." + ctor.name;
      ctor.owner = TypeId{pos};
      for (const ResolvedType& f : inst.fields[c]) {
        FieldRef ref;
        if (f.ground) {
          ref.kind = FieldRef::Kind::Ground;
          ref.ground = *f.ground;
        } else {
          const std::uint32_t target = final_of[index.at(f.key)];
          ref.kind = target < family_size ? FieldRef::Kind::Family : FieldRef::Kind::Foreign;
          ref.type = TypeId{target};
        }
        ctor.fields.push_back(ref);
      }
      info.constructors.push_back(ConstructorId{static_cast<std::uint32_t>(u.constructors_.size())});
      u.constructors_.push_back(std::move(ctor));
    }
    for (std::uint32_t succ : graph[order[pos]]) u.type_graph_[pos].push_back(TypeId{final_of[succ]});
    std::sort(u.type_graph_[pos].begin(), u.type_graph_[pos].end());
    if (pos + 1 == family_size) u.family_constructor_count_ = u.constructors_.size();
  }
  u.declarations_ = std::move(decls);
  return u;
}

std::vector<TypeId> Universe::family() const {
  std::vector<TypeId> out;
  for (std::uint32_t i = 0; i < family_size_; ++i) out.push_back(TypeId{i});
  return out;
}

std::vector<ConstructorId> Universe::family_constructors() const {
  std::vector<ConstructorId> out;
  for (std::uint32_t i = 0; i < family_constructor_count_; ++i) out.push_back(ConstructorId{i});
  return out;
}

std::vector<TypeId> Universe::foreign_types() const {
  std::vector<TypeId> out;
  for (auto i = static_cast<std::uint32_t>(family_size_); i < types_.size(); ++i) out.push_back(TypeId{i});
  return out;
}

std::optional<TypeId> Universe::find_type(std::string_view id) const {
  for (std::uint32_t i = 0; i < types_.size(); ++i) {
    if (types_[i].id == id) return TypeId{i};
  }
  return std::nullopt;
}

std::optional<ConstructorId> Universe::find_constructor(std::string_view name) const {
  std::optional<ConstructorId> bare;
  std::size_t bare_matches = 0;
  for (std::uint32_t i = 0; i < constructors_.size(); ++i) {
    if (constructors_[i].qualified == name) return ConstructorId{i};
    if (constructors_[i].name == name) {
      bare = ConstructorId{i};
      ++bare_matches;
    }
  }
  if (bare_matches == 1) return bare;
  return std::nullopt;
}

ConstructorId Universe::constructor_by_name(std::string_view name) const {
  if (auto id = find_constructor(name)) return *id;
  throw ModelError("unknown or ambiguous constructor '" + std::string(name) + "'");
}

TypeId Universe::type_by_name(std::string_view id) const {
  if (auto t = find_type(id)) return *t;
  throw ModelError("unknown type '" + std::string(id) + "'");
}

std::string Universe::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view text) {
    for (unsigned char c : text) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mix(print_declarations(declarations_));
  mix("root=");
  mix(root_type().id);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

unsigned branching_factor(const Universe& u, ConstructorId c, TypeId t) {
  if (c.value >= u.constructors().size() || t.value >= u.types().size()) {
    throw ModelError("branching_factor: unknown constructor or type id");
  }
  unsigned count = 0;
  for (const FieldRef& f : u.constructor(c).fields) {
    if (f.kind != FieldRef::Kind::Ground && f.type == t) ++count;
  }
  return count;
}

bool is_terminal(const Universe& u, ConstructorId c) {
  const auto& fields = u.constructor(c).fields;
  return std::none_of(fields.begin(), fields.end(),
                      [](const FieldRef& f) { return f.kind == FieldRef::Kind::Family; });
}

std::vector<ConstructorId> terminal_constructors(const Universe& u, TypeId t) {
  if (!u.in_family(t)) {
    throw ModelError("terminal_constructors: type '" +
                     (t.value < u.types().size() ? u.type(t).id : std::string("?")) +
                     "' is not in the branching family");
  }
  std::vector<ConstructorId> out;
  for (ConstructorId c : u.type(t).constructors) {
    if (is_terminal(u, c)) out.push_back(c);
  }
  return out;
}

}  // namespace dragen
