#include "dragen/cdg.hpp"

#include <algorithm>
#include <iterator>
#include <map>

#include "dragen/error.hpp"

namespace dragen {

std::vector<CdgEdge> Cdg::out_edges(ConstructorId parent) const {
  std::vector<CdgEdge> out;
  std::copy_if(edges.begin(), edges.end(), std::back_inserter(out),
               [parent](const CdgEdge& e) { return e.parent == parent; });
  return out;
}

std::vector<TypeId> foreign_topological_order(const Universe& u) {
  // 0 = unvisited, 1 = in progress, 2 = done
  std::vector<int> state(u.types().size(), 0);
  std::vector<TypeId> postorder;
  auto visit = [&](auto&& self, TypeId t) -> void {
    state[t.value] = 1;
    for (TypeId succ : u.type_graph()[t.value]) {
      if (u.in_family(succ)) continue;
      if (state[succ.value] == 1) {
        throw ModelError("cycle among foreign types at '" + u.type(succ).id + "'");
      }
      if (state[succ.value] == 0) self(self, succ);
    }
    state[t.value] = 2;
    postorder.push_back(t);
  };
  for (TypeId t : u.foreign_types()) {
    if (state[t.value] == 0) visit(visit, t);
  }
  std::reverse(postorder.begin(), postorder.end());
  return postorder;
}

Cdg build_cdg(const Universe& u) {
  foreign_topological_order(u);  // cycle check

  Cdg cdg;
  cdg.roots = u.family_constructors();
  cdg.nodes = cdg.roots;
  std::vector<bool> seen(u.constructors().size(), false);
  for (ConstructorId c : cdg.roots) seen[c.value] = true;

  std::vector<ConstructorId> work = cdg.roots;
  for (std::size_t next = 0; next < work.size(); ++next) {
    const ConstructorId parent = work[next];
    std::map<std::uint32_t, unsigned> multiplicity;  // foreign type -> field count
    std::vector<TypeId> first_seen;
    for (const FieldRef& f : u.constructor(parent).fields) {
      if (f.kind != FieldRef::Kind::Foreign) continue;
      if (multiplicity[f.type.value]++ == 0) first_seen.push_back(f.type);
    }
    for (TypeId t : first_seen) {
      for (ConstructorId child : u.type(t).constructors) {
        cdg.edges.push_back(CdgEdge{parent, child, multiplicity[t.value]});
        if (!seen[child.value]) {
          seen[child.value] = true;
          cdg.nodes.push_back(child);
          work.push_back(child);
        }
      }
    }
  }
  return cdg;
}

}  // namespace dragen
