#pragma once

#include <vector>

#include "dragen/universe.hpp"

namespace dragen {

/// Constructor dependency graph: links every family constructor through
/// foreign constructors to each foreign constructor it can cause to be
/// generated. An edge (parent, child, m) says parent has m fields of child's
/// type; its probability symbol is the child's own generation probability.
struct CdgEdge {
  ConstructorId parent;
  ConstructorId child;
  unsigned multiplicity = 0;

  friend bool operator==(const CdgEdge&, const CdgEdge&) = default;
};

struct Cdg {
  std::vector<ConstructorId> roots;  // the family constructors
  std::vector<ConstructorId> nodes;  // roots followed by reachable foreign constructors
  std::vector<CdgEdge> edges;        // grouped by parent, in declaration order

  std::vector<CdgEdge> out_edges(ConstructorId parent) const;
};

/// Throws ModelError if foreign types reachable from the family form a cycle.
Cdg build_cdg(const Universe& u);

/// Foreign type ids in an order where every type precedes the types its
/// constructors reference. Throws ModelError on a cycle.
std::vector<TypeId> foreign_topological_order(const Universe& u);

}  // namespace dragen
