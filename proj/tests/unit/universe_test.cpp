#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dragen/cdg.hpp"
#include "dragen/error.hpp"
#include "dragen/prob_map.hpp"
#include "dragen/universe.hpp"
#include "oracles.hpp"

namespace dragen {
namespace {

using testing::kComposite;
using testing::kT1T2;
using testing::kTree;
using testing::kTreeDoublePrime;

std::vector<std::string> names(const Universe& u, const std::vector<ConstructorId>& ids) {
  std::vector<std::string> out;
  for (ConstructorId c : ids) out.push_back(u.constructor(c).name);
  return out;
}

TEST(Universe, SimpleTree) {
  const Universe u = parse_universe(kTree, "Tree");
  EXPECT_EQ(u.family_size(), 1u);
  EXPECT_EQ(u.constructors().size(), 4u);
  EXPECT_EQ(u.family_constructor_count(), 4u);
  const ConstructorId node = u.constructor_by_name("Node");
  EXPECT_EQ(u.constructor(node).qualified, "Tree.Node");
  EXPECT_EQ(branching_factor(u, node, u.root()), 2u);
  EXPECT_EQ(branching_factor(u, u.constructor_by_name("LeafA"), u.root()), 0u);
  EXPECT_EQ(names(u, terminal_constructors(u, u.root())), (std::vector<std::string>{"LeafA", "LeafB", "LeafC"}));
}

TEST(Universe, SingletonType) {
  const Universe u = parse_universe("data U = OnlyU", "U");
  EXPECT_EQ(u.family_size(), 1u);
  EXPECT_EQ(terminal_constructors(u, u.root()).size(), 1u);
  EXPECT_TRUE(u.type_graph()[0].empty());
}

TEST(Universe, MutualRecursionFormsOneFamily) {
  const Universe u = parse_universe(kT1T2, "T1");
  EXPECT_EQ(u.family_size(), 2u);
  EXPECT_TRUE(u.foreign_types().empty());
  const TypeId t2 = u.type_by_name("T2");
  EXPECT_EQ(branching_factor(u, u.constructor_by_name("B"), t2), 1u);
  EXPECT_EQ(names(u, terminal_constructors(u, t2)), (std::vector<std::string>{"C"}));
}

TEST(Universe, TerminalsOfTreeDoublePrime) {
  const Universe u = parse_universe(kTreeDoublePrime, "Tree''");
  EXPECT_EQ(names(u, terminal_constructors(u, u.root())), (std::vector<std::string>{"LeafA", "LeafB"}));
}

TEST(Universe, MonomorphizesApplications) {
  const Universe u = parse_universe(kComposite, "Tree");
  EXPECT_EQ(u.family_size(), 1u);
  ASSERT_TRUE(u.find_type("Maybe[Bool]").has_value());
  EXPECT_FALSE(u.in_family(*u.find_type("Maybe[Bool]")));
  const ConstructorId just = u.constructor_by_name("Maybe[Bool].Just");
  ASSERT_EQ(u.constructor(just).fields.size(), 1u);
  EXPECT_EQ(u.constructor(just).fields[0].type, u.type_by_name("Bool"));
  EXPECT_THROW(terminal_constructors(u, u.type_by_name("Bool")), ModelError);
}

TEST(Universe, GroundFieldsAreNotTypes) {
  const Universe u = parse_universe("data T = L Int Char | N T Double", "T");
  EXPECT_EQ(u.types().size(), 1u);
  EXPECT_TRUE(is_terminal(u, u.constructor_by_name("L")));
  EXPECT_EQ(u.constructor(u.constructor_by_name("L")).fields[1].ground, GroundKind::Char);
}

TEST(Universe, FamilyIsRootComponentOnly) {
  // A non-recursive type the family refers to stays foreign.
  const Universe u = parse_universe("data Bool = F | T\ndata Tree = Leaf Bool | Node Tree Tree", "Tree");
  EXPECT_EQ(u.family_size(), 1u);
  EXPECT_EQ(u.foreign_types().size(), 1u);
  // Types that only the family's children reach stay out of the family too.
  const Universe v = parse_universe("data A = X B | Y A\ndata B = Z", "A");
  EXPECT_EQ(v.family_size(), 1u);
}

TEST(Universe, RejectsBadDeclarations) {
  EXPECT_THROW(parse_universe("data T = A | B Foo", "T"), ModelError);
  EXPECT_THROW(parse_universe("data T = A | A", "T"), ModelError);
  EXPECT_THROW(parse_universe("data T = A\ndata U = A", "T"), ModelError);
  EXPECT_THROW(parse_universe("data T = A\ndata T = B", "T"), ModelError);
  EXPECT_THROW(parse_universe("data Int = A", "Int"), ModelError);
  EXPECT_THROW(parse_universe("data T = A b", "T"), ModelError);
  EXPECT_THROW(parse_universe("data M a = N | J a\ndata T = A (M Int Int)", "T"), ModelError);
  EXPECT_THROW(parse_universe("data T = A", "Missing"), ModelError);
  EXPECT_THROW(parse_universe("data M a = N | J a", "M"), ModelError);
}

TEST(Universe, RejectsRecursiveForeignComponent) {
  try {
    parse_universe("data L = Nil | Cons L\ndata T = A L | B T", "T");
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported"), std::string::npos) << e.what();
  }
}

TEST(Universe, FindsConstructorsByQualifiedOrBareName) {
  const Universe u = parse_universe(kComposite, "Tree");
  EXPECT_EQ(u.find_constructor("True"), u.find_constructor("Bool.True"));
  EXPECT_FALSE(u.find_constructor("Nope").has_value());
  EXPECT_THROW(u.constructor_by_name("Nope"), ModelError);
  const Universe dup = parse_universe("data A = X B | Y A\ndata B = Z", "A");
  EXPECT_TRUE(dup.find_constructor("A.X").has_value());
}

TEST(Universe, HashIsStableAndSensitive) {
  EXPECT_EQ(parse_universe(kTree, "Tree").hash(), parse_universe(std::string(kTree) + "-- c\n", "Tree").hash());
  EXPECT_NE(parse_universe(kTree, "Tree").hash(),
            parse_universe("data Tree = LeafA | LeafB | Node Tree Tree", "Tree").hash());
  EXPECT_EQ(parse_universe(kTree, "Tree").hash().size(), 16u);
}

TEST(Universe, RoundTripThroughPrinter) {
  for (const char* src : {kTree, kT1T2, kComposite, testing::kTreePrime}) {
    const Universe u = parse_universe(src, parse_declarations(src).back().name);
    const Universe again = parse_universe(print_declarations(u.declarations()), u.root_type().id);
    EXPECT_EQ(u, again) << src;
  }
}

// Brute force over the declaration text: count fields naming the type.
TEST(Universe, BranchingFactorMatchesFieldCountOnRandomFamilies) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string src = testing::random_family_source(rng);
    const auto decls = parse_declarations(src);
    const Universe u = parse_universe(src, "R0");
    for (const TypeDecl& decl : decls) {
      for (const ConstructorDecl& ctor : decl.constructors) {
        const ConstructorId c = u.constructor_by_name(ctor.name);
        for (const TypeDecl& target : decls) {
          const auto expected = std::count_if(ctor.fields.begin(), ctor.fields.end(),
                                              [&](const TypeExpr& f) { return f.name == target.name; });
          EXPECT_EQ(branching_factor(u, c, u.type_by_name(target.name)), static_cast<unsigned>(expected)) << src;
        }
      }
    }
    EXPECT_EQ(u.family_size(), decls.size()) << src;
  }
}

TEST(Universe, SccsOfSmallGraph) {
  // 0 <-> 1 -> 2 -> 3 -> 2, 4 alone
  const auto sccs = strongly_connected_components({{1}, {0, 2}, {3}, {2}, {}});
  std::set<std::set<std::uint32_t>> got;
  for (const auto& c : sccs) got.insert(std::set<std::uint32_t>(c.begin(), c.end()));
  EXPECT_EQ(got, (std::set<std::set<std::uint32_t>>{{0, 1}, {2, 3}, {4}}));
  // Sinks come first.
  EXPECT_EQ(std::set<std::uint32_t>(sccs[0].begin(), sccs[0].end()), (std::set<std::uint32_t>{2, 3}));
}

TEST(Cdg, CompositeTreeEdges) {
  const Universe u = parse_universe(kComposite, "Tree");
  const Cdg cdg = build_cdg(u);
  auto edge = [&](const char* parent, const char* child) -> unsigned {
    const ConstructorId p = u.constructor_by_name(parent);
    const ConstructorId c = u.constructor_by_name(child);
    for (const CdgEdge& e : cdg.edges) {
      if (e.parent == p && e.child == c) return e.multiplicity;
    }
    return 0;
  };
  EXPECT_EQ(edge("LeafA", "Just"), 1u);
  EXPECT_EQ(edge("LeafA", "Nothing"), 1u);
  EXPECT_EQ(edge("Just", "True"), 1u);
  EXPECT_EQ(edge("Just", "False"), 1u);
  EXPECT_EQ(edge("LeafB", "True"), 2u);
  EXPECT_EQ(edge("LeafB", "False"), 2u);
  EXPECT_TRUE(cdg.out_edges(u.constructor_by_name("Node")).empty());
  EXPECT_TRUE(cdg.out_edges(u.constructor_by_name("LeafC")).empty());
  EXPECT_EQ(cdg.edges.size(), 6u);
  EXPECT_EQ(cdg.roots.size(), 4u);
}

TEST(Cdg, NoForeignFieldsMeansNoEdges) {
  EXPECT_TRUE(build_cdg(parse_universe(kTree, "Tree")).edges.empty());
}

TEST(Cdg, TopologicalOrderPutsReferrersFirst) {
  const Universe u = parse_universe(kComposite, "Tree");
  const auto order = foreign_topological_order(u);
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(u.type(order[0]).id, "Maybe[Bool]");
  EXPECT_EQ(u.type(order[1]).id, "Bool");
}

TEST(ProbMap, UniformPerType) {
  const Universe u = parse_universe(kT1T2, "T1");
  const ProbMap p = uniform_probmap(u);
  for (const char* name : {"A", "B", "C", "D"}) EXPECT_DOUBLE_EQ(p[u.constructor_by_name(name)], 0.5);
  const Universe single = parse_universe("data U = OnlyU", "U");
  EXPECT_DOUBLE_EQ(uniform_probmap(single)[ConstructorId{0}], 1.0);
  EXPECT_NO_THROW(validate_probmap(u, p));
}

TEST(ProbMap, ValidationRejectsBadMaps) {
  const Universe u = parse_universe(kTree, "Tree");
  EXPECT_THROW(validate_probmap(u, ProbMap(3, 0.25)), ModelError);
  EXPECT_THROW(validate_probmap(u, testing::probs(u, {{"Node", 0.3}})), ModelError);
  EXPECT_THROW(validate_probmap(u, testing::probs(u, {{"Node", 0.5}, {"LeafA", -0.25}, {"LeafB", 0.5}})),
               ModelError);
  EXPECT_NO_THROW(validate_probmap(u, testing::probs(u, {{"Node", 0.25 + 1e-12}})));
}

TEST(ProbMap, UnreachableTypeMayBeAllZero) {
  const Universe u = parse_universe(kT1T2, "T1");
  ProbMap p = testing::probs(u, {{"A", 1.0}, {"B", 0.0}, {"C", 0.0}, {"D", 0.0}});
  EXPECT_NO_THROW(validate_probmap(u, p));
  const auto reach = reachable_types(u, p);
  EXPECT_TRUE(reach[0]);
  EXPECT_FALSE(reach[1]);
  p[u.constructor_by_name("B")] = 0.5;
  p[u.constructor_by_name("A")] = 0.5;
  EXPECT_THROW(validate_probmap(u, p), ModelError);
}

TEST(ProbMap, NormalizeType) {
  const Universe u = parse_universe(kTree, "Tree");
  ProbMap p(u.constructors().size(), 2.0);
  normalize_type(u, u.root(), p);
  EXPECT_DOUBLE_EQ(p[ConstructorId{0}], 0.25);
  ProbMap zero(u.constructors().size(), 0.0);
  normalize_type(u, u.root(), zero);
  EXPECT_DOUBLE_EQ(zero[ConstructorId{0}], 0.0);
}

}  // namespace
}  // namespace dragen
