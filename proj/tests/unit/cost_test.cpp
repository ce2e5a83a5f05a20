#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dragen/cost.hpp"
#include "dragen/error.hpp"
#include "dragen/prediction.hpp"
#include "oracles.hpp"

namespace dragen {
namespace {

using testing::probs;

TEST(ChiSquare, Examples) {
  EXPECT_DOUBLE_EQ(chi_square(std::vector<double>{3, 5}, std::vector<double>{3, 5}), 0.0);
  EXPECT_DOUBLE_EQ(chi_square(std::vector<double>{2, 4}, std::vector<double>{4, 4}), 1.0);
  EXPECT_DOUBLE_EQ(chi_square(std::vector<double>{0, 8}, std::vector<double>{4, 4}), 8.0);
}

TEST(ChiSquare, RejectsBadInput) {
  EXPECT_THROW(chi_square(std::vector<double>{1}, std::vector<double>{1, 2}), ModelError);
  EXPECT_THROW(chi_square(std::vector<double>{1}, std::vector<double>{0}), ModelError);
  EXPECT_THROW(chi_square(std::vector<double>{1}, std::vector<double>{-2}), ModelError);
}

TEST(ChiSquare, NonNegativeOnRandomInput) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.01, 50.0);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> a(5), b(5);
    for (int k = 0; k < 5; ++k) a[k] = d(rng), b[k] = d(rng);
    EXPECT_GE(chi_square(a, b), 0.0);
    EXPECT_EQ(chi_square(b, b), 0.0);
  }
}

TEST(UniformCost, MatchesHandSubstitution) {
  const Universe u = parse_universe(testing::kTree, "Tree");
  const CostFunction cost = uniform_cost(u);
  const ProbMap p = probs(u, {{"LeafA", 0.2}, {"LeafB", 0.2}, {"LeafC", 0.1}, {"Node", 0.5}});
  const PredictionReport r = predict_constructors(u, p, 10);
  double expected = 0.0;
  for (std::size_t c = 0; c < 4; ++c) expected += std::pow(r.per_constructor[c].total - 10.0, 2) / 10.0;
  EXPECT_DOUBLE_EQ(cost(10, p), expected);
  // Table 1 uniform row, substituted directly.
  const double table = (std::pow(5.26 - 10, 2) * 2 + std::pow(5.21 - 10, 2) + std::pow(14.73 - 10, 2)) / 10.0;
  EXPECT_NEAR(table, 9.02522, 1e-9);
}

TEST(UniformCost, DegenerateMapCostsMore) {
  const Universe u = parse_universe(testing::kTree, "Tree");
  const CostFunction cost = uniform_cost(u);
  const ProbMap balanced = probs(u, {{"LeafA", 0.16}, {"LeafB", 0.16}, {"LeafC", 0.16}, {"Node", 0.52}});
  const ProbMap degenerate = probs(u, {{"LeafA", 1.0}, {"LeafB", 0.0}, {"LeafC", 0.0}, {"Node", 0.0}});
  EXPECT_GT(cost(10, degenerate), cost(10, balanced));
}

TEST(UniformCost, Purity) {
  const Universe u = parse_universe(testing::kT1T2, "T1");
  const CostFunction cost = uniform_cost(u);
  const ProbMap p = probs(u, {{"A", 0.4}, {"B", 0.6}});
  const double first = cost(7, p);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(cost(7, p), first);
}

TEST(WeightedCost, AllOnesIsUniformBitForBit) {
  std::mt19937_64 rng(9);
  for (const auto& [src, root] : {std::pair{testing::kTree, "Tree"}, std::pair{testing::kT1T2, "T1"},
                                  std::pair{testing::kTreeDoublePrime, "Tree''"}}) {
    const Universe u = parse_universe(src, root);
    WeightSpec spec;
    // Listed in reverse to check that order does not matter.
    const auto ids = u.family_constructors();
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) spec.weights.emplace_back(*it, 1.0);
    const CostFunction weighted = weighted_cost(u, spec);
    const CostFunction uniform = uniform_cost(u);
    for (int trial = 0; trial < 50; ++trial) {
      const ProbMap p = testing::random_probmap(u, rng);
      const unsigned n = 1 + trial % 12;
      EXPECT_EQ(weighted(n, p), uniform(n, p));
    }
  }
}

TEST(WeightedCost, UnlistedConstructorsDoNotContribute) {
  const Universe u = parse_universe(testing::kTree, "Tree");
  const CostFunction cost = weighted_cost(u, WeightSpec{{{u.constructor_by_name("LeafA"), 1.0},
                                                         {u.constructor_by_name("Node"), 3.0}}});
  const ProbMap p = probs(u, {{"LeafA", 0.2}, {"LeafB", 0.1}, {"LeafC", 0.2}, {"Node", 0.5}});
  const PredictionReport r = predict_constructors(u, p, 10);
  const double expected = std::pow(r.total(u.constructor_by_name("LeafA")) - 10, 2) / 10 +
                          std::pow(r.total(u.constructor_by_name("Node")) - 30, 2) / 30;
  EXPECT_DOUBLE_EQ(cost(10, p), expected);
  EXPECT_EQ(cost.targets().size(), 2u);
}

TEST(WeightedCost, RejectsBadSpecs) {
  const Universe u = parse_universe(testing::kComposite, "Tree");
  const ConstructorId leaf = u.constructor_by_name("LeafA");
  EXPECT_THROW(weighted_cost(u, WeightSpec{}), ModelError);
  EXPECT_THROW(weighted_cost(u, WeightSpec{{{leaf, 0.0}}}), ModelError);
  EXPECT_THROW(weighted_cost(u, WeightSpec{{{leaf, 1.0}, {leaf, 2.0}}}), ModelError);
  EXPECT_THROW(weighted_cost(u, WeightSpec{{{u.constructor_by_name("True"), 1.0}}}), ModelError);
}

TEST(Exclusion, OnlyPinsEverythingElse) {
  const Universe u = parse_universe(testing::kTree, "Tree");
  const std::vector<ConstructorId> keep{u.constructor_by_name("LeafA"), u.constructor_by_name("Node")};
  const CostFunction cost = only_cost(u, keep);
  EXPECT_TRUE(cost.is_pinned(u.constructor_by_name("LeafB")));
  EXPECT_TRUE(cost.is_pinned(u.constructor_by_name("LeafC")));
  EXPECT_FALSE(cost.is_pinned(u.constructor_by_name("Node")));
  const ProbMap p = cost.constrain(uniform_probmap(u));
  EXPECT_DOUBLE_EQ(p[u.constructor_by_name("LeafB")], 0.0);
  EXPECT_DOUBLE_EQ(p[u.constructor_by_name("LeafA")], 0.5);
  EXPECT_EQ(cost.targets().size(), 2u);
}

TEST(Exclusion, EmptyWithoutIsUniform) {
  const Universe u = parse_universe(testing::kTree, "Tree");
  const CostFunction without = without_cost(u, {});
  const CostFunction uniform = uniform_cost(u);
  const ProbMap p = probs(u, {{"LeafA", 0.3}, {"LeafB", 0.1}, {"LeafC", 0.1}, {"Node", 0.5}});
  EXPECT_EQ(without(10, p), uniform(10, p));
  EXPECT_TRUE(without.pinned().empty());
}

TEST(Exclusion, RemovingAllTerminalsIsAnError) {
  const Universe u = parse_universe(testing::kTree, "Tree");
  const std::vector<ConstructorId> leaves{u.constructor_by_name("LeafA"), u.constructor_by_name("LeafB"),
                                          u.constructor_by_name("LeafC")};
  EXPECT_THROW(without_cost(u, leaves), ModelError);
  EXPECT_THROW(only_cost(u, std::vector<ConstructorId>{u.constructor_by_name("Node")}), ModelError);
  EXPECT_THROW(without_cost(u, std::vector<ConstructorId>{u.constructor_by_name("Node"), leaves[0], leaves[1],
                                                          leaves[2]}),
               ModelError);
}

TEST(Exclusion, TypeExclusionPropagatesThroughFields) {
  const Universe u = parse_universe(testing::kT1T2, "T1");
  const std::vector<TypeId> drop{u.type_by_name("T2")};
  const CostFunction cost = without_types_cost(u, drop);
  EXPECT_TRUE(cost.is_pinned(u.constructor_by_name("B")));
  EXPECT_TRUE(cost.is_pinned(u.constructor_by_name("C")));
  EXPECT_FALSE(cost.is_pinned(u.constructor_by_name("A")));
  ASSERT_EQ(cost.excluded_types().size(), 1u);
  const ProbMap p = cost.constrain(uniform_probmap(u));
  EXPECT_DOUBLE_EQ(p[u.constructor_by_name("A")], 1.0);
  EXPECT_NO_THROW(validate_probmap(u, p));
  const PredictionReport r = predict_constructors(u, p, 5);
  EXPECT_DOUBLE_EQ(r.total(u.constructor_by_name("A")), 1.0);
  EXPECT_DOUBLE_EQ(r.total(u.constructor_by_name("B")), 0.0);
}

TEST(Exclusion, OnlyTypesOfWholeFamilyIsUniform) {
  const Universe u = parse_universe(testing::kT1T2, "T1");
  const CostFunction only = only_types_cost(u, u.family());
  const ProbMap p = probs(u, {{"A", 0.35}, {"B", 0.65}, {"C", 0.5}, {"D", 0.5}});
  EXPECT_EQ(only(6, p), uniform_cost(u)(6, p));
}

TEST(Exclusion, RootCannotBeExcluded) {
  const Universe u = parse_universe(testing::kT1T2, "T1");
  EXPECT_THROW(only_types_cost(u, std::vector<TypeId>{u.type_by_name("T2")}), ModelError);
  EXPECT_THROW(without_types_cost(u, std::vector<TypeId>{u.root()}), ModelError);
}

TEST(Exclusion, DisconnectingTheFamilyIsAnError) {
  // Every constructor of T2 needs T3, so dropping T3 leaves T2 empty.
  const Universe u = parse_universe("data T1 = A | B T2\ndata T2 = C T3 | D T1 T3\ndata T3 = E | F T1", "T1");
  try {
    without_types_cost(u, std::vector<TypeId>{u.type_by_name("T3")});
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("disconnects"), std::string::npos) << e.what();
  }
}

TEST(ParseCost, Syntax) {
  const Universe u = parse_universe(testing::kTree, "Tree");
  EXPECT_EQ(parse_cost(u, "uniform").description(), "uniform");
  EXPECT_EQ(parse_cost(u, " weighted(Tree.LeafA=3, LeafB=1,Tree.LeafC=1) ").targets().size(), 3u);
  EXPECT_EQ(parse_cost(u, "only(Tree.LeafA,Tree.Node)").pinned().size(), 2u);
  EXPECT_EQ(parse_cost(u, "without(LeafC)").pinned().size(), 1u);
  const Universe t = parse_universe(testing::kT1T2, "T1");
  EXPECT_EQ(parse_cost(t, "onlyTypes(T1,T2)").pinned().size(), 0u);
  EXPECT_EQ(parse_cost(t, "withoutTypes(T2)").pinned().size(), 3u);
}

TEST(ParseCost, Errors) {
  const Universe u = parse_universe(testing::kTree, "Tree");
  EXPECT_THROW(parse_cost(u, "weighted(LeafA=3"), ParseError);
  EXPECT_THROW(parse_cost(u, "weighted(LeafA)"), ParseError);
  EXPECT_THROW(parse_cost(u, "weighted(LeafA=x)"), ParseError);
  EXPECT_THROW(parse_cost(u, "only(LeafA,,Node)"), ParseError);
  EXPECT_THROW(parse_cost(u, "uniform(LeafA)"), ParseError);
  EXPECT_THROW(parse_cost(u, "fancy"), ParseError);
  EXPECT_THROW(parse_cost(u, "only(Nope)"), ModelError);
  EXPECT_THROW(parse_cost(u, "withoutTypes(Nope)"), ModelError);
}

}  // namespace
}  // namespace dragen
