#include <gtest/gtest.h>

#include <functional>

#include "common.hpp"

using namespace bqa;
using namespace testing_support;

namespace {

AlgebraPtr<PrimeField> linear_a3(bool with_relation) {
  Quiver q = make_quiver(3, {{0, 1}, {1, 2}});
  std::vector<Relation<PrimeField>> rels;
  if (with_relation) rels.push_back(Relation<PrimeField>::monomial_of(PrimeField(2), path_of(q, {0, 1})));
  return make_algebra(q, PrimeField(2), rels);
}

AlgebraPtr<PrimeField> loop_algebra(std::size_t power) {
  Quiver q = make_quiver(1, {{0, 0}});
  std::vector<std::size_t> word(power, 0);
  return make_algebra(q, PrimeField(2), {Relation<PrimeField>::monomial_of(PrimeField(2), path_of(q, word))});
}

// Counts arrow words avoiding every relation as a consecutive block, without
// using the algebra's own path enumeration.
std::size_t naive_dimension(const BoundAlgebra<PrimeField>& alg, std::size_t max_len) {
  const Quiver& q = alg.quiver();
  std::vector<std::vector<std::size_t>> rels;
  for (const auto& r : alg.relations()) rels.push_back(r.monomial().arrows);
  std::size_t count = q.num_vertices();
  std::vector<std::size_t> word;
  std::function<void()> grow = [&]() {
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      if (!word.empty() && q.arrow(word.back()).target != q.arrow(a).source) continue;
      word.push_back(a);
      bool ok = true;
      for (const auto& r : rels)
        if (r.size() <= word.size() &&
            std::equal(r.begin(), r.end(), word.end() - static_cast<long>(r.size())))
          ok = false;
      if (ok) {
        ++count;
        if (word.size() < max_len) grow();
      }
      word.pop_back();
    }
  };
  grow();
  return count;
}

}  // namespace

TEST(Quiver, NamesAndErrors) {
  Quiver q;
  q.add_vertex("1");
  q.add_vertex("2");
  q.add_arrow("a", "1", "2");
  EXPECT_THROW(q.add_vertex("1"), QuiverError);
  EXPECT_THROW(q.add_arrow("a", 0, 1), QuiverError);
  EXPECT_THROW(q.add_arrow("b", 0, 7), QuiverError);
  EXPECT_THROW(q.add_vertex("a"), QuiverError);
  EXPECT_EQ(q.arrow_id("a"), 0u);
  EXPECT_FALSE(q.find_vertex("3").has_value());
}

TEST(Path, CompositionReadsRightToLeft) {
  Quiver q = make_quiver(3, {{0, 1}, {1, 2}});
  Path a = Path::of_arrow(q, 0), b = Path::of_arrow(q, 1);
  auto ba = compose(b, a);
  ASSERT_TRUE(ba.has_value());
  EXPECT_EQ(ba->start, 0u);
  EXPECT_EQ(ba->end, 2u);
  EXPECT_EQ(path_to_string(q, *ba), "a2*a1");
  EXPECT_FALSE(compose(a, b).has_value());
  EXPECT_EQ(path_to_string(q, Path::trivial(1)), "e_2");
}

TEST(Algebra, DimensionsOfSmallAlgebras) {
  EXPECT_EQ(linear_a3(false)->dimension(), 6u);
  EXPECT_EQ(linear_a3(true)->dimension(), 5u);
  EXPECT_EQ(loop_algebra(2)->dimension(), 2u);
  EXPECT_EQ(loop_algebra(4)->dimension(), 4u);
}

TEST(Algebra, InfiniteDimensionalIsRejected) {
  Quiver q = make_quiver(1, {{0, 0}});
  EXPECT_THROW(make_algebra(q, PrimeField(2), {}, 100), AlgebraError);
}

TEST(Algebra, RelationValidation) {
  Quiver q = make_quiver(3, {{0, 1}, {1, 2}});
  auto bad = Relation<PrimeField>::monomial_of(PrimeField(2), Path::of_arrow(q, 0));
  EXPECT_THROW(make_algebra(q, PrimeField(2), {bad}), AlgebraError);
}

TEST(Algebra, ParsePathUsesProductConvention) {
  auto alg = linear_a3(false);
  Path p = alg->parse_path("a2*a1");
  EXPECT_EQ(p.start, 0u);
  EXPECT_EQ(p.end, 2u);
  EXPECT_THROW(alg->parse_path("a1*a2"), AlgebraError);
  EXPECT_TRUE(alg->parse_path("e_2").is_trivial());
}

TEST(Algebra, NormalBasisMatchesWordCount) {
  auto s = load_gf2("twelve.qa");
  EXPECT_EQ(s.algebra->dimension(), naive_dimension(*s.algebra, 12));
  EXPECT_EQ(s.algebra->dimension(), 33u);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 30; ++t) {
    auto alg = random_monomial_algebra(rng);
    EXPECT_EQ(alg->dimension(), naive_dimension(*alg, 40));
  }
}

TEST(Algebra, MinimalAnnihilators) {
  auto alg = linear_a3(true);
  auto ann = alg->min_annihilators(Path::of_arrow(alg->quiver(), 0));
  ASSERT_EQ(ann.size(), 1u);
  EXPECT_EQ(alg->path_name(ann[0]), "a2");
  auto loop = loop_algebra(2);
  auto l = loop->min_annihilators(Path::of_arrow(loop->quiver(), 0));
  ASSERT_EQ(l.size(), 1u);
  EXPECT_EQ(loop->path_name(l[0]), "a1");
  EXPECT_TRUE(alg->min_annihilators(Path::trivial(0)).empty());
}

TEST(Algebra, OppositeReversesArrowsAndRelations) {
  auto s = load_gf2("twelve.qa");
  auto op = s.algebra->opposite().first;
  EXPECT_EQ(op.dimension(), s.algebra->dimension());
  for (std::size_t a = 0; a < op.num_arrows(); ++a) {
    EXPECT_EQ(op.quiver().arrow(a).source, s.algebra->quiver().arrow(a).target);
    EXPECT_EQ(op.quiver().arrow(a).name, s.algebra->quiver().arrow(a).name);
  }
  auto back = op.opposite().first;
  for (std::size_t v = 0; v < back.num_vertices(); ++v)
    EXPECT_EQ(back.normal_basis_at(v).size(), s.algebra->normal_basis_at(v).size());
}

TEST(SyzygyDigraph, SmallCases) {
  auto loop = loop_algebra(2);
  auto g = syzygy_digraph(*loop);
  EXPECT_EQ(g.label_of(Path::trivial(0)), std::optional<std::size_t>(0));
  EXPECT_FALSE(g.label_of(Path::of_arrow(loop->quiver(), 0)).has_value());

  auto a3 = linear_a3(true);
  auto h = syzygy_digraph(*a3);
  EXPECT_EQ(h.label_of(Path::of_arrow(a3->quiver(), 0)), std::optional<std::size_t>(1));
  EXPECT_EQ(h.label_of(Path::of_arrow(a3->quiver(), 1)), std::optional<std::size_t>(0));

  auto free = linear_a3(false);
  auto k = syzygy_digraph(*free);
  for (std::size_t i = 0; i < k.nodes.size(); ++i) EXPECT_EQ(k.label[i], std::optional<std::size_t>(0));
}

TEST(SyzygyDigraph, LongestPathLabels) {
  // 0 -> 1 -> 2 and a cycle 3 <-> 4 reachable from 0
  std::vector<std::vector<std::size_t>> adj{{1, 3}, {2}, {}, {4}, {3}};
  auto l = longest_path_labels(adj);
  EXPECT_FALSE(l[0].has_value());
  EXPECT_EQ(l[1], std::optional<std::size_t>(1));
  EXPECT_EQ(l[2], std::optional<std::size_t>(0));
  EXPECT_FALSE(l[3].has_value());
  auto scc = detail::strongly_connected_components(adj);
  EXPECT_EQ(scc.size(), 4u);
}
