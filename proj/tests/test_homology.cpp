#include <gtest/gtest.h>

#include "common.hpp"

using namespace bqa;
using namespace testing_support;

namespace {

AlgebraPtr<PrimeField> dual_numbers() {
  Quiver q = make_quiver(1, {{0, 0}});
  return make_algebra(q, PrimeField(2), {Relation<PrimeField>::monomial_of(PrimeField(2), path_of(q, {0, 0}))});
}

// commutative square 1 -> 2 -> 4, 1 -> 3 -> 4 with a2*a1 = a4*a3
template <class F>
AlgebraPtr<F> commutative_square(F f) {
  Quiver q = make_quiver(4, {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  Relation<F> r;
  r.terms.push_back({f.one(), path_of(q, {0, 1})});
  r.terms.push_back({f.neg(f.one()), path_of(q, {2, 3})});
  return make_algebra(q, f, {r});
}

}  // namespace

TEST(Resolution, DualNumbersArePeriodic) {
  auto alg = dual_numbers();
  auto s = simple(alg, 0);
  auto res = resolve(s, 5);
  EXPECT_FALSE(res.terminated);
  EXPECT_TRUE(euler_audit(res));
  EXPECT_TRUE(exactness_audit(res));
  for (std::size_t k = 1; k <= 4; ++k) {
    EXPECT_EQ(ext(res, s, k).dimension, std::optional<std::size_t>(1));
    EXPECT_TRUE(is_isomorphic(res.syzygy(k), s).status == IsoStatus::Isomorphic);
  }
  PdimEngine<PrimeField> engine(alg);
  EXPECT_TRUE(engine.compute(s).is_infinite());
  EXPECT_EQ(engine.compute(projective(alg, 0)).to_string(), "0");
}

TEST(Ext, SimplesCountArrowsAndRelations) {
  auto s = load_gf2("twelve.qa");
  auto alg = s.module_algebra;
  const Quiver& q = alg->quiver();
  const std::size_t n = q.num_vertices();
  for (std::size_t i = 0; i < n; ++i) {
    auto res = resolve(simple(alg, i), 3);
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t arrows = 0, rels = 0;
      for (std::size_t a = 0; a < q.num_arrows(); ++a)
        if (q.arrow(a).source == i && q.arrow(a).target == j) ++arrows;
      for (const auto& r : alg->relations())
        if (r.monomial().start == i && r.monomial().end == j) ++rels;
      auto sj = simple(alg, j);
      EXPECT_EQ(ext(res, sj, 0).dimension, std::optional<std::size_t>(i == j ? 1 : 0));
      EXPECT_EQ(ext(res, sj, 1).dimension, std::optional<std::size_t>(arrows)) << i << "," << j;
      EXPECT_EQ(ext(res, sj, 2).dimension, std::optional<std::size_t>(rels)) << i << "," << j;
    }
  }
}

TEST(Resolution, AuditsOnFixtureModules) {
  auto s = load_gf2("twelve.qa");
  for (const auto& nm : s.modules) {
    auto res = resolve(nm.module, 6);
    EXPECT_TRUE(exactness_audit(res)) << nm.name;
    EXPECT_TRUE(euler_audit(res)) << nm.name;
    for (const auto& step : res.steps) EXPECT_TRUE(is_radical_step(step)) << nm.name;
  }
}

TEST(Pdim, EngineAgreesWithTerminatedResolutions) {
  auto s = load_gf2("twelve.qa");
  PdimEngine<PrimeField> engine(s.module_algebra);
  for (const auto& nm : s.modules) {
    auto r = engine.compute(nm.module);
    auto res = resolve(nm.module, 8);
    if (res.terminated) {
      ASSERT_TRUE(r.is_finite()) << nm.name;
      EXPECT_EQ(r.value, *res.length()) << nm.name;
    } else {
      EXPECT_FALSE(r.is_finite()) << nm.name;
    }
  }
  EXPECT_EQ(engine.compute(s.module("A1")).value, 3u);
}

TEST(Pdim, CutoffOverride) {
  auto s = load_gf2("twelve.qa");
  PdimOptions opt;
  opt.cutoff = 7;
  PdimEngine<PrimeField> engine(s.module_algebra, opt);
  EXPECT_EQ(engine.cutoff(), 7u);
  PdimEngine<PrimeField> automatic(s.module_algebra);
  EXPECT_EQ(automatic.cutoff(), automatic.digraph().max_finite_label() + 3);
}

TEST(Syzygy, FirstSyzygyOfA1) {
  auto s = load_gf2("twelve.qa");
  auto alg = s.module_algebra;
  auto cover = projective_cover(s.module("A1"));
  auto p4 = projective(alg, alg->quiver().vertex("4"));
  auto a2 = s.module("A2");
  auto target = direct_sum_module(alg, std::vector<Rep>{a2, a2, p4, p4});
  auto iso = is_isomorphic(cover.kernel.module, target);
  ASSERT_EQ(iso.status, IsoStatus::Isomorphic);
  EXPECT_TRUE(verify_isomorphism(*iso.witness));
}

TEST(Pdim, NonMonomialAlgebra) {
  PrimeField f(3);
  auto alg = commutative_square(f);
  EXPECT_FALSE(alg->is_monomial());
  EXPECT_EQ(alg->dimension(), 9u);
  PdimEngine<PrimeField> engine(alg);
  auto r = engine.compute(simple(alg, 0));
  ASSERT_TRUE(r.is_finite());
  EXPECT_EQ(r.value, 2u);
  auto res = resolve(simple(alg, 0), 4);
  EXPECT_EQ(ext(res, simple(alg, 3), 2).dimension, std::optional<std::size_t>(1));
}

TEST(Ext, RationalKronecker) {
  RationalField q;
  Quiver quiv = make_quiver(2, {{0, 1}, {0, 1}});
  auto alg = make_algebra(quiv, q, {});
  auto res = resolve(simple(alg, 0), 2);
  EXPECT_EQ(ext(res, simple(alg, 1), 1).dimension, std::optional<std::size_t>(2));
  EXPECT_EQ(*res.length(), 1u);
  auto sq = commutative_square(q);
  PdimEngine<RationalField> engine(sq);
  EXPECT_EQ(engine.compute(simple(sq, 0)).value, 2u);
}

TEST(Ext, TooShortResolutionIsUnknown) {
  auto alg = dual_numbers();
  auto s = simple(alg, 0);
  auto res = resolve(s, 1);
  EXPECT_FALSE(ext(res, s, 3).dimension.has_value());
}
