#include <gtest/gtest.h>

#include "common.hpp"

using namespace bqa;
using namespace testing_support;
using json = nlohmann::json;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    io::parse(text);
  } catch (const io::ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Parse, ErrorsCarryPositions) {
  EXPECT_EQ(error_line("field GF(2);\nvertices 1, 2;\narrows a: 1 -> 3;\n"), 3u);
  EXPECT_EQ(error_line("field GF(4);\n"), 1u);
  EXPECT_EQ(error_line("field GF(2);\nvertices 1;\n\nmodule M = proj(9);\n"), 4u);
  EXPECT_EQ(error_line("field GF(2);\nvertices 1;\nrepeat k = 0 .. 2 { , v${k}\n"), 3u);
  EXPECT_EQ(error_line("field GF(2);\nvertices 1, 2;\narrows a: 1 -> 2;\nmodule M {\n  dims 1: 1, 2: 1;\n  a = [[1, 1]];\n}\n"),
            6u);
  try {
    io::parse("field GF(2);\nvertices 1;\n  @\n");
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 3u);
  }
}

TEST(Parse, ParametersAndRepeats) {
  auto one = load_gf2("chain.qa");
  auto two = load_gf2("chain.qa", {{"n", 2}});
  EXPECT_EQ(one.params.at("n"), 1);
  EXPECT_EQ(two.params.at("n"), 2);
  EXPECT_EQ(two.quiver.num_vertices(), one.quiver.num_vertices() + 1);
  EXPECT_TRUE(two.quiver.find_vertex("a3").has_value());
  EXPECT_NE(two.module("A_a3").total_dim(), 0u);
  EXPECT_EQ(io::load_candidates(two, "given").size(), two.quiver.num_vertices());
  EXPECT_THROW(load_gf2("twelve.qa", {{"n", 2}}), io::ParseError);
}

TEST(Parse, RightModulesUseTheOppositeAlgebra) {
  auto s = load_gf2("chain.qa");
  ASSERT_TRUE(s.right_side);
  const auto& q = s.algebra->quiver();
  const auto& op = s.module_algebra->quiver();
  const auto a = q.arrow_id("alpha0");
  EXPECT_EQ(op.arrow(a).source, q.arrow(a).target);
  EXPECT_EQ(s.module("A_2").total_dim(), 1u);
  auto l = load_gf2("twelve.qa");
  EXPECT_FALSE(l.right_side);
  EXPECT_EQ(l.algebra.get(), l.module_algebra.get());
}

TEST(Parse, RationalField) {
  auto any = io::parse(
      "field Q;\nvertices 1, 2;\narrows a: 1 -> 2, b: 1 -> 2;\n"
      "module M {\n  dims 1: 1, 2: 1;\n  a = [[1/2]];\n  b = [[-3/4]];\n}\n");
  ASSERT_TRUE(std::holds_alternative<io::SpecFile<RationalField>>(any));
  const auto& s = std::get<io::SpecFile<RationalField>>(any);
  EXPECT_EQ(s.module("M").arrow_map(0)(0, 0), s.field.from_fraction(1, 2));
  auto back = io::parse(io::serialize(any));
  EXPECT_TRUE(std::get<io::SpecFile<RationalField>>(back).same_structure(s));
}

TEST(Serialize, RoundTripsFixtures) {
  for (const auto* name : {"twelve.qa", "chain.qa", "twelve-mutant.qa", "loop.qa"}) {
    auto s = load_gf2(name);
    auto text = io::serialize(s);
    auto again = std::get<Spec>(io::parse(text));
    EXPECT_TRUE(again.same_structure(s)) << name;
    EXPECT_EQ(io::serialize(again), text) << name;
  }
}

TEST(Report, RecheckAcceptsAndDetectsTampering) {
  auto s = load_gf2("twelve.qa");
  auto alg = s.module_algebra;
  auto res = resolve(s.module("A1"), 6);
  auto doc = io::report("resolve", io::algebra_json(*alg), json::object(), json::object(),
                        json::array({io::resolution_json(res)}), 0.0);
  auto text = doc.dump();
  auto ok = io::recheck(alg, json::parse(text));
  EXPECT_TRUE(ok.ok());
  EXPECT_GT(ok.checked, 0u);

  // flip one entry of a differential
  auto bad = json::parse(text);
  auto& steps = bad["certificates"][0]["steps"];
  bool flipped = false;
  for (std::size_t k = 1; k < steps.size() && !flipped; ++k)
    for (auto& m : steps[k]["map"])
      if (m["rows"].get<std::size_t>() && m["cols"].get<std::size_t>()) {
        auto& e = m["entries"][0][0];
        e = e.get<std::string>() == "0" ? "1" : "0";
        flipped = true;
        break;
      }
  ASSERT_TRUE(flipped);
  EXPECT_FALSE(io::recheck(alg, bad).ok());

  auto wrong_schema = json::parse(text);
  wrong_schema["schema"] = 99;
  EXPECT_FALSE(io::recheck(alg, wrong_schema).ok());
}

TEST(Report, ApproximationCertificateRechecks) {
  auto s = load_gf2("twelve.qa");
  PdimEngine<PrimeField> engine(s.module_algebra);
  auto cert = verify_certificate(engine, io::load_candidates(s, "given"));
  auto doc = io::report("verify-approx", io::algebra_json(*s.module_algebra), json::object(), json::object(),
                        json::array({io::approx_json(cert, true)}), 0.0);
  auto rep = io::recheck(s.module_algebra, json::parse(doc.dump()));
  EXPECT_TRUE(rep.ok()) << (rep.failures.empty() ? "" : rep.failures.front());
  EXPECT_GT(rep.checked, 12u);
}

TEST(Graph, ProjectiveAtSeven) {
  auto s = load_gf2("twelve.qa");
  const auto& q = s.module_algebra->quiver();
  auto g = io::module_graph(projective(s.module_algebra, q.vertex("7")));
  ASSERT_EQ(g.layers.size(), 2u);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(q.arrow(g.edges[0].arrow).name, "tau");
  EXPECT_EQ(g.nodes[g.edges[0].from].vertex, q.vertex("7"));
  EXPECT_EQ(g.nodes[g.edges[0].to].vertex, q.vertex("8"));
  EXPECT_NE(io::to_dot(g, q).find("label=\"tau\""), std::string::npos);
  EXPECT_NE(io::to_ascii(g, q).find("--tau-->"), std::string::npos);
}

TEST(Graph, EdgesMaySkipLayers) {
  auto s = load_gf2("chain.qa");
  const auto& q = s.module_algebra->quiver();
  auto g = io::module_graph(s.module("A_b"));
  ASSERT_EQ(g.layers.size(), 3u);
  bool skip = false;
  for (const auto& e : g.edges)
    if (q.arrow(e.arrow).name == "alpha1") {
      EXPECT_EQ(g.nodes[e.from].layer, 0u);
      EXPECT_EQ(g.nodes[e.to].layer, 2u);
      EXPECT_EQ(g.nodes[e.from].vertex, q.vertex("a1"));
      EXPECT_EQ(g.nodes[e.to].vertex, q.vertex("a0"));
      skip = true;
    }
  EXPECT_TRUE(skip);
}
