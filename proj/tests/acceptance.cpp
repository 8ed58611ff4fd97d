// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>

#include "common.hpp"

using namespace bqa;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Criterion 4 fails on the shipped candidate set (see README).
const std::set<int> kKnownFailures{4};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t index_of_vertex(const std::vector<Candidate<PrimeField>>& c, std::size_t v) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i].vertex == v) return i;
  throw std::logic_error("no candidate at vertex");
}

Outcome headline() {
  auto s = load_gf2("twelve.qa");
  PdimEngine<PrimeField> engine(s.module_algebra);
  auto cert = verify_certificate(engine, io::load_candidates(s, "given"));
  if (cert.verdict != Verdict::Verified) return {false, "certificate " + std::string(to_string(cert.verdict)) + ": " + cert.reason};
  auto p = engine.compute(s.module("A1"));
  auto res = resolve(s.module("A1"), 5);
  const bool direct = res.terminated && *res.length() == 3;
  const auto d = findim_formula(cert);
  const bool ok = p.is_finite() && p.value == 3 && direct && d == 3;
  return {ok, "verified; pdim A1 = " + p.to_string() + " (resolution " +
                  (res.terminated ? std::to_string(*res.length()) : std::string("longer")) + "); fin.dim = Fin.dim = " +
                  std::to_string(d)};
}

Outcome syzygy_structure() {
  auto s = load_gf2("twelve.qa");
  auto alg = s.module_algebra;
  auto omega = projective_cover(s.module("A1")).kernel.module;
  auto a2 = s.module("A2");
  auto p4 = projective(alg, alg->quiver().vertex("4"));
  auto target = direct_sum_module(alg, std::vector<Rep>{a2, a2, p4, p4});
  auto iso = is_isomorphic(omega, target);
  const bool ok = iso.status == IsoStatus::Isomorphic && iso.witness && verify_isomorphism(*iso.witness);
  return {ok, std::string("Omega^1(A1) vs (P2/nu)^2 + P4^2: ") + to_string(iso.status) + (ok ? ", witness verified" : "")};
}

Outcome ext_certificate() {
  auto s = load_gf2("twelve.qa");
  PdimEngine<PrimeField> engine(s.module_algebra);
  auto cands = io::load_candidates(s, "given");
  auto cert = verify_certificate(engine, cands);
  const auto v1 = s.module_algebra->quiver().vertex("1");
  const auto& k = cert.kernels.at(index_of_vertex(cert.candidates, v1)).module;
  std::size_t zeros = 0;
  std::string bad;
  for (const auto& c : cert.candidates) {
    auto e = ext(resolve(c.module, 2), k, 1);
    if (e.dimension == std::optional<std::size_t>(0)) ++zeros;
    else bad += " " + c.name;
  }
  return {zeros == cert.candidates.size(),
          "Ext^1(A_j, K) = 0 for " + std::to_string(zeros) + "/" + std::to_string(cert.candidates.size()) +
              " candidates, dim K = " + std::to_string(k.total_dim()) + (bad.empty() ? "" : "; nonzero:" + bad)};
}

Outcome right_side_example() {
  bool ok = true;
  std::string detail;
  for (long long n : {1, 2}) {
    const auto t0 = std::chrono::steady_clock::now();
    auto s = load_gf2("chain.qa", {{"n", n}});
    PdimEngine<PrimeField> engine(s.module_algebra);
    auto cert = verify_certificate(engine, io::load_candidates(s, "given"));
    auto pd = [&](const std::string& name) { return engine.compute(s.module(name)).to_string(); };
    const bool verified = cert.verdict == Verdict::Verified;
    const bool pdim1 = pd("A_1") == "1";
    const bool fin = verified && findim_formula(cert) == 2;
    const double secs = seconds_since(t0);
    ok = ok && verified && pdim1 && fin && secs < 60;
    detail += "n=" + std::to_string(n) + ": " + to_string(cert.verdict) + (verified ? "" : " (" + cert.reason + ")") +
              ", pdim A_1 = " + pd("A_1") + ", pdim A_a0 = " + pd("A_a0") + ", pdim A_b = " + pd("A_b") + "; ";
  }
  return {ok, detail};
}

Outcome left_side_supremum() {
  const long long n = 1;
  auto s = load_gf2("chain.qa", {{"n", n}});
  auto alg = s.algebra;  // left modules
  PdimEngine<PrimeField> engine(alg);
  const auto& g = engine.digraph();
  std::size_t sup = 0, checked = 0;
  std::string mismatch;
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    if (!g.label[k]) continue;
    auto res = resolve(path_module(alg, g.nodes[k]), *g.label[k] + 1);
    if (!res.terminated || *res.length() != *g.label[k]) mismatch += " " + alg->path_name(g.nodes[k]);
    sup = std::max(sup, *g.label[k]);
    ++checked;
  }
  for (std::size_t v = 0; v < alg->num_vertices(); ++v) {
    auto p = engine.compute(simple(alg, v));
    if (!p.is_finite()) continue;
    auto res = resolve(simple(alg, v), p.value + 1);
    if (!res.terminated || *res.length() != p.value) mismatch += " S_" + alg->quiver().vertex_name(v);
    sup = std::max(sup, p.value);
    ++checked;
  }
  const bool ok = mismatch.empty() && sup <= static_cast<std::size_t>(n + 1);
  return {ok, "sup of finite pdim over " + std::to_string(checked) + " cyclic path modules and simples = " +
                  std::to_string(sup) + " <= n+1 = " + std::to_string(n + 1) +
                  (sup < static_cast<std::size_t>(n + 1) ? " (bound check only: no cyclic or simple witness of pdim n+1)" : "") +
                  (mismatch.empty() ? "" : "; resolution mismatch:" + mismatch)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::size_t paths = 0, finite = 0, infinite = 0, mismatches = 0;
  std::string first;
  for (int t = 0; t < 50; ++t) {
    auto tally = digraph_oracle(random_monomial_algebra(rng));
    paths += tally.paths;
    finite += tally.finite;
    infinite += tally.infinite;
    mismatches += tally.mismatches.size();
    if (first.empty() && !tally.mismatches.empty()) first = "algebra " + std::to_string(t) + ": " + tally.mismatches.front();
  }
  return {mismatches == 0, "50 algebras, " + std::to_string(paths) + " paths (" + std::to_string(finite) + " finite, " +
                               std::to_string(infinite) + " infinite), " + std::to_string(mismatches) + " mismatches" +
                               (first.empty() ? "" : "; " + first)};
}

BruteForceReport<PrimeField> cross_check(const std::string& file, const std::string& set, std::size_t* corpus_size,
                                         bool* truncated, std::uint64_t* enumerated) {
  auto s = load_gf2(file);
  PdimEngine<PrimeField> engine(s.module_algebra);
  auto cert = verify_certificate(engine, io::load_candidates(s, set));
  auto corpus = filt_corpus(cert.candidates, 3, {}, truncated);
  *corpus_size = corpus.size();
  auto rep = brute_force_approx_check(cert.candidates, corpus, engine);
  *enumerated = 0;
  enumerate_representations(s.module_algebra, 6, [&](const Rep& x) {
    brute_force_check_one("enumerated[" + std::to_string((*enumerated)++) + "]", x, cert.candidates, engine, rep);
  });
  return rep;
}

Outcome brute_force_cross_validation() {
  std::size_t corpus = 0, corpus_bad = 0;
  bool truncated = false, truncated_bad = false;
  std::uint64_t enumerated = 0, enumerated_bad = 0;
  auto good = cross_check("twelve.qa", "given", &corpus, &truncated, &enumerated);
  auto bad = cross_check("twelve-mutant.qa", "broken", &corpus_bad, &truncated_bad, &enumerated_bad);
  const bool ok = good.counterexamples.empty() && good.inconclusive.empty() && !truncated && !bad.counterexamples.empty();
  return {ok, "given set: corpus " + std::to_string(corpus) + " + " + std::to_string(enumerated) +
                  " enumerated, " + std::to_string(good.counterexamples.size()) + " counterexamples, " +
                  std::to_string(good.inconclusive.size()) + " inconclusive" + (truncated ? ", corpus truncated" : "") +
                  "; mutation: " + std::to_string(bad.counterexamples.size()) + " counterexamples" +
                  (bad.counterexamples.empty() ? "" : " (first: " + bad.counterexamples.front().module_name + ")")};
}

Outcome invariant_suite() {
  std::size_t checks = 0;
  std::vector<std::string> failures;
  for (const auto* name : {"twelve.qa", "chain.qa", "twelve-mutant.qa", "loop.qa"}) {
    auto s = load_gf2(name);
    PdimEngine<PrimeField> engine(s.module_algebra);
    for (std::size_t k = 0; k < s.modules.size(); ++k) {
      ++checks;
      const auto& m = s.modules[k].module;
      for (const auto& f : invariant_failures(engine, m, s.modules[(k + 1) % s.modules.size()].module))
        failures.push_back(std::string(name) + " " + s.modules[k].name + ": " + f);
      if (!round_trips(s, m)) failures.push_back(std::string(name) + " " + s.modules[k].name + ": round trip");
    }
    auto again = std::get<Spec>(io::parse(io::serialize(s)));
    if (!again.same_structure(s)) failures.push_back(std::string(name) + ": file round trip");
  }
  std::mt19937_64 rng(99);
  auto s = load_gf2("twelve.qa");
  PdimEngine<PrimeField> engine12(s.module_algebra);
  for (int t = 0; t < 50; ++t) {
    ++checks;
    auto m = random_module(s.module_algebra, rng);
    auto n = random_module(s.module_algebra, rng);
    for (const auto& f : invariant_failures(engine12, m, n)) failures.push_back("twelve random " + std::to_string(t) + ": " + f);
    if (!round_trips(s, m)) failures.push_back("twelve random " + std::to_string(t) + ": round trip");
  }
  for (int t = 0; t < 50; ++t) {
    ++checks;
    auto alg = random_monomial_algebra(rng);
    while (alg->dimension() > 24) alg = random_monomial_algebra(rng);
    PdimEngine<PrimeField> engine(alg);
    auto m = random_module(alg, rng);
    auto n = random_module(alg, rng);
    for (const auto& f : invariant_failures(engine, m, n)) failures.push_back("algebra " + std::to_string(t) + ": " + f);
  }
  return {failures.empty(), std::to_string(checks) + " modules, " + std::to_string(failures.size()) + " failures" +
                                (failures.empty() ? "" : "; first: " + failures.front())};
}

Outcome lemma_constructor() {
  auto s = load_gf2("twelve.qa");
  auto cog = s.module("I");
  PdimEngine<PrimeField> engine(s.module_algebra);
  auto cc = verify_cogenerator(engine, io::load_candidates(s, "given"), cog);
  if (!cc.verified) return {false, "cogenerator not verified: " + cc.reason};
  auto degenerate = degenerate_square(Morphism<PrimeField>::identity(s.module("A2")));
  auto d_out = lemma_construct(degenerate, cog);
  auto d_err = audit_lemma_output(degenerate, d_out);
  auto x = nonsplit_extension(s.module("A1"), s.module("A2"));
  if (!x) return {false, "no nonsplit extension of A1 by A2"};
  auto in = comparison_square(x->inclusion);
  auto in_err = audit_lemma_input(in);
  auto out = lemma_construct(in, cog);
  auto out_err = audit_lemma_output(in, out);
  const bool ok = d_err.empty() && in_err.empty() && out_err.empty();
  std::string detail = "degenerate: " + std::to_string(d_err.size()) + " audit errors; extension of A1 by A2: " +
                       std::to_string(out_err.size()) + " audit errors, dim Z = " + std::to_string(out.z.module.total_dim()) +
                       ", dim Z' = " + std::to_string(out.z_p.module.total_dim());
  if (!ok) detail += "; " + (!d_err.empty() ? d_err.front() : !in_err.empty() ? in_err.front() : out_err.front());
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, 30, headline},
      {2, 10, syzygy_structure},
      {3, 30, ext_certificate},
      {4, 120, right_side_example},
      {5, 120, left_side_supremum},
      {6, 120, oracle_equivalence},
      {7, 600, brute_force_cross_validation},
      {8, 600, invariant_suite},
      {9, 10, lemma_constructor},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    if (secs > c.budget) {
      o.pass = false;
      o.detail += "; over the time budget";
    }
    const bool known = kKnownFailures.count(c.id) > 0;
    std::printf("criterion %d: %s (%.2f s) %s%s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str(),
                !o.pass && known ? " [known failure]" : "");
    std::fflush(stdout);
    if (!o.pass && !known) ++unexpected;
  }
  return unexpected ? 1 : 0;
}
