#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bqa/bqa.hpp"

namespace testing_support {

using bqa::PrimeField;
using Rep = bqa::Representation<PrimeField>;
using Spec = bqa::io::SpecFile<PrimeField>;

inline std::string data_path(const std::string& name) { return std::string(BQA_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Spec load_gf2(const std::string& name, const std::map<std::string, long long>& params = {}) {
  return std::get<Spec>(bqa::io::parse(slurp(data_path(name)), params));
}

// Quiver with named vertices "1".."n" and the given arrows (source, target).
inline bqa::Quiver make_quiver(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& arrows) {
  bqa::Quiver q;
  for (std::size_t v = 0; v < n; ++v) q.add_vertex(std::to_string(v + 1));
  for (std::size_t a = 0; a < arrows.size(); ++a)
    q.add_arrow("a" + std::to_string(a + 1), arrows[a].first, arrows[a].second);
  return q;
}

inline bqa::Path path_of(const bqa::Quiver& q, const std::vector<std::size_t>& arrows) {
  bqa::Path p = bqa::Path::of_arrow(q, arrows.front());
  for (std::size_t k = 1; k < arrows.size(); ++k) p = *bqa::compose(bqa::Path::of_arrow(q, arrows[k]), p);
  return p;
}

// Random monomial algebra: at most 5 vertices, 8 arrows, relations of length
// 2 or 3. Cycles that survive the random relations are cut by killing every
// remaining normal path of length 3.
template <class Rng>
bqa::AlgebraPtr<PrimeField> random_monomial_algebra(Rng& rng, PrimeField f = PrimeField(2)) {
  std::uniform_int_distribution<std::size_t> nv_dist(1, 5);
  const std::size_t nv = nv_dist(rng);
  std::uniform_int_distribution<std::size_t> na_dist(1, 8);
  std::uniform_int_distribution<std::size_t> vert(0, nv - 1);
  const std::size_t na = na_dist(rng);
  std::vector<std::pair<std::size_t, std::size_t>> arrows;
  for (std::size_t a = 0; a < na; ++a) arrows.emplace_back(vert(rng), vert(rng));
  bqa::Quiver q = make_quiver(nv, arrows);

  // all paths of length 2 and 3
  std::vector<bqa::Path> candidates;
  for (std::size_t a = 0; a < na; ++a)
    for (auto b : q.arrows_from(q.arrow(a).target)) {
      candidates.push_back(path_of(q, {a, b}));
      for (auto c : q.arrows_from(q.arrow(b).target)) candidates.push_back(path_of(q, {a, b, c}));
    }
  std::vector<bqa::Path> chosen;
  std::bernoulli_distribution take(0.35);
  auto contains = [](const bqa::Path& big, const bqa::Path& small) {
    if (small.length() > big.length()) return false;
    for (std::size_t i = 0; i + small.length() <= big.length(); ++i)
      if (std::equal(small.arrows.begin(), small.arrows.end(), big.arrows.begin() + static_cast<long>(i))) return true;
    return false;
  };
  auto redundant = [&](const bqa::Path& p) {
    for (const auto& c : chosen)
      if (contains(p, c)) return true;
    return false;
  };
  std::sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) { return x.length() < y.length(); });
  for (const auto& p : candidates)
    if (take(rng) && !redundant(p)) chosen.push_back(p);
  auto build = [&]() {
    std::vector<bqa::Relation<PrimeField>> rels;
    for (const auto& p : chosen) rels.push_back(bqa::Relation<PrimeField>::monomial_of(f, p));
    return bqa::make_algebra(q, f, rels, 4000);
  };
  try {
    return build();
  } catch (const bqa::AlgebraError&) {
    for (const auto& p : candidates)
      if (p.length() == 3 && !redundant(p)) chosen.push_back(p);
    return build();
  }
}

// Random module: a quotient of one or two indecomposable projectives by the
// submodule generated by a few random elements.
template <class F, class Rng>
bqa::Representation<F> random_module(const bqa::AlgebraPtr<F>& alg, Rng& rng) {
  const F& f = alg->field();
  std::uniform_int_distribution<std::size_t> vert(0, alg->num_vertices() - 1);
  std::uniform_int_distribution<std::size_t> count(1, 2);
  std::vector<bqa::Representation<F>> parts;
  const std::size_t k = count(rng);
  for (std::size_t i = 0; i < k; ++i) parts.push_back(bqa::projective(alg, vert(rng)));
  auto p = bqa::direct_sum_module(alg, parts);
  std::vector<std::pair<std::size_t, std::vector<typename F::value_type>>> gens;
  std::uniform_int_distribution<std::size_t> ngen(0, 2);
  const std::size_t g = ngen(rng);
  for (std::size_t i = 0; i < g; ++i) {
    const std::size_t v = vert(rng);
    if (!p.dim(v)) continue;
    std::vector<typename F::value_type> x(p.dim(v));
    for (auto& e : x) e = f.random(rng);
    gens.emplace_back(v, x);
  }
  auto sub = bqa::generated_subspaces(p, gens);
  return bqa::quotient_by(p, sub).module;
}

// Input diagram of the relative-injectivity lemma built from a map
// f : Y' -> Y: the rows are the first steps of the minimal resolutions,
// 0 -> syz -> P -> Y -> 0, with the lifted vertical maps; Q = X, Q' = X'
// and g, g' identities.
template <class F>
bqa::LemmaInput<F> comparison_square(const bqa::Morphism<F>& f_y) {
  auto top = bqa::projective_cover(f_y.target());
  auto bottom = bqa::projective_cover(f_y.source());
  auto f_p = bqa::lift_to_covers(bottom, top, f_y);
  const auto& x = top.kernel.module;
  const auto& x_p = bottom.kernel.module;
  std::vector<bqa::Matrix<F>> maps;
  for (std::size_t v = 0; v < x.dims().size(); ++v) {
    if (x_p.dim(v) == 0 || x.dim(v) == 0) {
      maps.emplace_back(x.field(), x.dim(v), x_p.dim(v));
      continue;
    }
    auto s = bqa::solve(top.kernel.inclusion.at(v), f_p.at(v) * bottom.kernel.inclusion.at(v));
    if (!s) throw std::logic_error("comparison_square: lift does not preserve syzygies");
    maps.push_back(*s);
  }
  bqa::Morphism<F> f_x(x_p, x, std::move(maps));
  return {top.kernel.inclusion, top.map,
          bottom.kernel.inclusion, bottom.map,
          bqa::Morphism<F>::identity(x), bqa::Morphism<F>::identity(x_p),
          f_x, f_p, f_y, f_x};
}

// Same rows with Q = Q' = 0.
template <class F>
bqa::LemmaInput<F> degenerate_square(const bqa::Morphism<F>& f_y) {
  auto in = comparison_square(f_y);
  const auto& alg = f_y.source().algebra_ptr();
  auto zero = bqa::Representation<F>::zero(alg);
  in.g = bqa::Morphism<F>::zero(zero, in.beta.source());
  in.g_p = bqa::Morphism<F>::zero(zero, in.beta_p.source());
  in.h_q = bqa::Morphism<F>::zero(zero, zero);
  return in;
}

// A nonsplit extension 0 -> B -> E -> A -> 0 from the first Ext^1(A, B) class.
template <class F>
std::optional<bqa::Extension<F>> nonsplit_extension(const bqa::Representation<F>& a, const bqa::Representation<F>& b) {
  auto res = bqa::resolve(a, 2);
  auto e = bqa::ext(res, b, 1, true);
  if (e.cocycles.empty()) return std::nullopt;
  auto c = bqa::cocycle_to_syzygy_map(res, b, 1, e.cocycles.front());
  return bqa::extension_from_cocycle(res.steps[0], a, c);
}

// Path types of m as a sum of cyclic path modules. The decomposition is
// internal (the cyclic submodules span m and their dimensions add up), so it
// is a direct sum; the dimension vectors are cross-checked here.
template <class F>
std::optional<std::vector<bqa::Path>> confirmed_path_types(const bqa::PdimEngine<F>& engine,
                                                           const bqa::Representation<F>& m) {
  auto paths = engine.decompose(m);
  if (!paths) return std::nullopt;
  std::vector<std::size_t> dims(m.dims().size(), 0);
  for (const auto& p : *paths) {
    auto pm = bqa::path_module(engine.algebra(), p);
    for (std::size_t v = 0; v < dims.size(); ++v) dims[v] += pm.dim(v);
  }
  if (dims != m.dims()) return std::nullopt;
  return paths;
}

struct OracleTally {
  std::size_t paths = 0, finite = 0, infinite = 0;
  std::vector<std::string> mismatches;
};

// Compares every syzygy-digraph label with minimal resolutions of the cyclic
// modules Lambda p. A finite label L must equal the length of the resolution.
// An infinite label needs a periodicity witness within N* + 1 steps: a chain of
// summands Lambda p = Lambda q_0, Lambda q_1, ... with Lambda q_{i+1} a summand
// of the first syzygy of Lambda q_i (computed from a projective cover), which
// returns to an earlier q.
template <class F>
OracleTally digraph_oracle(const bqa::AlgebraPtr<F>& alg) {
  OracleTally t;
  bqa::PdimEngine<F> engine(alg);
  const auto& g = engine.digraph();
  const std::size_t horizon = engine.cutoff() + 1;
  std::map<bqa::Path, std::optional<std::vector<bqa::Path>>> omega;
  auto children = [&](const bqa::Path& q) -> const std::optional<std::vector<bqa::Path>>& {
    auto it = omega.find(q);
    if (it == omega.end()) {
      auto cover = bqa::projective_cover(bqa::path_module(alg, q));
      it = omega.emplace(q, confirmed_path_types(engine, cover.kernel.module)).first;
    }
    return it->second;
  };
  // shortest walk of length >= 1 from q back to q, up to the horizon
  auto return_length = [&](const bqa::Path& q) -> std::optional<std::size_t> {
    std::set<bqa::Path> layer{q}, seen;
    for (std::size_t d = 1; d <= horizon && !layer.empty(); ++d) {
      std::set<bqa::Path> next;
      for (const auto& x : layer) {
        const auto& c = children(x);
        if (!c) continue;
        for (const auto& y : *c) {
          if (y == q) return d;
          if (seen.insert(y).second) next.insert(y);
        }
      }
      layer = std::move(next);
    }
    return std::nullopt;
  };
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const auto& p = g.nodes[k];
    const std::string name = alg->path_name(p);
    ++t.paths;
    if (g.label[k]) {
      ++t.finite;
      auto res = bqa::resolve(bqa::path_module(alg, p), *g.label[k] + 1);
      if (!res.terminated || *res.length() != *g.label[k])
        t.mismatches.push_back(name + ": label " + std::to_string(*g.label[k]) + ", resolution " +
                               (res.terminated ? std::to_string(*res.length()) : std::string("longer")));
      continue;
    }
    ++t.infinite;
    // the isoclass representative of Lambda p, as the decompositions report it
    bqa::Path start = p;
    if (auto self = confirmed_path_types(engine, bqa::path_module(alg, p)); self && self->size() == 1) start = self->front();
    bool witness = false;
    std::set<bqa::Path> layer{start}, seen{start};
    for (std::size_t d = 0; d < horizon && !layer.empty() && !witness; ++d) {
      for (const auto& x : layer) {
        auto r = return_length(x);
        if (r && d + *r <= horizon) {
          witness = true;
          break;
        }
      }
      std::set<bqa::Path> next;
      for (const auto& x : layer) {
        const auto& c = children(x);
        if (!c) continue;
        for (const auto& y : *c)
          if (seen.insert(y).second) next.insert(y);
      }
      layer = std::move(next);
    }
    if (!witness) t.mismatches.push_back(name + ": infinite label without a periodicity witness");
  }
  return t;
}

// Structural invariants on a pair of modules; returns the failed checks.
template <class F>
std::vector<std::string> invariant_failures(const bqa::PdimEngine<F>& engine, const bqa::Representation<F>& m,
                                            const bqa::Representation<F>& n) {
  std::vector<std::string> out;
  const auto& alg = engine.algebra();
  for (std::size_t v = 0; v < alg->num_vertices(); ++v)
    if (bqa::hom_dimension(bqa::projective(alg, v), m) != m.dim(v)) out.push_back("yoneda at " + std::to_string(v));
  // at most four covers, stopping early once syzygies get large
  bqa::MinimalResolution<F> res;
  res.module = m;
  res.terminated = m.is_zero();
  for (auto cur = m; !res.terminated && res.steps.size() < 4 && cur.total_dim() <= 120;) {
    res.steps.push_back(bqa::projective_cover(cur));
    cur = res.steps.back().kernel.module;
    res.terminated = cur.is_zero();
  }
  if (!bqa::euler_audit(res)) out.push_back("euler");
  if (!bqa::exactness_audit(res)) out.push_back("exactness");
  for (const auto& step : res.steps)
    if (!bqa::is_radical_step(step)) out.push_back("radical minimality");
  auto pm = engine.compute(m), pn = engine.compute(n);
  auto ps = engine.compute(bqa::direct_sum_module(alg, std::vector<bqa::Representation<F>>{m, n}));
  if (pm.is_infinite() || pn.is_infinite()) {
    if (!ps.is_infinite()) out.push_back("pdim of a sum with an infinite summand");
  } else if (pm.is_finite() && pn.is_finite()) {
    if (!ps.is_finite() || ps.value != std::max(pm.value, pn.value)) out.push_back("pdim of a sum");
  } else {
    out.push_back("pdim unknown");
  }
  return out;
}

// Writes m into a copy of spec, serializes, parses back and compares.
template <class F>
bool round_trips(const bqa::io::SpecFile<F>& spec, const bqa::Representation<F>& m) {
  auto copy = spec;
  copy.modules = {{"M", m}};
  copy.morphisms.clear();
  copy.candidate_sets.clear();
  auto again = bqa::io::parse(bqa::io::serialize(copy));
  const auto* back = std::get_if<bqa::io::SpecFile<F>>(&again);
  return back && back->same_structure(copy);
}

}  // namespace testing_support
