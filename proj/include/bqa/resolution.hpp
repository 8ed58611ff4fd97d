#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bqa/linalg.hpp"
#include "bqa/module_ops.hpp"
#include "bqa/representation.hpp"

namespace bqa {

// A direct sum of indecomposable projectives, one per generator, with the
// path label of every coordinate.
template <class F>
struct FreeModule {
  Representation<F> module;
  std::vector<std::size_t> generators;  // vertex of each generator
  // labels[w][k] = (generator, path) for coordinate k at vertex w
  std::vector<std::vector<std::pair<std::size_t, Path>>> labels;
  std::vector<std::size_t> generator_slot;  // coordinate of e_g at its vertex

  std::vector<std::size_t> multiplicities() const {
    std::vector<std::size_t> m(module.dims().size(), 0);
    for (auto v : generators) ++m[v];
    return m;
  }
};

template <class F>
FreeModule<F> free_module(const AlgebraPtr<F>& alg, std::vector<std::size_t> generators) {
  const std::size_t nv = alg->num_vertices();
  std::vector<Representation<F>> parts;
  FreeModule<F> out;
  out.labels.assign(nv, {});
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto& d = alg->projective_data(generators[g]);
    parts.push_back(projective(alg, generators[g]));
    for (const auto& p : d.basis) {
      if (p.is_trivial()) out.generator_slot.push_back(out.labels[p.end].size());
      out.labels[p.end].emplace_back(g, p);
    }
  }
  out.module = direct_sum_module(alg, parts);
  out.generators = std::move(generators);
  return out;
}

// The morphism from a free module sending e_g to images[g].
template <class F>
Morphism<F> morphism_from_generators(const FreeModule<F>& p, const Representation<F>& target,
                                     const std::vector<std::vector<typename F::value_type>>& images) {
  std::vector<Matrix<F>> maps;
  for (std::size_t w = 0; w < p.labels.size(); ++w) {
    Matrix<F> m(target.field(), target.dim(w), p.labels[w].size());
    for (std::size_t k = 0; k < p.labels[w].size(); ++k) {
      const auto& [g, path] = p.labels[w][k];
      auto col = target.act(path, images[g]);
      for (std::size_t r = 0; r < col.size(); ++r) m(r, k) = col[r];
    }
    maps.push_back(std::move(m));
  }
  return Morphism<F>(typename Morphism<F>::Trusted{}, p.module, target, std::move(maps));
}

// Element of a free module at the generator vertex corresponding to e_g.
template <class F>
std::vector<typename F::value_type> generator_vector(const FreeModule<F>& p, std::size_t g) {
  const F& f = p.module.field();
  std::vector<typename F::value_type> v(p.module.dim(p.generators[g]), f.zero());
  v[p.generator_slot[g]] = f.one();
  return v;
}

template <class F>
struct ProjectiveCover {
  FreeModule<F> free;
  Morphism<F> map;  // free.module -> covered module
  std::vector<std::vector<typename F::value_type>> images;
  Submodule<F> kernel;  // the syzygy, included in free.module
};

template <class F>
ProjectiveCover<F> projective_cover(const Representation<F>& m) {
  auto gens = top_generators(m);
  std::vector<std::size_t> verts;
  std::vector<std::vector<typename F::value_type>> images;
  for (auto& [v, x] : gens) {
    verts.push_back(v);
    images.push_back(std::move(x));
  }
  FreeModule<F> free = free_module(m.algebra_ptr(), std::move(verts));
  Morphism<F> map = morphism_from_generators(free, m, images);
  Submodule<F> ker = kernel(map);
  return {std::move(free), std::move(map), std::move(images), std::move(ker)};
}

// steps[k] covers the k-th syzygy (the 0-th being the module itself).
template <class F>
struct MinimalResolution {
  Representation<F> module;
  std::vector<ProjectiveCover<F>> steps;
  bool terminated = false;

  // Length of the resolution once terminated (0 for projective modules).
  std::optional<std::size_t> length() const {
    if (!terminated) return std::nullopt;
    return steps.empty() ? 0 : steps.size() - 1;
  }

  const Representation<F>& syzygy(std::size_t k) const { return k == 0 ? module : steps.at(k - 1).kernel.module; }
  const Representation<F>& projective_at(std::size_t k) const { return steps.at(k).free.module; }

  // d_k : P_k -> P_{k-1}, k >= 1.
  Morphism<F> differential(std::size_t k) const { return compose(steps.at(k - 1).kernel.inclusion, steps.at(k).map); }
};

// Covers P_0, ..., P_max_steps; stops early once a syzygy vanishes.
template <class F>
MinimalResolution<F> resolve(const Representation<F>& m, std::size_t max_steps) {
  MinimalResolution<F> res;
  res.module = m;
  if (m.is_zero()) {
    res.terminated = true;
    return res;
  }
  Representation<F> cur = m;
  for (std::size_t k = 0; k <= max_steps; ++k) {
    res.steps.push_back(projective_cover(cur));
    if (res.steps.back().kernel.module.is_zero()) {
      res.terminated = true;
      break;
    }
    cur = res.steps.back().kernel.module;
  }
  return res;
}

// Alternating sum of the projective dimension vectors equals dim M; a
// truncated resolution also counts its last syzygy.
template <class F>
bool euler_audit(const MinimalResolution<F>& res) {
  const std::size_t nv = res.module.dims().size();
  std::vector<long long> sum(nv, 0);
  for (std::size_t k = 0; k < res.steps.size(); ++k)
    for (std::size_t v = 0; v < nv; ++v)
      sum[v] += (k % 2 ? -1 : 1) * static_cast<long long>(res.steps[k].free.module.dim(v));
  if (!res.terminated && !res.steps.empty()) {
    const long long sign = res.steps.size() % 2 ? -1 : 1;
    for (std::size_t v = 0; v < nv; ++v) sum[v] += sign * static_cast<long long>(res.steps.back().kernel.module.dim(v));
  }
  for (std::size_t v = 0; v < nv; ++v)
    if (sum[v] != static_cast<long long>(res.module.dim(v))) return false;
  return true;
}

// The kernel of a cover lies in the radical of its projective.
template <class F>
bool is_radical_step(const ProjectiveCover<F>& c) {
  const auto& p = c.free.module;
  for (std::size_t v = 0; v < p.dims().size(); ++v)
    if (!column_span_contains(radical_basis_at(p, v), c.kernel.inclusion.at(v))) return false;
  return true;
}

// Rank audit of every short exact sequence 0 -> syz_{k+1} -> P_k -> syz_k -> 0.
template <class F>
bool exactness_audit(const MinimalResolution<F>& res) {
  for (std::size_t k = 0; k < res.steps.size(); ++k) {
    const auto& c = res.steps[k];
    if (!c.map.is_surjective() || !c.kernel.inclusion.is_injective()) return false;
    if (!compose(c.map, c.kernel.inclusion).is_zero()) return false;
    for (std::size_t v = 0; v < res.module.dims().size(); ++v)
      if (c.kernel.module.dim(v) + res.syzygy(k).dim(v) != c.free.module.dim(v)) return false;
    if (k > 0 && !compose(res.differential(k), c.kernel.inclusion).is_zero()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Ext via Hom(P_., N). Hom(P, N) for a free P is identified with the direct sum
// of N_{v(g)} over the generators g.

template <class F>
std::vector<std::size_t> free_hom_offsets(const FreeModule<F>& p, const Representation<F>& n) {
  std::vector<std::size_t> off(p.generators.size() + 1, 0);
  for (std::size_t g = 0; g < p.generators.size(); ++g) off[g + 1] = off[g] + n.dim(p.generators[g]);
  return off;
}

// delta^k : Hom(P_{k-1}, N) -> Hom(P_k, N), phi |-> phi o d_k.
template <class F>
Matrix<F> coboundary(const MinimalResolution<F>& res, const Representation<F>& n, std::size_t k) {
  const F& f = n.field();
  const auto& pk = res.steps.at(k).free;
  const auto& pk1 = res.steps.at(k - 1).free;
  const auto row_off = free_hom_offsets(pk, n);
  const auto col_off = free_hom_offsets(pk1, n);
  Matrix<F> delta(f, row_off.back(), col_off.back());
  const auto& incl = res.steps[k - 1].kernel.inclusion;
  for (std::size_t g = 0; g < pk.generators.size(); ++g) {
    const std::size_t v = pk.generators[g];
    const auto image = incl.at(v).apply(res.steps[k].images[g]);  // d_k(e_g) in P_{k-1}
    for (std::size_t c = 0; c < image.size(); ++c) {
      if (f.is_zero(image[c])) continue;
      const auto& [h, path] = pk1.labels[v][c];
      Matrix<F> block = n.path_action(path).scaled(image[c]);
      for (std::size_t r = 0; r < block.rows(); ++r)
        for (std::size_t s = 0; s < block.cols(); ++s) {
          auto& slot = delta(row_off[g] + r, col_off[h] + s);
          slot = f.add(slot, block(r, s));
        }
    }
  }
  return delta;
}

template <class F>
struct ExtResult {
  std::optional<std::size_t> dimension;  // nullopt: resolution too short
  // Representative cocycles in Hom(P_k, N) coordinates, spanning a complement
  // of the coboundaries.
  std::vector<std::vector<typename F::value_type>> cocycles;
};

template <class F>
std::size_t cochain_dimension(const MinimalResolution<F>& res, const Representation<F>& n, std::size_t k) {
  if (k >= res.steps.size()) return 0;
  return free_hom_offsets(res.steps[k].free, n).back();
}

template <class F>
ExtResult<F> ext(const MinimalResolution<F>& res, const Representation<F>& n, std::size_t k,
                 bool with_cocycles = false) {
  ExtResult<F> out;
  if (!res.terminated && res.steps.size() < k + 2) return out;
  const F& f = n.field();
  const std::size_t ck = cochain_dimension(res, n, k);
  if (ck == 0) {
    out.dimension = 0;
    return out;
  }
  std::optional<Matrix<F>> next, prev;
  if (k + 1 < res.steps.size()) next = coboundary(res, n, k + 1);
  if (k >= 1) prev = coboundary(res, n, k);
  const std::size_t rnext = next ? rank(*next) : 0;
  const std::size_t rprev = prev ? rank(*prev) : 0;
  out.dimension = ck - rnext - rprev;
  if (with_cocycles && *out.dimension > 0) {
    Matrix<F> z = next ? kernel_basis(*next) : Matrix<F>::identity(f, ck);
    Matrix<F> b = prev ? column_space(*prev) : Matrix<F>(f, ck, 0);
    for (std::size_t c = 0; c < z.cols() && out.cocycles.size() < *out.dimension; ++c) {
      Matrix<F> col = z.select_columns({c});
      Matrix<F> cand = b.hstack(col);
      if (rank(cand) > b.cols()) {
        b = cand;
        out.cocycles.push_back(col.column(0));
      }
    }
  }
  return out;
}

template <class F>
ExtResult<F> ext(const Representation<F>& m, const Representation<F>& n, std::size_t k, bool with_cocycles = false) {
  return ext(resolve(m, k + 1), n, k, with_cocycles);
}

// Ext^k(M, N) = coker(Hom(P_{k-1}, N) -> Hom(syz_k, N)) for k >= 1; an
// independent route used to cross-check ext().
template <class F>
std::optional<std::size_t> ext_by_dimension_shift(const MinimalResolution<F>& res, const Representation<F>& n,
                                                  std::size_t k) {
  if (k == 0) return hom_dimension(res.module, n);
  if (res.steps.size() < k) return res.terminated ? std::optional<std::size_t>(0) : std::nullopt;
  const auto& syz = res.syzygy(k);
  const std::size_t total = hom_dimension(syz, n);
  if (total == 0) return 0;
  const auto& p = res.steps[k - 1].free;
  const auto& incl = res.steps[k - 1].kernel.inclusion;
  const F& f = n.field();
  const auto off = free_hom_offsets(p, n);
  std::vector<std::vector<typename F::value_type>> rows;
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    for (std::size_t r = 0; r < n.dim(p.generators[g]); ++r) {
      std::vector<std::vector<typename F::value_type>> images;
      for (std::size_t h = 0; h < p.generators.size(); ++h)
        images.emplace_back(n.dim(p.generators[h]), f.zero());
      images[g][r] = f.one();
      Morphism<F> phi = compose(morphism_from_generators(p, n, images), incl);
      std::vector<typename F::value_type> flat;
      for (const auto& m : phi.vertex_maps()) flat.insert(flat.end(), m.entries().begin(), m.entries().end());
      rows.push_back(std::move(flat));
    }
  }
  if (rows.empty() || rows.front().empty()) return total;
  Matrix<F> r(f, rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) r(i, j) = rows[i][j];
  return total - rank(r);
}

// The map syz_k -> N induced by a cocycle P_k -> N (k >= 1).
template <class F>
Morphism<F> cocycle_to_syzygy_map(const MinimalResolution<F>& res, const Representation<F>& n, std::size_t k,
                                  const std::vector<typename F::value_type>& cocycle) {
  const auto& cover = res.steps.at(k);
  const auto off = free_hom_offsets(cover.free, n);
  std::vector<std::vector<typename F::value_type>> images;
  for (std::size_t g = 0; g < cover.free.generators.size(); ++g)
    images.emplace_back(cocycle.begin() + off[g], cocycle.begin() + off[g + 1]);
  Morphism<F> phi = morphism_from_generators(cover.free, n, images);
  const auto& syz = res.syzygy(k);
  std::vector<Matrix<F>> maps;
  for (std::size_t v = 0; v < syz.dims().size(); ++v) {
    if (syz.dim(v) == 0) {
      maps.emplace_back(n.field(), n.dim(v), 0);
      continue;
    }
    auto s = solve(cover.map.at(v), Matrix<F>::identity(n.field(), syz.dim(v)));
    maps.push_back(phi.at(v) * *s);
  }
  return Morphism<F>(typename Morphism<F>::Trusted{}, syz, n, std::move(maps));
}

// ---------------------------------------------------------------------------
// Extensions

template <class F>
struct Extension {
  Representation<F> module;
  Morphism<F> inclusion;   // X -> E
  Morphism<F> projection;  // E -> A
};

// Pushout of 0 -> syz -> P0 -> A -> 0 along c : syz -> X:
// E = coker(syz -> X (+) P0, w |-> (c(w), -iota(w))).
template <class F>
Extension<F> extension_from_cocycle(const ProjectiveCover<F>& cover_of_a, const Representation<F>& a,
                                    const Morphism<F>& c) {
  const auto& x = c.target();
  const auto& p0 = cover_of_a.free.module;
  const auto& syz = cover_of_a.kernel.module;
  const F& f = x.field();
  auto sum = direct_sum(x.algebra_ptr(), std::vector<Representation<F>>{x, p0});
  Morphism<F> neg_iota = cover_of_a.kernel.inclusion.scaled(f.neg(f.one()));
  Morphism<F> into = block_morphism<F>(syz, {syz}, sum.module, {x, p0}, {{c}, {neg_iota}});
  auto q = cokernel(into);
  Morphism<F> inc = compose(q.projection, sum.injections[0]);
  std::vector<Matrix<F>> pmaps;
  for (std::size_t v = 0; v < a.dims().size(); ++v) {
    Matrix<F> zero_eps = Matrix<F>(f, a.dim(v), x.dim(v)).hstack(cover_of_a.map.at(v));
    pmaps.push_back(zero_eps * q.section[v]);
  }
  Morphism<F> proj(typename Morphism<F>::Trusted{}, q.module, a, std::move(pmaps));
  return {q.module, std::move(inc), std::move(proj)};
}

// Rank audit of 0 -> X -> E -> A -> 0.
template <class F>
bool is_short_exact(const Morphism<F>& inc, const Morphism<F>& proj) {
  if (!inc.is_intertwining() || !proj.is_intertwining()) return false;
  if (!inc.is_injective() || !proj.is_surjective()) return false;
  if (!compose(proj, inc).is_zero()) return false;
  for (std::size_t v = 0; v < inc.vertex_maps().size(); ++v)
    if (inc.source().dim(v) + proj.target().dim(v) != inc.target().dim(v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lifting

// A map P(M) -> P(N) with eps_N o lift = f o eps_M.
template <class F>
Morphism<F> lift_to_covers(const ProjectiveCover<F>& from, const ProjectiveCover<F>& to, const Morphism<F>& f) {
  std::vector<std::vector<typename F::value_type>> images;
  for (std::size_t g = 0; g < from.free.generators.size(); ++g) {
    const std::size_t v = from.free.generators[g];
    Matrix<F> y = Matrix<F>::column_vector(f.target().field(), f.at(v).apply(from.images[g]));
    auto z = solve(to.map.at(v), y);
    if (!z) throw InvalidRepresentation("lift_to_covers: target cover is not surjective");
    images.push_back(z->column(0));
  }
  return morphism_from_generators(from.free, to.free.module, images);
}

// A map from a free module through a surjection: g with s o g = f.
template <class F>
std::optional<Morphism<F>> lift_through(const FreeModule<F>& p, const Morphism<F>& f, const Morphism<F>& s) {
  std::vector<std::vector<typename F::value_type>> images;
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    const std::size_t v = p.generators[g];
    Matrix<F> y = Matrix<F>::column_vector(f.target().field(), f.at(v).apply(generator_vector(p, g)));
    auto z = solve(s.at(v), y);
    if (!z) return std::nullopt;
    images.push_back(z->column(0));
  }
  return morphism_from_generators(p, s.source(), images);
}

}  // namespace bqa
