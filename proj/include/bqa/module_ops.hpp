#pragma once

#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "bqa/linalg.hpp"
#include "bqa/representation.hpp"

namespace bqa {

// ---------------------------------------------------------------------------
// Standard modules

// Lambda e_i with the path basis of normal_basis_at(i).
template <class F>
Representation<F> projective(const AlgebraPtr<F>& alg, std::size_t i) {
  const auto& d = alg->projective_data(i);
  return Representation<F>(typename Representation<F>::Trusted{}, alg, d.dims, d.arrow_maps);
}

// S_i = Lambda e_i / J e_i.
template <class F>
Representation<F> simple(const AlgebraPtr<F>& alg, std::size_t i) {
  std::vector<std::size_t> dims(alg->num_vertices(), 0);
  dims.at(i) = 1;
  std::vector<Matrix<F>> maps;
  for (const auto& a : alg->quiver().arrows()) maps.emplace_back(alg->field(), dims[a.target], dims[a.source]);
  return Representation<F>(typename Representation<F>::Trusted{}, alg, std::move(dims), std::move(maps));
}

// D(e_i Lambda): the dual of the right projective at i, obtained from the
// left projective of the opposite algebra by transposing its arrow maps.
template <class F>
Representation<F> injective(const AlgebraPtr<F>& alg, std::size_t i) {
  auto [op, tag] = alg->opposite();
  const auto& d = op.projective_data(i);
  std::vector<Matrix<F>> maps;
  for (std::size_t a = 0; a < alg->num_arrows(); ++a) maps.push_back(d.arrow_maps[a].transpose());
  return Representation<F>(typename Representation<F>::Trusted{}, alg, d.dims, std::move(maps));
}

// ---------------------------------------------------------------------------
// Hom spaces

template <class F>
struct HomBasis {
  Representation<F> source;
  Representation<F> target;
  std::vector<std::vector<Matrix<F>>> basis;

  std::size_t dimension() const { return basis.size(); }
  Morphism<F> morphism(std::size_t k) const {
    return Morphism<F>(typename Morphism<F>::Trusted{}, source, target, basis.at(k));
  }
  // sum_k coeffs[k] * basis[k]
  Morphism<F> combination(const std::vector<typename F::value_type>& coeffs) const {
    const F& f = source.field();
    std::vector<Matrix<F>> maps;
    for (std::size_t v = 0; v < source.dims().size(); ++v) {
      Matrix<F> m(f, target.dim(v), source.dim(v));
      for (std::size_t k = 0; k < basis.size(); ++k)
        if (!f.is_zero(coeffs[k])) m = m + basis[k][v].scaled(coeffs[k]);
      maps.push_back(std::move(m));
    }
    return Morphism<F>(typename Morphism<F>::Trusted{}, source, target, std::move(maps));
  }
};

namespace detail {

// Unknown layout for Hom(M, N): X_v (N_v x M_v) row-major, vertices in order.
template <class F>
std::vector<std::size_t> hom_offsets(const Representation<F>& m, const Representation<F>& n) {
  std::vector<std::size_t> off(m.dims().size() + 1, 0);
  for (std::size_t v = 0; v < m.dims().size(); ++v) off[v + 1] = off[v] + n.dim(v) * m.dim(v);
  return off;
}

// Linear system whose kernel is Hom(M, N): N_a X_i - X_j M_a = 0 for a: i -> j.
template <class F>
Matrix<F> intertwining_system(const Representation<F>& m, const Representation<F>& n) {
  const F& f = m.field();
  const Quiver& q = m.quiver();
  const auto off = hom_offsets(m, n);
  std::size_t eqs = 0;
  for (const auto& a : q.arrows()) eqs += n.dim(a.target) * m.dim(a.source);
  Matrix<F> sys(f, eqs, off.back());
  std::size_t row = 0;
  for (std::size_t ai = 0; ai < q.num_arrows(); ++ai) {
    const auto& a = q.arrow(ai);
    const std::size_t i = a.source, j = a.target;
    const Matrix<F>& na = n.arrow_map(ai);
    const Matrix<F>& ma = m.arrow_map(ai);
    for (std::size_t r = 0; r < n.dim(j); ++r) {
      for (std::size_t c = 0; c < m.dim(i); ++c, ++row) {
        // + sum_k N_a[r,k] X_i[k,c]
        for (std::size_t k = 0; k < n.dim(i); ++k) {
          const auto& coef = na(r, k);
          if (f.is_zero(coef)) continue;
          auto& slot = sys(row, off[i] + k * m.dim(i) + c);
          slot = f.add(slot, coef);
        }
        // - sum_k X_j[r,k] M_a[k,c]
        for (std::size_t k = 0; k < m.dim(j); ++k) {
          const auto& coef = ma(k, c);
          if (f.is_zero(coef)) continue;
          auto& slot = sys(row, off[j] + r * m.dim(j) + k);
          slot = f.sub(slot, coef);
        }
      }
    }
  }
  return sys;
}

template <class F>
std::vector<Matrix<F>> unpack_hom(const Representation<F>& m, const Representation<F>& n,
                                  const std::vector<std::size_t>& off, const Matrix<F>& k, std::size_t col) {
  std::vector<Matrix<F>> maps;
  for (std::size_t v = 0; v < m.dims().size(); ++v) {
    Matrix<F> x(m.field(), n.dim(v), m.dim(v));
    for (std::size_t r = 0; r < n.dim(v); ++r)
      for (std::size_t c = 0; c < m.dim(v); ++c) x(r, c) = k(off[v] + r * m.dim(v) + c, col);
    maps.push_back(std::move(x));
  }
  return maps;
}

}  // namespace detail

template <class F>
HomBasis<F> hom(const Representation<F>& m, const Representation<F>& n) {
  HomBasis<F> h{m, n, {}};
  const auto off = detail::hom_offsets(m, n);
  if (off.back() == 0) return h;
  const Matrix<F> k = kernel_basis(detail::intertwining_system(m, n));
  for (std::size_t col = 0; col < k.cols(); ++col) h.basis.push_back(detail::unpack_hom(m, n, off, k, col));
  return h;
}

template <class F>
std::size_t hom_dimension(const Representation<F>& m, const Representation<F>& n) {
  const auto off = detail::hom_offsets(m, n);
  if (off.back() == 0) return 0;
  return off.back() - rank(detail::intertwining_system(m, n));
}

// ---------------------------------------------------------------------------
// Subspaces, submodules and quotients

// A submodule given by one basis matrix (columns) per vertex, together with
// the module structure restricted to it.
template <class F>
struct Submodule {
  Representation<F> module;
  Morphism<F> inclusion;
};

template <class F>
struct Quotient {
  Representation<F> module;
  Morphism<F> projection;
  std::vector<Matrix<F>> section;  // columns: chosen lifts of the quotient basis
};

// Restricts M to arrow-stable subspaces (independent columns per vertex).
template <class F>
Submodule<F> restrict_to(const Representation<F>& m, std::vector<Matrix<F>> bases) {
  const Quiver& q = m.quiver();
  std::vector<std::size_t> dims;
  for (const auto& b : bases) dims.push_back(b.cols());
  std::vector<Matrix<F>> maps;
  for (std::size_t ai = 0; ai < q.num_arrows(); ++ai) {
    const auto& a = q.arrow(ai);
    const Matrix<F>& src = bases[a.source];
    const Matrix<F>& tgt = bases[a.target];
    if (src.cols() == 0 || tgt.cols() == 0) {
      if (src.cols() != 0 && !(m.arrow_map(ai) * src).is_zero())
        throw InvalidRepresentation("restrict_to: subspaces are not arrow-stable");
      maps.emplace_back(m.field(), tgt.cols(), src.cols());
      continue;
    }
    auto x = solve(tgt, m.arrow_map(ai) * src);
    if (!x) throw InvalidRepresentation("restrict_to: subspaces are not arrow-stable");
    maps.push_back(std::move(*x));
  }
  Representation<F> sub(typename Representation<F>::Trusted{}, m.algebra_ptr(), dims, std::move(maps));
  Morphism<F> inc(typename Morphism<F>::Trusted{}, sub, m, std::move(bases));
  return {std::move(sub), std::move(inc)};
}

// M / U for arrow-stable subspaces U (independent columns per vertex).
template <class F>
Quotient<F> quotient_by(const Representation<F>& m, const std::vector<Matrix<F>>& sub) {
  const F& f = m.field();
  const Quiver& q = m.quiver();
  std::vector<Matrix<F>> proj, section;
  std::vector<std::size_t> dims;
  for (std::size_t v = 0; v < m.dims().size(); ++v) {
    const std::size_t n = m.dim(v);
    const auto comp = complement_indices(sub[v]);
    Matrix<F> s = standard_columns(f, n, comp);
    Matrix<F> full = sub[v].hstack(s);
    Matrix<F> p(f, comp.size(), n);
    if (n > 0) {
      auto inv = inverse(full);
      p = inv->block(sub[v].cols(), 0, comp.size(), n);
    }
    dims.push_back(comp.size());
    proj.push_back(std::move(p));
    section.push_back(std::move(s));
  }
  std::vector<Matrix<F>> maps;
  for (std::size_t ai = 0; ai < q.num_arrows(); ++ai) {
    const auto& a = q.arrow(ai);
    maps.push_back(proj[a.target] * m.arrow_map(ai) * section[a.source]);
  }
  Representation<F> quo(typename Representation<F>::Trusted{}, m.algebra_ptr(), std::move(dims), std::move(maps));
  Morphism<F> pr(typename Morphism<F>::Trusted{}, m, quo, std::move(proj));
  return {std::move(quo), std::move(pr), std::move(section)};
}

// Per-vertex bases of the submodule generated by homogeneous vectors.
template <class F>
std::vector<Matrix<F>> generated_subspaces(
    const Representation<F>& m, const std::vector<std::pair<std::size_t, std::vector<typename F::value_type>>>& gens) {
  const F& f = m.field();
  const Quiver& q = m.quiver();
  const std::size_t nv = m.dims().size();
  std::vector<Matrix<F>> basis;
  std::vector<std::size_t> ranks(nv, 0);
  for (std::size_t v = 0; v < nv; ++v) basis.emplace_back(f, m.dim(v), 0);
  std::deque<std::pair<std::size_t, std::vector<typename F::value_type>>> queue(gens.begin(), gens.end());
  while (!queue.empty()) {
    auto [v, x] = std::move(queue.front());
    queue.pop_front();
    if (ranks[v] == m.dim(v)) continue;
    Matrix<F> cand = basis[v].hstack(Matrix<F>::column_vector(f, x));
    if (rank(cand) == ranks[v]) continue;
    basis[v] = std::move(cand);
    ++ranks[v];
    for (auto a : q.arrows_from(v)) queue.emplace_back(q.arrow(a).target, m.arrow_map(a).apply(x));
  }
  return basis;
}

template <class F>
Submodule<F> generated_submodule(
    const Representation<F>& m, const std::vector<std::pair<std::size_t, std::vector<typename F::value_type>>>& gens) {
  return restrict_to(m, generated_subspaces(m, gens));
}

// ---------------------------------------------------------------------------
// Kernels, images, cokernels

template <class F>
Submodule<F> kernel(const Morphism<F>& f) {
  std::vector<Matrix<F>> bases;
  for (std::size_t v = 0; v < f.vertex_maps().size(); ++v) bases.push_back(kernel_basis(f.at(v)));
  return restrict_to(f.source(), std::move(bases));
}

template <class F>
Submodule<F> image(const Morphism<F>& f) {
  std::vector<Matrix<F>> bases;
  for (std::size_t v = 0; v < f.vertex_maps().size(); ++v) bases.push_back(column_space(f.at(v)));
  return restrict_to(f.target(), std::move(bases));
}

template <class F>
Quotient<F> cokernel(const Morphism<F>& f) {
  std::vector<Matrix<F>> bases;
  for (std::size_t v = 0; v < f.vertex_maps().size(); ++v) bases.push_back(column_space(f.at(v)));
  return quotient_by(f.target(), bases);
}

// ---------------------------------------------------------------------------
// Direct sums

template <class F>
struct DirectSum {
  Representation<F> module;
  std::vector<Morphism<F>> injections;
  std::vector<Morphism<F>> projections;
};

template <class F>
DirectSum<F> direct_sum(const AlgebraPtr<F>& alg, const std::vector<Representation<F>>& parts) {
  const F& f = alg->field();
  const Quiver& q = alg->quiver();
  const std::size_t nv = q.num_vertices();
  std::vector<std::size_t> dims(nv, 0);
  for (const auto& p : parts)
    for (std::size_t v = 0; v < nv; ++v) dims[v] += p.dim(v);
  std::vector<Matrix<F>> maps;
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    std::vector<Matrix<F>> blocks;
    for (const auto& p : parts) blocks.push_back(p.arrow_map(a));
    maps.push_back(block_diagonal(f, blocks));
  }
  DirectSum<F> out{Representation<F>(typename Representation<F>::Trusted{}, alg, dims, std::move(maps)), {}, {}};
  std::vector<std::size_t> off(nv, 0);
  for (const auto& p : parts) {
    std::vector<Matrix<F>> inj, pr;
    for (std::size_t v = 0; v < nv; ++v) {
      Matrix<F> i(f, dims[v], p.dim(v));
      for (std::size_t k = 0; k < p.dim(v); ++k) i(off[v] + k, k) = f.one();
      pr.push_back(i.transpose());
      inj.push_back(std::move(i));
      off[v] += p.dim(v);
    }
    out.injections.emplace_back(typename Morphism<F>::Trusted{}, p, out.module, std::move(inj));
    out.projections.emplace_back(typename Morphism<F>::Trusted{}, out.module, p, std::move(pr));
  }
  return out;
}

template <class F>
Representation<F> direct_sum_module(const AlgebraPtr<F>& alg, const std::vector<Representation<F>>& parts) {
  return direct_sum(alg, parts).module;
}

template <class F>
Representation<F> power(const Representation<F>& m, std::size_t k) {
  return direct_sum_module(m.algebra_ptr(), std::vector<Representation<F>>(k, m));
}

// Morphism between direct sums given by a matrix of component morphisms
// (blocks[r][c]: source part c -> target part r).
template <class F>
Morphism<F> block_morphism(const Representation<F>& source, const std::vector<Representation<F>>& source_parts,
                           const Representation<F>& target, const std::vector<Representation<F>>& target_parts,
                           const std::vector<std::vector<std::optional<Morphism<F>>>>& blocks) {
  const F& f = source.field();
  const std::size_t nv = source.dims().size();
  std::vector<Matrix<F>> maps;
  for (std::size_t v = 0; v < nv; ++v) {
    Matrix<F> m(f, target.dim(v), source.dim(v));
    std::size_t r0 = 0;
    for (std::size_t r = 0; r < target_parts.size(); ++r) {
      std::size_t c0 = 0;
      for (std::size_t c = 0; c < source_parts.size(); ++c) {
        if (blocks[r][c]) m.set_block(r0, c0, blocks[r][c]->at(v));
        c0 += source_parts[c].dim(v);
      }
      r0 += target_parts[r].dim(v);
    }
    maps.push_back(std::move(m));
  }
  return Morphism<F>(typename Morphism<F>::Trusted{}, source, target, std::move(maps));
}

// ---------------------------------------------------------------------------
// Radical, top, socle

// Basis of (JM)_v: the span of the images of arrows ending at v.
template <class F>
Matrix<F> radical_basis_at(const Representation<F>& m, std::size_t v) {
  Matrix<F> images(m.field(), m.dim(v), 0);
  for (auto a : m.quiver().arrows_to(v)) images = images.hstack(m.arrow_map(a));
  return column_space(images);
}

template <class F>
Submodule<F> radical(const Representation<F>& m) {
  std::vector<Matrix<F>> bases;
  for (std::size_t v = 0; v < m.dims().size(); ++v) bases.push_back(radical_basis_at(m, v));
  return restrict_to(m, std::move(bases));
}

template <class F>
std::vector<std::size_t> top_multiplicities(const Representation<F>& m) {
  std::vector<std::size_t> t;
  for (std::size_t v = 0; v < m.dims().size(); ++v) t.push_back(m.dim(v) - radical_basis_at(m, v).cols());
  return t;
}

// Top generators: standard basis vectors of M_v completing (JM)_v, for every v.
template <class F>
std::vector<std::pair<std::size_t, std::vector<typename F::value_type>>> top_generators(const Representation<F>& m) {
  std::vector<std::pair<std::size_t, std::vector<typename F::value_type>>> out;
  for (std::size_t v = 0; v < m.dims().size(); ++v) {
    for (auto idx : complement_indices(radical_basis_at(m, v))) {
      std::vector<typename F::value_type> x(m.dim(v), m.field().zero());
      x[idx] = m.field().one();
      out.emplace_back(v, std::move(x));
    }
  }
  return out;
}

template <class F>
Quotient<F> top(const Representation<F>& m) {
  return quotient_by(m, radical(m).inclusion.vertex_maps());
}

// soc(M)_v = intersection of the kernels of the arrows leaving v.
template <class F>
Matrix<F> socle_basis_at(const Representation<F>& m, std::size_t v) {
  Matrix<F> stacked(m.field(), 0, m.dim(v));
  for (auto a : m.quiver().arrows_from(v)) stacked = stacked.vstack(m.arrow_map(a));
  return kernel_basis(stacked);
}

template <class F>
std::vector<std::size_t> socle_multiplicities(const Representation<F>& m) {
  std::vector<std::size_t> s;
  for (std::size_t v = 0; v < m.dims().size(); ++v) s.push_back(socle_basis_at(m, v).cols());
  return s;
}

// Radical layers: dims of J^k M / J^{k+1} M for k = 0, 1, ...
template <class F>
std::vector<std::vector<std::size_t>> radical_layers(const Representation<F>& m) {
  std::vector<std::vector<std::size_t>> layers;
  Representation<F> cur = m;
  while (!cur.is_zero()) {
    auto rad = radical(cur);
    std::vector<std::size_t> layer;
    for (std::size_t v = 0; v < cur.dims().size(); ++v) layer.push_back(cur.dim(v) - rad.module.dim(v));
    layers.push_back(std::move(layer));
    cur = rad.module;
  }
  return layers;
}

}  // namespace bqa
