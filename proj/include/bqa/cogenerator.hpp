#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqa/approx.hpp"
#include "bqa/module_ops.hpp"
#include "bqa/resolution.hpp"
#include "bqa/syzygy.hpp"

namespace bqa {

template <class F>
struct Embedding {
  std::size_t multiplicity = 0;  // m with A -> I^m
  Representation<F> target;      // I^m
  Morphism<F> map;
};

// A monomorphism A -> I^m built from a Hom(A, I) basis, greedily keeping the
// maps that shrink the common kernel. nullopt iff the intersection of all
// kernels is nonzero, i.e. no embedding into a power of I exists.
template <class F>
std::optional<Embedding<F>> embed_into_powers(const Representation<F>& a, const Representation<F>& i) {
  const F& f = a.field();
  const std::size_t nv = a.dims().size();
  auto h = hom(a, i);
  std::vector<std::size_t> chosen;
  std::vector<Matrix<F>> stacked;
  for (std::size_t v = 0; v < nv; ++v) stacked.emplace_back(f, 0, a.dim(v));
  auto kernel_dim = [&](const std::vector<Matrix<F>>& s) {
    std::size_t d = 0;
    for (std::size_t v = 0; v < nv; ++v) d += a.dim(v) - rank(s[v]);
    return d;
  };
  std::size_t cur = a.total_dim();
  for (std::size_t k = 0; k < h.dimension() && cur > 0; ++k) {
    std::vector<Matrix<F>> trial;
    for (std::size_t v = 0; v < nv; ++v) trial.push_back(stacked[v].vstack(h.basis[k][v]));
    const std::size_t d = kernel_dim(trial);
    if (d < cur) {
      stacked = std::move(trial);
      chosen.push_back(k);
      cur = d;
    }
  }
  if (cur > 0) return std::nullopt;
  Embedding<F> e;
  e.multiplicity = chosen.size();
  e.target = power(i, chosen.size());
  e.map = Morphism<F>(typename Morphism<F>::Trusted{}, a, e.target, std::move(stacked));
  return e;
}

template <class F>
struct CogeneratorCertificate {
  Representation<F> module;
  PdimResult<F> pdim;
  std::vector<std::optional<Embedding<F>>> embeddings;
  std::vector<std::optional<std::size_t>> ext_vanishing;  // dim Ext^1(A_j, I)
  bool verified = false;
  std::string reason;
};

template <class F>
CogeneratorCertificate<F> verify_cogenerator(const PdimEngine<F>& engine, const std::vector<Candidate<F>>& candidates,
                                             const Representation<F>& i) {
  CogeneratorCertificate<F> cert;
  cert.module = i;
  cert.pdim = engine.compute(i);
  cert.verified = cert.pdim.is_finite();
  if (!cert.verified) cert.reason = "projective dimension of I is " + cert.pdim.to_string();
  for (const auto& c : candidates) {
    cert.embeddings.push_back(embed_into_powers(c.module, i));
    const auto& e = cert.embeddings.back();
    if (!e || !e->map.is_injective() || !e->map.is_intertwining()) {
      if (cert.verified) cert.reason = "candidate " + c.name + " does not embed into add I";
      cert.verified = false;
    }
    cert.ext_vanishing.push_back(ext(c.module, i, 1).dimension);
    const auto& x = cert.ext_vanishing.back();
    if (!x || *x != 0) {
      if (cert.verified) cert.reason = "Ext^1(" + c.name + ", I) does not vanish";
      cert.verified = false;
    }
  }
  if (cert.verified) cert.reason = "all checks passed";
  return cert;
}

// ---------------------------------------------------------------------------
// Single-stage diagram construction of the relative-injectivity lemma.

class DiagramError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rows 0 -> X -> P -> Y -> 0 (top) and 0 -> X' -> P' -> Y' -> 0 (bottom);
// g : Q -> X, g' : Q' -> X'; vertical maps go from the bottom to the top.
template <class F>
struct LemmaInput {
  Morphism<F> beta, alpha;      // X -> P -> Y
  Morphism<F> beta_p, alpha_p;  // X' -> P' -> Y'
  Morphism<F> g, g_p;           // Q -> X, Q' -> X'
  Morphism<F> f_x, f_p, f_y;    // X' -> X, P' -> P, Y' -> Y
  Morphism<F> h_q;              // Q' -> Q
};

template <class F>
struct LemmaOutput {
  Embedding<F> gamma, gamma_p;  // Q -> I_0, Q' -> I_0'
  Morphism<F> h;                // I_0' -> I_0
  Morphism<F> into, into_p;     // Q -> P (+) I_0, Q' -> P' (+) I_0'
  Quotient<F> z, z_p;           // cokernels
  Morphism<F> vertical;         // P' (+) I_0' -> P (+) I_0, diag(f_P, h)
  Morphism<F> z_map;            // Z' -> Z
  Morphism<F> to_p, to_p_p;     // (1, 0) : P (+) I_0 -> P, and primed
  Morphism<F> z_to_y, z_p_to_y_p;
};

namespace detail {

template <class F>
bool same_maps(const Morphism<F>& a, const Morphism<F>& b) {
  return a.vertex_maps() == b.vertex_maps();
}

template <class F>
bool exact_row(const Morphism<F>& inc, const Morphism<F>& proj) {
  return is_short_exact(inc, proj);
}

}  // namespace detail

// Empty when the input diagram has exact rows and commuting squares.
template <class F>
std::vector<std::string> audit_lemma_input(const LemmaInput<F>& in) {
  std::vector<std::string> bad;
  if (!detail::exact_row(in.beta, in.alpha)) bad.push_back("top row is not exact");
  if (!detail::exact_row(in.beta_p, in.alpha_p)) bad.push_back("bottom row is not exact");
  for (const auto* m : {&in.g, &in.g_p, &in.f_x, &in.f_p, &in.f_y, &in.h_q})
    if (!m->is_intertwining()) bad.push_back("a vertical or diagonal map is not a homomorphism");
  if (!detail::same_maps(compose(in.beta, in.f_x), compose(in.f_p, in.beta_p))) bad.push_back("square X'PX does not commute");
  if (!detail::same_maps(compose(in.alpha, in.f_p), compose(in.f_y, in.alpha_p))) bad.push_back("square P'YP does not commute");
  if (!detail::same_maps(compose(in.g, in.h_q), compose(in.f_x, in.g_p))) bad.push_back("square Q'XQ does not commute");
  return bad;
}

template <class F>
LemmaOutput<F> lemma_construct(const LemmaInput<F>& in, const Representation<F>& cogenerator) {
  if (auto bad = audit_lemma_input(in); !bad.empty()) throw DiagramError("input diagram: " + bad.front());
  const F& f = cogenerator.field();
  const auto& alg = cogenerator.algebra_ptr();
  const auto& q = in.g.source();
  const auto& q_p = in.g_p.source();
  const auto& p = in.beta.target();
  const auto& p_p = in.beta_p.target();

  LemmaOutput<F> out;
  auto embed = [&](const Representation<F>& m) {
    auto e = embed_into_powers(m, cogenerator);
    if (!e) throw DiagramError("module does not embed into add I; cogenerator certificate is invalid");
    return *e;
  };
  out.gamma = embed(q);
  out.gamma_p = embed(q_p);
  const auto& i0 = out.gamma.target;
  const auto& i0_p = out.gamma_p.target;

  // h : I_0' -> I_0 with h gamma' = gamma h_Q, a linear system over Hom(I_0', I_0)
  {
    Morphism<F> rhs = compose(out.gamma.map, in.h_q);
    auto hb = hom(i0_p, i0);
    std::vector<typename F::value_type> target;
    for (const auto& m : rhs.vertex_maps()) target.insert(target.end(), m.entries().begin(), m.entries().end());
    Matrix<F> sys(f, target.size(), hb.dimension());
    for (std::size_t k = 0; k < hb.dimension(); ++k) {
      Morphism<F> c = compose(hb.morphism(k), out.gamma_p.map);
      std::size_t r = 0;
      for (const auto& m : c.vertex_maps())
        for (const auto& x : m.entries()) sys(r++, k) = x;
    }
    std::optional<Matrix<F>> sol;
    if (target.empty()) sol = Matrix<F>(f, hb.dimension(), 1);
    else sol = solve(sys, Matrix<F>::column_vector(f, target));
    if (!sol) throw DiagramError("no h with h gamma' = gamma h_Q; cogenerator certificate is invalid");
    out.h = hb.dimension() ? hb.combination(sol->column(0)) : Morphism<F>::zero(i0_p, i0);
  }

  auto sum = direct_sum(alg, std::vector<Representation<F>>{p, i0});
  auto sum_p = direct_sum(alg, std::vector<Representation<F>>{p_p, i0_p});
  out.into = block_morphism<F>(q, {q}, sum.module, {p, i0}, {{compose(in.beta, in.g)}, {out.gamma.map}});
  out.into_p = block_morphism<F>(q_p, {q_p}, sum_p.module, {p_p, i0_p}, {{compose(in.beta_p, in.g_p)}, {out.gamma_p.map}});
  out.z = cokernel(out.into);
  out.z_p = cokernel(out.into_p);
  out.vertical = block_morphism<F>(sum_p.module, {p_p, i0_p}, sum.module, {p, i0},
                                   {{in.f_p, std::nullopt}, {std::nullopt, out.h}});
  out.to_p = sum.projections[0];
  out.to_p_p = sum_p.projections[0];

  auto induced = [&](const Quotient<F>& from, const Morphism<F>& through, const Representation<F>& target) {
    std::vector<Matrix<F>> maps;
    for (std::size_t v = 0; v < target.dims().size(); ++v) maps.push_back(through.at(v) * from.section[v]);
    return Morphism<F>(typename Morphism<F>::Trusted{}, from.module, target, std::move(maps));
  };
  out.z_map = induced(out.z_p, compose(out.z.projection, out.vertical), out.z.module);
  out.z_to_y = induced(out.z, compose(in.alpha, out.to_p), in.alpha.target());
  out.z_p_to_y_p = induced(out.z_p, compose(in.alpha_p, out.to_p_p), in.alpha_p.target());
  return out;
}

// Independent re-check of the output diagram: exact rows, commuting squares,
// monomorphic gammas.
template <class F>
std::vector<std::string> audit_lemma_output(const LemmaInput<F>& in, const LemmaOutput<F>& out) {
  std::vector<std::string> bad = audit_lemma_input(in);
  auto check = [&](bool ok, const char* what) {
    if (!ok) bad.emplace_back(what);
  };
  for (const auto* m : {&out.gamma.map, &out.gamma_p.map, &out.h, &out.into, &out.into_p, &out.vertical, &out.z_map,
                        &out.to_p, &out.to_p_p, &out.z_to_y, &out.z_p_to_y_p, &out.z.projection, &out.z_p.projection})
    check(m->is_intertwining(), "a constructed map is not a homomorphism");
  check(out.gamma.map.is_injective(), "gamma is not injective");
  check(out.gamma_p.map.is_injective(), "gamma' is not injective");
  check(detail::exact_row(out.into, out.z.projection), "middle row 0 -> Q -> P+I0 -> Z -> 0 is not exact");
  check(detail::exact_row(out.into_p, out.z_p.projection), "row 0 -> Q' -> P'+I0' -> Z' -> 0 is not exact");
  check(detail::same_maps(compose(out.gamma.map, in.h_q), compose(out.h, out.gamma_p.map)), "h gamma' != gamma h_Q");
  check(detail::same_maps(compose(out.to_p, out.into), compose(in.beta, in.g)), "(1,0) o (beta g, gamma) != beta g");
  check(detail::same_maps(compose(out.to_p_p, out.into_p), compose(in.beta_p, in.g_p)), "primed (1,0) square fails");
  check(detail::same_maps(compose(out.vertical, out.into_p), compose(out.into, in.h_q)), "square Q'Q / P'+I0' P+I0 fails");
  check(detail::same_maps(compose(out.z.projection, out.vertical), compose(out.z_map, out.z_p.projection)),
        "cokernel square fails");
  check(detail::same_maps(compose(out.to_p, out.vertical), compose(in.f_p, out.to_p_p)), "projection square fails");
  check(detail::same_maps(compose(out.z_to_y, out.z.projection), compose(in.alpha, out.to_p)), "Z -> Y square fails");
  check(detail::same_maps(compose(out.z_p_to_y_p, out.z_p.projection), compose(in.alpha_p, out.to_p_p)),
        "Z' -> Y' square fails");
  check(detail::same_maps(compose(in.f_y, out.z_p_to_y_p), compose(out.z_to_y, out.z_map)), "Z'ZY'Y square fails");
  return bad;
}

}  // namespace bqa
