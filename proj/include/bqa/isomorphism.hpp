#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bqa/linalg.hpp"
#include "bqa/module_ops.hpp"

namespace bqa {

enum class IsoStatus { Isomorphic, NotIsomorphic, NotFound };

inline const char* to_string(IsoStatus s) {
  switch (s) {
    case IsoStatus::Isomorphic: return "isomorphic";
    case IsoStatus::NotIsomorphic: return "not isomorphic";
    default: return "no isomorphism found";
  }
}

template <class F>
struct IsoResult {
  IsoStatus status = IsoStatus::NotFound;
  std::optional<Morphism<F>> witness;
  std::string reason;
  bool exhaustive = false;
  explicit operator bool() const { return status == IsoStatus::Isomorphic; }
};

struct IsoOptions {
  std::uint64_t exhaustive_limit = 1u << 16;
  std::size_t random_trials = 32;
  std::uint64_t seed = 0x5eed;
};

// Cheap isomorphism invariants; equal modules give equal signatures.
template <class F>
struct ModuleSignature {
  std::vector<std::size_t> dims, top, socle;
  std::vector<std::vector<std::size_t>> layers;
  bool operator==(const ModuleSignature&) const = default;
};

template <class F>
ModuleSignature<F> signature(const Representation<F>& m) {
  return {m.dims(), top_multiplicities(m), socle_multiplicities(m), radical_layers(m)};
}

// Invertible at every vertex and intertwining: re-checked independently of
// the search.
template <class F>
bool verify_isomorphism(const Morphism<F>& f) {
  if (!f.is_intertwining()) return false;
  for (std::size_t v = 0; v < f.vertex_maps().size(); ++v)
    if (!is_invertible(f.at(v))) return false;
  return true;
}

namespace detail {

// Flattened induced map on tops, top(M) -> top(N), for one morphism.
template <class F>
std::vector<typename F::value_type> top_map_vector(const Morphism<F>& f, const std::vector<Matrix<F>>& m_top_section,
                                                   const std::vector<Matrix<F>>& n_top_projection) {
  std::vector<typename F::value_type> out;
  for (std::size_t v = 0; v < m_top_section.size(); ++v) {
    Matrix<F> t = n_top_projection[v] * f.at(v) * m_top_section[v];
    out.insert(out.end(), t.entries().begin(), t.entries().end());
  }
  return out;
}

}  // namespace detail

// Nakayama: f : M -> N with dim M = dim N is an isomorphism iff the induced map
// on tops is bijective. The search runs over the image of Hom(M, N) in the
// space of top maps.
template <class F>
IsoResult<F> is_isomorphic(const Representation<F>& m, const Representation<F>& n, const IsoOptions& opt = {}) {
  IsoResult<F> r;
  if (m.dims() != n.dims()) {
    r.status = IsoStatus::NotIsomorphic;
    r.reason = "dimension vectors differ";
    return r;
  }
  if (m.is_zero()) {
    r.status = IsoStatus::Isomorphic;
    r.witness = Morphism<F>::zero(m, n);
    return r;
  }
  if (top_multiplicities(m) != top_multiplicities(n)) {
    r.status = IsoStatus::NotIsomorphic;
    r.reason = "tops differ";
    return r;
  }
  if (socle_multiplicities(m) != socle_multiplicities(n)) {
    r.status = IsoStatus::NotIsomorphic;
    r.reason = "socles differ";
    return r;
  }
  if (radical_layers(m) != radical_layers(n)) {
    r.status = IsoStatus::NotIsomorphic;
    r.reason = "radical layers differ";
    return r;
  }
  const std::size_t end_m = hom_dimension(m, m);
  if (hom_dimension(n, n) != end_m || hom_dimension(m, n) != end_m || hom_dimension(n, m) != end_m) {
    r.status = IsoStatus::NotIsomorphic;
    r.reason = "Hom dimensions differ";
    return r;
  }
  const F& f = m.field();
  auto h = hom(m, n);
  auto mtop = top(m);
  auto ntop = top(n);
  std::vector<std::vector<typename F::value_type>> tops;
  for (std::size_t k = 0; k < h.dimension(); ++k)
    tops.push_back(detail::top_map_vector(h.morphism(k), mtop.section, ntop.projection.vertex_maps()));
  // independent subset of top maps
  std::vector<std::size_t> chosen;
  {
    const std::size_t len = tops.empty() ? 0 : tops.front().size();
    Matrix<F> cols(f, len, 0);
    for (std::size_t k = 0; k < tops.size(); ++k) {
      Matrix<F> cand = cols.hstack(Matrix<F>::column_vector(f, tops[k]));
      if (rank(cand) > cols.cols()) {
        cols = std::move(cand);
        chosen.push_back(k);
      }
    }
  }
  auto try_coeffs = [&](const std::vector<typename F::value_type>& c) -> bool {
    std::vector<typename F::value_type> full(h.dimension(), f.zero());
    for (std::size_t i = 0; i < chosen.size(); ++i) full[chosen[i]] = c[i];
    Morphism<F> cand = h.combination(full);
    for (std::size_t v = 0; v < m.dims().size(); ++v)
      if (!is_invertible(cand.at(v))) return false;
    if (!verify_isomorphism(cand)) return false;
    r.status = IsoStatus::Isomorphic;
    r.witness = std::move(cand);
    return true;
  };
  const std::size_t k = chosen.size();
  const auto order = f.order();
  bool exhaustive = false;
  if (order) {
    long double total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= static_cast<long double>(*order);
    exhaustive = total <= static_cast<long double>(opt.exhaustive_limit);
  }
  if (exhaustive) {
    const std::uint64_t q = *order;
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < k; ++i) count *= q;
    std::vector<typename F::value_type> c(k);
    for (std::uint64_t idx = 1; idx < count; ++idx) {
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < k; ++i) {
        c[i] = f.element(t % q);
        t /= q;
      }
      if (try_coeffs(c)) return r;
    }
    r.status = IsoStatus::NotIsomorphic;
    r.exhaustive = true;
    r.reason = "exhaustive search over Hom found no isomorphism";
    return r;
  }
  std::mt19937_64 rng(opt.seed);
  std::vector<typename F::value_type> c(k);
  for (std::size_t trial = 0; trial < opt.random_trials; ++trial) {
    for (auto& x : c) x = f.random(rng);
    if (try_coeffs(c)) return r;
  }
  r.status = IsoStatus::NotFound;
  r.reason = "randomized search found no isomorphism";
  return r;
}

}  // namespace bqa
