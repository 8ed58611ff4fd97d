#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqa/isomorphism.hpp"
#include "bqa/resolution.hpp"
#include "bqa/syzygy.hpp"

namespace bqa {

class CertificateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One approximation candidate A -> S_vertex.
template <class F>
struct Candidate {
  std::size_t vertex = 0;
  std::string name;
  Representation<F> module;
  std::optional<Morphism<F>> map;  // defaults to the canonical top projection
};

// Sends every top generator of type i to 1 in S_i and kills the rest of the top.
template <class F>
Morphism<F> canonical_top_map(const Representation<F>& a, std::size_t i) {
  const F& f = a.field();
  auto s = simple(a.algebra_ptr(), i);
  auto t = top(a);
  if (t.module.dim(i) == 0)
    throw CertificateError("module has no top summand of type " + a.quiver().vertex_name(i));
  std::vector<Matrix<F>> maps;
  for (std::size_t v = 0; v < a.dims().size(); ++v) {
    if (v != i) {
      maps.emplace_back(f, s.dim(v), a.dim(v));
      continue;
    }
    Matrix<F> ones(f, 1, t.module.dim(i));
    for (std::size_t c = 0; c < ones.cols(); ++c) ones(0, c) = f.one();
    maps.push_back(ones * t.projection.at(i));
  }
  return Morphism<F>(typename Morphism<F>::Trusted{}, a, s, std::move(maps));
}

enum class Verdict { Verified, Refuted, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Refuted: return "refuted";
    default: return "inconclusive";
  }
}

template <class F>
struct ApproximationCertificate {
  std::vector<Candidate<F>> candidates;  // maps filled in
  std::vector<Submodule<F>> kernels;
  std::vector<PdimResult<F>> pdims;
  // ext_table[j][i] = dim Ext^1(A_j, K_i)
  std::vector<std::vector<std::optional<std::size_t>>> ext_table;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
};

template <class F>
ApproximationCertificate<F> verify_certificate(const PdimEngine<F>& engine, std::vector<Candidate<F>> candidates) {
  const auto& alg = engine.algebra();
  const std::size_t n = alg->num_vertices();
  if (candidates.size() != n)
    throw CertificateError("expected " + std::to_string(n) + " candidates, got " + std::to_string(candidates.size()));
  std::vector<bool> seen(n, false);
  for (const auto& c : candidates) {
    if (c.vertex >= n || seen[c.vertex]) throw CertificateError("candidates must cover every simple exactly once");
    seen[c.vertex] = true;
  }
  ApproximationCertificate<F> cert;
  auto refute = [&](std::string why) {
    if (cert.verdict != Verdict::Refuted) {
      cert.verdict = Verdict::Refuted;
      cert.reason = std::move(why);
    }
  };
  for (auto& c : candidates) {
    if (!c.map) {
      try {
        c.map = canonical_top_map(c.module, c.vertex);
      } catch (const CertificateError&) {
        c.map = Morphism<F>::zero(c.module, simple(alg, c.vertex));
      }
    }
    if (!c.map->is_intertwining()) refute("map of candidate " + c.name + " is not a homomorphism");
    if (!c.map->is_surjective()) refute("map of candidate " + c.name + " is not surjective");
    cert.kernels.push_back(kernel(*c.map));
  }
  bool unknown = false;
  for (const auto& c : candidates) {
    cert.pdims.push_back(engine.compute(c.module));
    const auto& p = cert.pdims.back();
    if (p.is_infinite()) refute("candidate " + c.name + " has infinite projective dimension");
    if (p.kind == PdimKind::Unknown) unknown = true;
  }
  cert.ext_table.assign(n, std::vector<std::optional<std::size_t>>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const auto& pr = cert.pdims[j].resolution;
    MinimalResolution<F> local;
    const MinimalResolution<F>* use = &pr;
    if (!pr.terminated && pr.steps.size() < 3) {
      local = resolve(candidates[j].module, 2);
      use = &local;
    }
    for (std::size_t i = 0; i < n; ++i) {
      cert.ext_table[j][i] = ext(*use, cert.kernels[i].module, 1).dimension;
      if (!cert.ext_table[j][i]) unknown = true;
      else if (*cert.ext_table[j][i] != 0)
        refute("Ext^1(" + candidates[j].name + ", K_" + candidates[i].name + ") has dimension " +
               std::to_string(*cert.ext_table[j][i]));
    }
  }
  cert.candidates = std::move(candidates);
  if (cert.verdict != Verdict::Refuted) {
    cert.verdict = unknown ? Verdict::Inconclusive : Verdict::Verified;
    cert.reason = unknown ? "some projective dimension is unknown" : "all checks passed";
  }
  return cert;
}

// sup of the candidates' projective dimensions; equals fin.dim = Fin.dim.
template <class F>
std::size_t findim_formula(const ApproximationCertificate<F>& cert) {
  if (cert.verdict != Verdict::Verified) throw CertificateError("certificate is not verified: " + cert.reason);
  std::size_t best = 0;
  for (const auto& p : cert.pdims) best = std::max(best, p.value);
  return best;
}

// ---------------------------------------------------------------------------
// Hom-space scans

// Calls visit(morphism) for elements of Hom(m, n): all of them when the space
// has at most `budget` elements over a finite field, otherwise `budget` random
// combinations. Returns true when the scan was exhaustive. visit returns true
// to stop early.
template <class F>
bool scan_hom(const HomBasis<F>& h, std::uint64_t budget, std::uint64_t seed,
              const std::function<bool(const Morphism<F>&)>& visit) {
  const F& f = h.source.field();
  const std::size_t k = h.dimension();
  const auto order = f.order();
  long double total = 1;
  if (order)
    for (std::size_t i = 0; i < k; ++i) total *= static_cast<long double>(*order);
  std::vector<typename F::value_type> c(k, f.zero());
  if (order && total <= static_cast<long double>(budget)) {
    const std::uint64_t q = *order;
    const auto count = static_cast<std::uint64_t>(total);
    for (std::uint64_t idx = 1; idx < count; ++idx) {
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < k; ++i) {
        c[i] = f.element(t % q);
        t /= q;
      }
      if (visit(h.combination(c))) return true;
    }
    return true;
  }
  std::mt19937_64 rng(seed);
  for (std::uint64_t trial = 0; trial < budget; ++trial) {
    for (auto& x : c) x = f.random(rng);
    if (visit(h.combination(c))) return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Filtrations

template <class F>
struct FiltFactor {
  std::size_t candidate;
  Morphism<F> epimorphism;  // X_k -> A_candidate, kernel X_{k+1}
};

template <class F>
struct FiltCertificate {
  bool found = false;
  bool exhaustive = true;  // every Hom scan was exhaustive
  Representation<F> module;
  std::vector<FiltFactor<F>> factors;

  // sum of factor dimensions equals dim module
  bool dimension_audit(const std::vector<Representation<F>>& candidates) const {
    std::size_t total = 0;
    for (const auto& fa : factors) total += candidates[fa.candidate].total_dim();
    return total == module.total_dim();
  }
};

struct FiltOptions {
  std::uint64_t budget = 1u << 12;
  std::uint64_t seed = 0xf1u;
};

namespace detail {

template <class F>
bool dims_fit(const Representation<F>& small, const Representation<F>& big) {
  for (std::size_t v = 0; v < small.dims().size(); ++v)
    if (small.dim(v) > big.dim(v)) return false;
  return small.total_dim() > 0;
}

template <class F>
bool filt_search(const Representation<F>& x, const std::vector<Representation<F>>& cands, const FiltOptions& opt,
                 std::vector<FiltFactor<F>>& out, bool& exhaustive, std::vector<Representation<F>>& failed) {
  if (x.is_zero()) return true;
  for (const auto& bad : failed)
    if (bad.dims() == x.dims() && is_isomorphic(bad, x).status == IsoStatus::Isomorphic) return false;
  for (std::size_t j = 0; j < cands.size(); ++j) {
    if (!dims_fit(cands[j], x)) continue;
    auto h = hom(x, cands[j]);
    bool success = false;
    bool ex = scan_hom<F>(h, opt.budget, opt.seed + j, [&](const Morphism<F>& phi) {
      if (!phi.is_surjective()) return false;
      auto k = kernel(phi);
      out.push_back({j, phi});
      if (filt_search(k.module, cands, opt, out, exhaustive, failed)) {
        success = true;
        return true;
      }
      out.pop_back();
      return false;
    });
    if (success) return true;
    if (!ex) exhaustive = false;
  }
  failed.push_back(x);
  return false;
}

}  // namespace detail

// Depth-first search for a filtration of X with factors among the candidates.
template <class F>
FiltCertificate<F> filt_check(const Representation<F>& x, const std::vector<Representation<F>>& candidates,
                              const FiltOptions& opt = {}) {
  FiltCertificate<F> cert;
  cert.module = x;
  std::vector<Representation<F>> failed;
  cert.found = detail::filt_search(x, candidates, opt, cert.factors, cert.exhaustive, failed);
  return cert;
}

// Re-checks a filtration certificate from its epimorphisms alone.
template <class F>
bool verify_filt(const FiltCertificate<F>& cert, const std::vector<Representation<F>>& candidates) {
  Representation<F> cur = cert.module;
  for (const auto& fa : cert.factors) {
    const auto& e = fa.epimorphism;
    if (!(e.source() == cur) || !(e.target() == candidates.at(fa.candidate))) return false;
    if (!e.is_intertwining() || !e.is_surjective()) return false;
    cur = kernel(e).module;
  }
  return cur.is_zero() && cert.dimension_audit(candidates);
}

// ---------------------------------------------------------------------------
// Corpus of iterated extensions

template <class F>
struct CorpusMember {
  Representation<F> module;
  std::size_t length = 1;  // filtration length
  std::string origin;
};

struct CorpusOptions {
  std::size_t max_members = 20000;
  IsoOptions iso;
};

template <class F>
class IsoclassSet {
 public:
  // Inserts unless an isomorphic module is present (witness-backed); returns
  // true when inserted. Unresolved randomized negatives keep both copies.
  bool insert(const Representation<F>& m, const IsoOptions& opt = {}) {
    const auto sig = signature(m);
    auto& bucket = buckets_[key(sig)];
    for (auto idx : bucket)
      if (is_isomorphic(items_[idx], m, opt).status == IsoStatus::Isomorphic) return false;
    bucket.push_back(items_.size());
    items_.push_back(m);
    return true;
  }
  const std::vector<Representation<F>>& items() const { return items_; }

 private:
  static std::string key(const ModuleSignature<F>& s) {
    std::ostringstream o;
    auto put = [&](const std::vector<std::size_t>& v) {
      for (auto x : v) o << x << ',';
      o << '|';
    };
    put(s.dims);
    put(s.top);
    put(s.socle);
    for (const auto& l : s.layers) put(l);
    return o.str();
  }
  std::vector<Representation<F>> items_;
  std::map<std::string, std::vector<std::size_t>> buckets_;
};

// Iterated one-step extensions 0 -> Y -> E -> A_j -> 0 (Y of length l - 1, all
// Ext^1 classes up to scalars, split ones included), deduplicated by
// isomorphism. Finite fields only.
template <class F>
std::vector<CorpusMember<F>> filt_corpus(const std::vector<Candidate<F>>& candidates, std::size_t max_length,
                                         const CorpusOptions& opt = {}, bool* truncated = nullptr) {
  if constexpr (is_rational_field_v<F>) {
    throw std::invalid_argument("filt_corpus requires a finite field");
  } else {
    if (truncated) *truncated = false;
    std::vector<CorpusMember<F>> out;
    if (candidates.empty() || max_length == 0) return out;
    const F& f = candidates.front().module.field();
    const std::uint64_t q = f.characteristic();
    IsoclassSet<F> seen;
    std::vector<std::size_t> frontier;
    for (const auto& c : candidates)
      if (seen.insert(c.module, opt.iso)) {
        frontier.push_back(out.size());
        out.push_back({c.module, 1, c.name});
      }
    std::vector<MinimalResolution<F>> res;
    for (const auto& c : candidates) res.push_back(resolve(c.module, 2));
    for (std::size_t len = 2; len <= max_length; ++len) {
      std::vector<std::size_t> next;
      for (auto yi : frontier) {
        for (std::size_t j = 0; j < candidates.size(); ++j) {
          const auto y = out[yi].module;  // copy: out may grow
          const auto e = ext(res[j], y, 1, true);
          const std::size_t d = e.cocycles.size();
          // classes up to scalar: zero, then vectors whose first nonzero entry is 1
          std::vector<std::vector<typename F::value_type>> classes{std::vector<typename F::value_type>(d, f.zero())};
          for (std::size_t lead = 0; lead < d; ++lead) {
            std::uint64_t count = 1;
            for (std::size_t t = lead + 1; t < d; ++t) count *= q;
            for (std::uint64_t idx = 0; idx < count; ++idx) {
              std::vector<typename F::value_type> c(d, f.zero());
              c[lead] = f.one();
              std::uint64_t t = idx;
              for (std::size_t s = lead + 1; s < d; ++s) {
                c[s] = f.element(t % q);
                t /= q;
              }
              classes.push_back(std::move(c));
            }
          }
          for (const auto& cls : classes) {
            if (out.size() >= opt.max_members) {
              if (truncated) *truncated = true;
              return out;
            }
            std::vector<typename F::value_type> cocycle(cochain_dimension(res[j], y, 1), f.zero());
            for (std::size_t s = 0; s < d; ++s)
              for (std::size_t r = 0; r < cocycle.size(); ++r)
                cocycle[r] = f.add(cocycle[r], f.mul(cls[s], e.cocycles[s][r]));
            Morphism<F> c = d == 0 ? Morphism<F>::zero(res[j].syzygy(1), y)
                                   : cocycle_to_syzygy_map(res[j], y, 1, cocycle);
            auto ex = extension_from_cocycle(res[j].steps[0], candidates[j].module, c);
            if (seen.insert(ex.module, opt.iso)) {
              next.push_back(out.size());
              out.push_back({ex.module, len, "ext(" + candidates[j].name + " by " + out[yi].origin + ")"});
            }
          }
        }
      }
      frontier = std::move(next);
    }
    return out;
  }
}

// ---------------------------------------------------------------------------
// Brute-force factorization oracle

template <class F>
struct Counterexample {
  std::string module_name;
  std::size_t vertex;
  std::size_t hom_to_simple;  // dim Hom(X, S_i)
  std::size_t factoring;      // dimension of the maps that factor through f_i
  Representation<F> module;
};

template <class F>
struct BruteForceReport {
  std::size_t modules_checked = 0;
  std::size_t pdim_checks = 0;
  std::vector<Counterexample<F>> counterexamples;
  std::vector<std::string> inconclusive;  // failing modules of unknown pdim
};

// Maps X -> S_i that factor through f_i : A_i -> S_i, as a subspace of
// Hom(X, S_i) = (top X)_i^*; returns (dim Hom(X, S_i), dim of factoring maps).
template <class F>
std::pair<std::size_t, std::size_t> factorization_ranks(const Representation<F>& x, const Candidate<F>& c) {
  const std::size_t i = c.vertex;
  const std::size_t t = top_multiplicities(x)[i];
  if (t == 0) return {0, 0};
  auto h = hom(x, c.module);
  Matrix<F> rows(x.field(), 0, x.dim(i));
  for (std::size_t k = 0; k < h.dimension(); ++k) rows = rows.vstack(c.map->at(i) * h.basis[k][i]);
  return {t, rank(rows)};
}

template <class F>
void brute_force_check_one(const std::string& name, const Representation<F>& x,
                           const std::vector<Candidate<F>>& candidates, const PdimEngine<F>& engine,
                           BruteForceReport<F>& report) {
  ++report.modules_checked;
  std::optional<PdimKind> kind;
  for (const auto& c : candidates) {
    auto [t, fac] = factorization_ranks(x, c);
    if (fac == t) continue;
    if (!kind) {
      ++report.pdim_checks;
      kind = engine.compute(x).kind;
    }
    if (*kind == PdimKind::Infinite) return;  // not in the subcategory
    if (*kind == PdimKind::Unknown) {
      report.inconclusive.push_back(name);
      return;
    }
    report.counterexamples.push_back({name, c.vertex, t, fac, x});
  }
}

// Every map X -> S_i from a finite-pdim X must factor through f_i.
template <class F>
BruteForceReport<F> brute_force_approx_check(const std::vector<Candidate<F>>& candidates,
                                             const std::vector<CorpusMember<F>>& corpus, const PdimEngine<F>& engine) {
  std::vector<Candidate<F>> cands = candidates;
  for (auto& c : cands)
    if (!c.map) c.map = canonical_top_map(c.module, c.vertex);
  BruteForceReport<F> report;
  for (std::size_t k = 0; k < corpus.size(); ++k)
    brute_force_check_one("corpus[" + std::to_string(k) + "] " + corpus[k].origin, corpus[k].module, cands, engine,
                          report);
  return report;
}

}  // namespace bqa
