#pragma once

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bqa/field.hpp"
#include "bqa/linalg.hpp"
#include "bqa/matrix.hpp"
#include "bqa/quiver.hpp"

namespace bqa {

class AlgebraError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedRelations : public std::logic_error {
 public:
  UnsupportedRelations(const std::string& op)
      : std::logic_error(op + ": operation requires monomial relations") {}
};

// A relation: a linear combination of parallel paths of length >= 2. A single
// term is a monomial relation.
template <class F>
struct Relation {
  std::vector<std::pair<typename F::value_type, Path>> terms;

  bool is_monomial() const { return terms.size() == 1; }
  const Path& monomial() const { return terms.front().second; }

  static Relation monomial_of(const F& f, Path p) { return {{{f.one(), std::move(p)}}}; }
};

// The basis and arrow action of an indecomposable projective left module
// Lambda e_i. Basis elements are paths starting at i; slot[k] is the position
// of basis element k inside its end vertex.
template <class F>
struct ProjectiveData {
  std::vector<Path> basis;
  std::vector<std::size_t> dims;
  std::vector<std::size_t> slot;
  std::vector<Matrix<F>> arrow_maps;
};

struct OppositeTag {
  // Vertex and arrow k of the opposite algebra correspond to vertex and arrow
  // k of the original; arrows are reversed and relation paths read backwards.
  std::vector<std::size_t> vertex_correspondence;
  std::vector<std::size_t> arrow_correspondence;
};

template <class F>
class BoundAlgebra {
 public:
  using value_type = typename F::value_type;
  static constexpr std::size_t kDefaultPathCap = 1'000'000;

  BoundAlgebra(Quiver quiver, F field, std::vector<Relation<F>> relations,
               std::size_t path_cap = kDefaultPathCap)
      : quiver_(std::move(quiver)), field_(field), relations_(std::move(relations)) {
    for (std::size_t r = 0; r < relations_.size(); ++r) validate_relation(relations_[r], r);
    for (const auto& rel : relations_) {
      if (rel.is_monomial())
        monomials_.push_back(rel.monomial());
      else
        all_monomial_ = false;
    }
    enumerate_normal_paths(path_cap);
    build_projectives();
  }

  const Quiver& quiver() const { return quiver_; }
  const F& field() const { return field_; }
  const std::vector<Relation<F>>& relations() const { return relations_; }
  bool is_monomial() const { return all_monomial_; }
  std::size_t num_vertices() const { return quiver_.num_vertices(); }
  std::size_t num_arrows() const { return quiver_.num_arrows(); }

  std::size_t dimension() const {
    std::size_t d = 0;
    for (const auto& p : projectives_) d += p.basis.size();
    return d;
  }

  const ProjectiveData<F>& projective_data(std::size_t v) const { return projectives_.at(v); }

  // All normal paths (monomial algebras), grouped by start vertex.
  const std::vector<Path>& normal_basis() const {
    require_monomial("normal_basis");
    return normal_paths_;
  }

  bool is_normal(const Path& p) const {
    require_monomial("is_normal");
    return monomially_normal(p);
  }

  // Normal paths starting at v ordered by (length, arrow order): a basis of
  // Lambda e_v.
  std::vector<Path> normal_basis_at(std::size_t v) const {
    require_monomial("normal_basis_at");
    if (v >= num_vertices()) throw AlgebraError("unknown vertex index " + std::to_string(v));
    return projectives_[v].basis;
  }

  // Normal paths q from end(p) such that q*p is zero but q'*p is not for every
  // proper initial subpath q' of q. These generate the kernel of
  // Lambda e_end(p) -> Lambda p, q |-> q*p.
  std::vector<Path> min_annihilators(const Path& p) const {
    require_monomial("min_annihilators");
    if (!is_valid_path(quiver_, p) || !monomially_normal(p))
      throw AlgebraError("min_annihilators: path is not a normal path");
    std::vector<Path> out;
    std::deque<Path> queue{Path::trivial(p.end)};
    while (!queue.empty()) {
      Path q = std::move(queue.front());
      queue.pop_front();
      for (auto a : quiver_.arrows_from(q.end)) {
        Path ext = *compose(Path::of_arrow(quiver_, a), q);
        if (!monomially_normal(ext)) continue;
        if (!monomially_normal(*compose(ext, p)))
          out.push_back(std::move(ext));
        else
          queue.push_back(std::move(ext));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Every normal q from end(p) with q*p zero (not just the minimal ones).
  std::vector<Path> annihilating_paths(const Path& p) const {
    require_monomial("annihilating_paths");
    std::vector<Path> out;
    for (const auto& q : projectives_.at(p.end).basis)
      if (!monomially_normal(*compose(q, p))) out.push_back(q);
    return out;
  }

  // Opposite algebra: arrows reversed, relation paths read backwards.
  std::pair<BoundAlgebra, OppositeTag> opposite() const {
    std::vector<Relation<F>> rels;
    for (const auto& rel : relations_) {
      Relation<F> r;
      for (const auto& [c, p] : rel.terms) r.terms.push_back({c, reverse(p)});
      rels.push_back(std::move(r));
    }
    OppositeTag tag;
    for (std::size_t v = 0; v < num_vertices(); ++v) tag.vertex_correspondence.push_back(v);
    for (std::size_t a = 0; a < num_arrows(); ++a) tag.arrow_correspondence.push_back(a);
    return {BoundAlgebra(quiver_.reversed(), field_, std::move(rels)), std::move(tag)};
  }

  static Path reverse(const Path& p) {
    Path r{p.end, p.start, p.arrows};
    std::reverse(r.arrows.begin(), r.arrows.end());
    return r;
  }

  // Parses "b*a" (a then b) or "e_v" against this quiver.
  Path parse_path(const std::string& text) const {
    std::vector<std::string> names;
    std::string cur;
    for (char ch : text) {
      if (ch == '*') {
        names.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(ch))) {
        cur += ch;
      }
    }
    names.push_back(cur);
    if (names.size() == 1 && names[0].rfind("e_", 0) == 0 && !quiver_.find_arrow(names[0])) {
      return Path::trivial(quiver_.vertex(names[0].substr(2)));
    }
    Path p;
    for (std::size_t k = names.size(); k-- > 0;) {
      const std::size_t a = quiver_.arrow_id(names[k]);
      if (p.arrows.empty()) {
        p = Path::of_arrow(quiver_, a);
      } else {
        auto c = compose(Path::of_arrow(quiver_, a), p);
        if (!c) throw AlgebraError("path '" + text + "' does not compose");
        p = *c;
      }
    }
    return p;
  }

  std::string path_name(const Path& p) const { return path_to_string(quiver_, p); }

  // True iff no monomial relation occurs as a consecutive subpath.
  bool monomially_normal(const Path& p) const {
    for (const auto& m : monomials_) {
      if (m.arrows.size() > p.arrows.size()) continue;
      auto it = std::search(p.arrows.begin(), p.arrows.end(), m.arrows.begin(), m.arrows.end());
      if (it != p.arrows.end()) return false;
    }
    return true;
  }

 private:
  void require_monomial(const char* op) const {
    if (!all_monomial_) throw UnsupportedRelations(op);
  }

  void validate_relation(const Relation<F>& rel, std::size_t index) const {
    const std::string where = "relation #" + std::to_string(index + 1);
    if (rel.terms.empty()) throw AlgebraError(where + " is empty");
    const Path& first = rel.terms.front().second;
    for (const auto& [c, p] : rel.terms) {
      if (!is_valid_path(quiver_, p)) throw AlgebraError(where + " contains an invalid path");
      if (p.length() < 2) throw AlgebraError(where + " is not contained in J^2 (path of length < 2)");
      if (p.start != first.start || p.end != first.end) throw AlgebraError(where + " mixes non-parallel paths");
      if (field_.is_zero(c)) throw AlgebraError(where + " has a zero coefficient");
    }
  }

  // Breadth-first enumeration of monomially normal paths with a hard cap.
  void enumerate_normal_paths(std::size_t cap) {
    std::size_t count = 0;
    per_vertex_.assign(num_vertices(), {});
    for (std::size_t v = 0; v < num_vertices(); ++v) {
      std::deque<Path> queue{Path::trivial(v)};
      while (!queue.empty()) {
        Path p = std::move(queue.front());
        queue.pop_front();
        if (++count > cap)
          throw AlgebraError("algebra is infinite-dimensional or exceeds the path cap of " + std::to_string(cap) +
                             " normal paths");
        for (auto a : quiver_.arrows_from(p.end)) {
          Path ext = *compose(Path::of_arrow(quiver_, a), p);
          if (monomially_normal(ext)) queue.push_back(std::move(ext));
        }
        per_vertex_[v].push_back(std::move(p));
      }
      std::stable_sort(per_vertex_[v].begin(), per_vertex_[v].end());
    }
    for (const auto& list : per_vertex_) normal_paths_.insert(normal_paths_.end(), list.begin(), list.end());
  }

  void build_projectives() {
    projectives_.clear();
    for (std::size_t v = 0; v < num_vertices(); ++v)
      projectives_.push_back(all_monomial_ ? monomial_projective(v) : general_projective(v));
  }

  ProjectiveData<F> assemble(std::vector<Path> basis) const {
    ProjectiveData<F> d;
    d.basis = std::move(basis);
    d.dims.assign(num_vertices(), 0);
    for (const auto& p : d.basis) d.slot.push_back(d.dims[p.end]++);
    for (std::size_t a = 0; a < num_arrows(); ++a) {
      const auto& arr = quiver_.arrow(a);
      d.arrow_maps.emplace_back(field_, d.dims[arr.target], d.dims[arr.source]);
    }
    return d;
  }

  ProjectiveData<F> monomial_projective(std::size_t v) const {
    ProjectiveData<F> d = assemble(per_vertex_[v]);
    std::unordered_map<Path, std::size_t, PathHash> index;
    for (std::size_t k = 0; k < d.basis.size(); ++k) index[d.basis[k]] = k;
    for (std::size_t k = 0; k < d.basis.size(); ++k) {
      const Path& q = d.basis[k];
      for (auto a : quiver_.arrows_from(q.end)) {
        auto it = index.find(*compose(Path::of_arrow(quiver_, a), q));
        if (it != index.end()) d.arrow_maps[a](d.slot[it->second], d.slot[k]) = field_.one();
      }
    }
    return d;
  }

  // Lambda' e_v / I' e_v, where Lambda' is the monomial part and I' the ideal
  // generated by the remaining relations. The quotient basis is the set of
  // paths that are not leading terms of the reduced ideal basis (leading =
  // largest in path order).
  ProjectiveData<F> general_projective(std::size_t v) const {
    const std::vector<Path>& big = per_vertex_[v];
    const std::size_t n = big.size();
    std::unordered_map<Path, std::size_t, PathHash> index;
    for (std::size_t k = 0; k < n; ++k) index[big[k]] = k;

    auto act = [&](std::size_t arrow, const std::vector<value_type>& w) {
      std::vector<value_type> out(n, field_.zero());
      for (std::size_t k = 0; k < n; ++k) {
        if (field_.is_zero(w[k]) || big[k].end != quiver_.arrow(arrow).source) continue;
        auto it = index.find(*compose(Path::of_arrow(quiver_, arrow), big[k]));
        if (it != index.end()) out[it->second] = field_.add(out[it->second], w[k]);
      }
      return out;
    };

    // Generators r * v' of I' e_v.
    std::vector<std::vector<value_type>> gens;
    for (const auto& rel : relations_) {
      if (rel.is_monomial()) continue;
      const std::size_t s = rel.terms.front().second.start;
      for (const auto& w : big) {
        if (w.end != s) continue;
        std::vector<value_type> g(n, field_.zero());
        for (const auto& [c, p] : rel.terms) {
          auto it = index.find(*compose(p, w));
          if (it != index.end()) g[it->second] = field_.add(g[it->second], c);
        }
        gens.push_back(std::move(g));
      }
    }
    // Closure under left multiplication by arrows; columns are reversed so the
    // pivots pick the largest paths.
    std::vector<std::vector<value_type>> span;
    auto reversed_matrix = [&](const std::vector<std::vector<value_type>>& rows) {
      Matrix<F> m(field_, rows.size(), n);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t k = 0; k < n; ++k) m(r, n - 1 - k) = rows[r][k];
      return m;
    };
    std::size_t current_rank = 0;
    std::deque<std::vector<value_type>> queue(gens.begin(), gens.end());
    while (!queue.empty()) {
      auto g = std::move(queue.front());
      queue.pop_front();
      span.push_back(g);
      const std::size_t r = rank(reversed_matrix(span));
      if (r == current_rank) {
        span.pop_back();
        continue;
      }
      current_rank = r;
      for (std::size_t a = 0; a < num_arrows(); ++a) queue.push_back(act(a, g));
    }
    std::vector<bool> leading(n, false);
    RowEchelon<F> ech{Matrix<F>(field_, 0, n), {}};
    if (!span.empty()) {
      ech = rref(reversed_matrix(span));
      for (auto pc : ech.pivots) leading[n - 1 - pc] = true;
    }
    std::vector<Path> basis;
    std::vector<std::size_t> big_to_small(n, n);
    for (std::size_t k = 0; k < n; ++k)
      if (!leading[k]) {
        big_to_small[k] = basis.size();
        basis.push_back(big[k]);
      }
    ProjectiveData<F> d = assemble(basis);
    auto reduce = [&](std::vector<value_type> w) {
      for (std::size_t r = 0; r < ech.pivots.size(); ++r) {
        const std::size_t k = n - 1 - ech.pivots[r];
        if (field_.is_zero(w[k])) continue;
        const value_type c = w[k];
        for (std::size_t j = 0; j < n; ++j)
          w[j] = field_.sub(w[j], field_.mul(c, ech.reduced(r, n - 1 - j)));
      }
      return w;
    };
    for (std::size_t k = 0; k < basis.size(); ++k) {
      std::vector<value_type> e(n, field_.zero());
      e[index[basis[k]]] = field_.one();
      for (auto a : quiver_.arrows_from(basis[k].end)) {
        auto w = reduce(act(a, e));
        for (std::size_t j = 0; j < n; ++j) {
          if (field_.is_zero(w[j])) continue;
          const std::size_t small = big_to_small[j];
          d.arrow_maps[a](d.slot[small], d.slot[k]) = w[j];
        }
      }
    }
    return d;
  }

  Quiver quiver_;
  F field_;
  std::vector<Relation<F>> relations_;
  std::vector<Path> monomials_;
  bool all_monomial_ = true;
  std::vector<std::vector<Path>> per_vertex_;
  std::vector<Path> normal_paths_;
  std::vector<ProjectiveData<F>> projectives_;
};

template <class F>
using AlgebraPtr = std::shared_ptr<const BoundAlgebra<F>>;

template <class F>
AlgebraPtr<F> make_algebra(Quiver q, F field, std::vector<Relation<F>> rels,
                           std::size_t cap = BoundAlgebra<F>::kDefaultPathCap) {
  return std::make_shared<const BoundAlgebra<F>>(std::move(q), field, std::move(rels), cap);
}

}  // namespace bqa
