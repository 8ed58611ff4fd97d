#pragma once

#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqa/algebra.hpp"
#include "bqa/linalg.hpp"
#include "bqa/matrix.hpp"

namespace bqa {

class InvalidRepresentation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A finite-dimensional left module: one vector space per vertex and one
// matrix (dims[target] x dims[source]) per arrow, annihilating every relation.
template <class F>
class Representation {
 public:
  using value_type = typename F::value_type;
  using Vector = std::vector<value_type>;

  Representation() = default;

  Representation(AlgebraPtr<F> algebra, std::vector<std::size_t> dims, std::vector<Matrix<F>> arrow_maps)
      : algebra_(std::move(algebra)), dims_(std::move(dims)), maps_(std::move(arrow_maps)) {
    check_shapes();
    if (auto bad = violated_relation()) throw InvalidRepresentation("relation " + *bad + " does not vanish");
  }

  struct Trusted {};
  // Skips the relation check; used for modules built from verified pieces.
  Representation(Trusted, AlgebraPtr<F> algebra, std::vector<std::size_t> dims, std::vector<Matrix<F>> arrow_maps)
      : algebra_(std::move(algebra)), dims_(std::move(dims)), maps_(std::move(arrow_maps)) {
    check_shapes();
  }

  static Representation zero(AlgebraPtr<F> algebra) {
    std::vector<std::size_t> dims(algebra->num_vertices(), 0);
    std::vector<Matrix<F>> maps;
    for (std::size_t a = 0; a < algebra->num_arrows(); ++a) maps.emplace_back(algebra->field(), 0, 0);
    return Representation(Trusted{}, std::move(algebra), std::move(dims), std::move(maps));
  }

  const AlgebraPtr<F>& algebra_ptr() const { return algebra_; }
  const BoundAlgebra<F>& algebra() const { return *algebra_; }
  const F& field() const { return algebra_->field(); }
  const Quiver& quiver() const { return algebra_->quiver(); }

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t v) const { return dims_.at(v); }
  std::size_t total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0}); }
  bool is_zero() const { return total_dim() == 0; }
  const Matrix<F>& arrow_map(std::size_t a) const { return maps_.at(a); }
  const std::vector<Matrix<F>>& arrow_maps() const { return maps_; }

  // Offset of vertex v in the global (vertex-major) coordinate vector.
  std::size_t offset(std::size_t v) const {
    std::size_t o = 0;
    for (std::size_t u = 0; u < v; ++u) o += dims_[u];
    return o;
  }

  // Matrix of left multiplication by a path: dims[end] x dims[start].
  Matrix<F> path_action(const Path& p) const {
    Matrix<F> m = Matrix<F>::identity(field(), dims_[p.start]);
    for (auto a : p.arrows) m = maps_[a] * m;
    return m;
  }

  // The path applied to a vector of the start vertex.
  Vector act(const Path& p, Vector v) const {
    for (auto a : p.arrows) v = maps_[a].apply(v);
    return v;
  }

  // Name of the first relation that does not vanish, if any.
  std::optional<std::string> violated_relation() const {
    const F& f = field();
    for (const auto& rel : algebra_->relations()) {
      const Path& first = rel.terms.front().second;
      Matrix<F> sum(f, dims_[first.end], dims_[first.start]);
      for (const auto& [c, p] : rel.terms) sum = sum + path_action(p).scaled(c);
      if (!sum.is_zero()) {
        std::string name;
        for (const auto& [c, p] : rel.terms) name += (name.empty() ? "" : " + ") + algebra_->path_name(p);
        return name;
      }
    }
    return std::nullopt;
  }

  bool relations_hold() const { return !violated_relation().has_value(); }

  bool operator==(const Representation& o) const { return dims_ == o.dims_ && maps_ == o.maps_; }

 private:
  void check_shapes() const {
    if (!algebra_) throw InvalidRepresentation("representation without algebra");
    const Quiver& q = algebra_->quiver();
    if (dims_.size() != q.num_vertices()) throw InvalidRepresentation("dimension vector has wrong length");
    if (maps_.size() != q.num_arrows()) throw InvalidRepresentation("wrong number of arrow maps");
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const auto& arr = q.arrow(a);
      if (maps_[a].rows() != dims_[arr.target] || maps_[a].cols() != dims_[arr.source])
        throw InvalidRepresentation("arrow '" + arr.name + "' needs a " + std::to_string(dims_[arr.target]) + "x" +
                                    std::to_string(dims_[arr.source]) + " matrix, got " + maps_[a].shape());
    }
  }

  AlgebraPtr<F> algebra_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix<F>> maps_;
};

// Vertex-indexed matrices intertwining two representations.
template <class F>
class Morphism {
 public:
  Morphism() = default;

  Morphism(Representation<F> source, Representation<F> target, std::vector<Matrix<F>> vertex_maps)
      : source_(std::move(source)), target_(std::move(target)), maps_(std::move(vertex_maps)) {
    check_shapes();
    if (!is_intertwining()) throw InvalidRepresentation("vertex maps do not commute with the arrows");
  }

  struct Trusted {};
  Morphism(Trusted, Representation<F> source, Representation<F> target, std::vector<Matrix<F>> vertex_maps)
      : source_(std::move(source)), target_(std::move(target)), maps_(std::move(vertex_maps)) {
    check_shapes();
  }

  static Morphism zero(const Representation<F>& s, const Representation<F>& t) {
    std::vector<Matrix<F>> maps;
    for (std::size_t v = 0; v < s.dims().size(); ++v) maps.emplace_back(s.field(), t.dim(v), s.dim(v));
    return Morphism(Trusted{}, s, t, std::move(maps));
  }

  static Morphism identity(const Representation<F>& m) {
    std::vector<Matrix<F>> maps;
    for (std::size_t v = 0; v < m.dims().size(); ++v) maps.push_back(Matrix<F>::identity(m.field(), m.dim(v)));
    return Morphism(Trusted{}, m, m, std::move(maps));
  }

  const Representation<F>& source() const { return source_; }
  const Representation<F>& target() const { return target_; }
  const Matrix<F>& at(std::size_t v) const { return maps_.at(v); }
  const std::vector<Matrix<F>>& vertex_maps() const { return maps_; }

  bool is_intertwining() const {
    const Quiver& q = source_.quiver();
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const auto& arr = q.arrow(a);
      if (!(target_.arrow_map(a) * maps_[arr.source] == maps_[arr.target] * source_.arrow_map(a))) return false;
    }
    return true;
  }

  std::size_t rank_at(std::size_t v) const { return rank(maps_[v]); }

  bool is_surjective() const {
    for (std::size_t v = 0; v < maps_.size(); ++v)
      if (rank_at(v) != target_.dim(v)) return false;
    return true;
  }
  bool is_injective() const {
    for (std::size_t v = 0; v < maps_.size(); ++v)
      if (rank_at(v) != source_.dim(v)) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& m : maps_)
      if (!m.is_zero()) return false;
    return true;
  }
  bool is_isomorphism() const { return is_injective() && is_surjective(); }

  Morphism operator+(const Morphism& o) const {
    std::vector<Matrix<F>> maps;
    for (std::size_t v = 0; v < maps_.size(); ++v) maps.push_back(maps_[v] + o.maps_[v]);
    return Morphism(Trusted{}, source_, target_, std::move(maps));
  }
  Morphism scaled(const typename F::value_type& c) const {
    std::vector<Matrix<F>> maps;
    for (const auto& m : maps_) maps.push_back(m.scaled(c));
    return Morphism(Trusted{}, source_, target_, std::move(maps));
  }

  // Global block-diagonal matrix (vertex-major coordinates).
  Matrix<F> global_matrix() const { return block_diagonal(source_.field(), maps_); }

  bool operator==(const Morphism& o) const { return maps_ == o.maps_; }

 private:
  void check_shapes() const {
    const std::size_t n = source_.dims().size();
    if (target_.dims().size() != n || maps_.size() != n) throw InvalidRepresentation("morphism vertex count mismatch");
    for (std::size_t v = 0; v < n; ++v)
      if (maps_[v].rows() != target_.dim(v) || maps_[v].cols() != source_.dim(v))
        throw InvalidRepresentation("morphism map at vertex " + std::to_string(v) + " has wrong shape");
  }

  Representation<F> source_;
  Representation<F> target_;
  std::vector<Matrix<F>> maps_;
};

// g o f
template <class F>
Morphism<F> compose(const Morphism<F>& g, const Morphism<F>& f) {
  std::vector<Matrix<F>> maps;
  for (std::size_t v = 0; v < f.vertex_maps().size(); ++v) maps.push_back(g.at(v) * f.at(v));
  return Morphism<F>(typename Morphism<F>::Trusted{}, f.source(), g.target(), std::move(maps));
}

}  // namespace bqa
