#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace bqa {

class QuiverError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Arrow {
  std::string name;
  std::size_t source;
  std::size_t target;
};

// Vertices and arrows are identified by their declaration index; names are
// arbitrary unique strings.
class Quiver {
 public:
  std::size_t add_vertex(const std::string& name) {
    if (vertex_index_.count(name)) throw QuiverError("duplicate vertex '" + name + "'");
    if (arrow_index_.count(name)) throw QuiverError("vertex name '" + name + "' clashes with an arrow");
    vertex_index_[name] = vertices_.size();
    vertices_.push_back(name);
    out_.emplace_back();
    in_.emplace_back();
    return vertices_.size() - 1;
  }

  std::size_t add_arrow(const std::string& name, std::size_t source, std::size_t target) {
    if (arrow_index_.count(name)) throw QuiverError("duplicate arrow '" + name + "'");
    if (vertex_index_.count(name)) throw QuiverError("arrow name '" + name + "' clashes with a vertex");
    if (source >= vertices_.size() || target >= vertices_.size())
      throw QuiverError("arrow '" + name + "' has an unknown endpoint");
    arrow_index_[name] = arrows_.size();
    arrows_.push_back({name, source, target});
    out_[source].push_back(arrows_.size() - 1);
    in_[target].push_back(arrows_.size() - 1);
    return arrows_.size() - 1;
  }

  std::size_t add_arrow(const std::string& name, const std::string& source, const std::string& target) {
    return add_arrow(name, vertex(source), vertex(target));
  }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_arrows() const { return arrows_.size(); }
  const std::string& vertex_name(std::size_t v) const { return vertices_.at(v); }
  const Arrow& arrow(std::size_t a) const { return arrows_.at(a); }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const std::vector<std::string>& vertex_names() const { return vertices_; }
  const std::vector<std::size_t>& arrows_from(std::size_t v) const { return out_.at(v); }
  const std::vector<std::size_t>& arrows_to(std::size_t v) const { return in_.at(v); }

  std::optional<std::size_t> find_vertex(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> find_arrow(const std::string& name) const {
    auto it = arrow_index_.find(name);
    if (it == arrow_index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t vertex(const std::string& name) const {
    auto v = find_vertex(name);
    if (!v) throw QuiverError("unknown vertex '" + name + "'");
    return *v;
  }
  std::size_t arrow_id(const std::string& name) const {
    auto a = find_arrow(name);
    if (!a) throw QuiverError("unknown arrow '" + name + "'");
    return *a;
  }

  // Same vertices, every arrow reversed.
  Quiver reversed() const {
    Quiver q;
    for (const auto& v : vertices_) q.add_vertex(v);
    for (const auto& a : arrows_) q.add_arrow(a.name, a.target, a.source);
    return q;
  }

  bool operator==(const Quiver& o) const {
    if (vertices_ != o.vertices_ || arrows_.size() != o.arrows_.size()) return false;
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
      const auto &a = arrows_[i], &b = o.arrows_[i];
      if (a.name != b.name || a.source != b.source || a.target != b.target) return false;
    }
    return true;
  }

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
  std::vector<std::vector<std::size_t>> out_, in_;
  std::unordered_map<std::string, std::size_t> vertex_index_, arrow_index_;
};

// A path: arrows applied first-to-last starting at `start`. The empty arrow
// list is the trivial path e_start.
struct Path {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::size_t> arrows;

  static Path trivial(std::size_t v) { return {v, v, {}}; }
  static Path of_arrow(const Quiver& q, std::size_t a) { return {q.arrow(a).source, q.arrow(a).target, {a}}; }

  std::size_t length() const { return arrows.size(); }
  bool is_trivial() const { return arrows.empty(); }

  bool operator==(const Path& o) const { return start == o.start && end == o.end && arrows == o.arrows; }
  bool operator!=(const Path& o) const { return !(*this == o); }

  // Order by length, then lexicographically by arrow index; trivial paths by vertex.
  bool operator<(const Path& o) const {
    if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
    if (arrows != o.arrows) return arrows < o.arrows;
    return start < o.start;
  }
};

struct PathHash {
  std::size_t operator()(const Path& p) const {
    std::size_t h = p.start * 1000003u + p.end;
    for (auto a : p.arrows) h = h * 31u + a + 1;
    return h;
  }
};

inline bool is_valid_path(const Quiver& q, const Path& p) {
  if (p.start >= q.num_vertices() || p.end >= q.num_vertices()) return false;
  std::size_t at = p.start;
  for (auto a : p.arrows) {
    if (a >= q.num_arrows() || q.arrow(a).source != at) return false;
    at = q.arrow(a).target;
  }
  return at == p.end;
}

// q * p: "p then q". Defined iff end(p) = start(q).
inline std::optional<Path> compose(const Path& q, const Path& p) {
  if (p.end != q.start) return std::nullopt;
  Path r{p.start, q.end, p.arrows};
  r.arrows.insert(r.arrows.end(), q.arrows.begin(), q.arrows.end());
  return r;
}

// Proper initial subpath test in the first-to-last reading.
inline bool is_prefix(const Path& prefix, const Path& p) {
  return prefix.start == p.start && prefix.arrows.size() <= p.arrows.size() &&
         std::equal(prefix.arrows.begin(), prefix.arrows.end(), p.arrows.begin());
}

// Written in multiplicative notation, last arrow first: "mu*eps".
inline std::string path_to_string(const Quiver& q, const Path& p) {
  if (p.is_trivial()) return "e_" + q.vertex_name(p.start);
  std::string s;
  for (std::size_t k = p.arrows.size(); k-- > 0;) {
    s += q.arrow(p.arrows[k]).name;
    if (k) s += "*";
  }
  return s;
}

}  // namespace bqa
