#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "bqa/linalg.hpp"
#include "bqa/representation.hpp"

namespace bqa::io {

// Layered picture of a module: layer k holds a basis of J^k M / J^{k+1} M
// (one node per basis vector, labelled by its vertex) and an arrow a links a
// node x in layer k to every deeper node y occurring in a.x, written in a
// basis adapted to the radical series.
struct GraphNode {
  std::size_t layer, vertex;
};

struct GraphEdge {
  std::size_t from, to, arrow;
};

struct ModuleGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<std::size_t>> layers;  // node ids per layer

  // vertex names per layer, in node order
  std::vector<std::vector<std::string>> layer_names(const Quiver& q) const {
    std::vector<std::vector<std::string>> out;
    for (const auto& l : layers) {
      out.emplace_back();
      for (auto n : l) out.back().push_back(q.vertex_name(nodes[n].vertex));
    }
    return out;
  }
};

template <class F>
ModuleGraph module_graph(const Representation<F>& m) {
  const F& f = m.field();
  const Quiver& q = m.quiver();
  const std::size_t nv = q.num_vertices();
  // radical filtration R[k][v]
  std::vector<std::vector<Matrix<F>>> r;
  {
    std::vector<Matrix<F>> cur;
    for (std::size_t v = 0; v < nv; ++v) cur.push_back(Matrix<F>::identity(f, m.dim(v)));
    for (;;) {
      std::size_t total = 0;
      for (const auto& b : cur) total += b.cols();
      r.push_back(cur);
      if (!total) break;
      std::vector<Matrix<F>> nxt;
      for (std::size_t w = 0; w < nv; ++w) {
        Matrix<F> img(f, m.dim(w), 0);
        for (auto a : q.arrows_to(w)) img = img.hstack(m.arrow_map(a) * cur[q.arrow(a).source]);
        nxt.push_back(column_space(img));
      }
      cur = std::move(nxt);
    }
  }
  const std::size_t depth = r.size() - 1;  // r[depth] is zero
  // complements C[k][v] of R[k+1] in R[k]
  std::vector<std::vector<Matrix<F>>> c(depth);
  std::vector<std::vector<std::vector<std::size_t>>> ids(depth, std::vector<std::vector<std::size_t>>(nv));
  ModuleGraph g;
  for (std::size_t k = 0; k < depth; ++k) {
    g.layers.emplace_back();
    for (std::size_t v = 0; v < nv; ++v) {
      const Matrix<F>& lower = r[k + 1][v];
      const Matrix<F>& here = r[k][v];
      std::vector<std::size_t> pick;
      if (here.cols() && here.rows()) {
        for (auto p : rref(lower.hstack(here)).pivots)
          if (p >= lower.cols()) pick.push_back(p - lower.cols());
      }
      c[k].push_back(here.select_columns(pick));
      for (std::size_t i = 0; i < pick.size(); ++i) {
        ids[k][v].push_back(g.nodes.size());
        g.layers[k].push_back(g.nodes.size());
        g.nodes.push_back({k, v});
      }
    }
  }
  for (std::size_t k = 0; k + 1 < depth; ++k) {
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const std::size_t v = q.arrow(a).source, w = q.arrow(a).target;
      if (!c[k][v].cols()) continue;
      // R[k+1] at w is the direct sum of the deeper complements
      Matrix<F> basis(f, m.dim(w), 0);
      std::vector<std::size_t> owner;
      for (std::size_t l = k + 1; l < depth; ++l) {
        basis = basis.hstack(c[l][w]);
        for (auto id : ids[l][w]) owner.push_back(id);
      }
      if (!basis.cols()) continue;
      auto y = solve(basis, m.arrow_map(a) * c[k][v]);
      if (!y) throw std::logic_error("module_graph: arrow image outside the radical");
      for (std::size_t i = 0; i < c[k][v].cols(); ++i)
        for (std::size_t j = 0; j < owner.size(); ++j)
          if (!f.is_zero((*y)(j, i))) g.edges.push_back({ids[k][v][i], owner[j], a});
    }
  }
  return g;
}

inline std::string to_dot(const ModuleGraph& g, const Quiver& q, const std::string& title = "M") {
  std::ostringstream o;
  o << "digraph \"" << title << "\" {\n  rankdir=TB;\n";
  for (std::size_t k = 0; k < g.layers.size(); ++k) {
    o << "  { rank=same;";
    for (auto n : g.layers[k]) o << " n" << n << " [label=\"" << q.vertex_name(g.nodes[n].vertex) << "\"];";
    o << " }\n";
  }
  for (const auto& e : g.edges) o << "  n" << e.from << " -> n" << e.to << " [label=\"" << q.arrow(e.arrow).name << "\"];\n";
  o << "}\n";
  return o.str();
}

inline std::string to_ascii(const ModuleGraph& g, const Quiver& q) {
  std::ostringstream o;
  for (std::size_t k = 0; k < g.layers.size(); ++k) {
    o << "layer " << k << ":";
    for (auto n : g.layers[k]) o << " " << q.vertex_name(g.nodes[n].vertex);
    o << "\n";
  }
  for (const auto& e : g.edges)
    o << "  " << q.vertex_name(g.nodes[e.from].vertex) << "[" << e.from << "] --" << q.arrow(e.arrow).name << "--> "
      << q.vertex_name(g.nodes[e.to].vertex) << "[" << e.to << "]\n";
  return o.str();
}

}  // namespace bqa::io
