#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqa/representation.hpp"

namespace bqa {

// All reduced row-echelon r x c matrices over a finite prime field.
inline std::vector<Matrix<PrimeField>> rref_matrices(const PrimeField& f, std::size_t r, std::size_t c) {
  std::vector<Matrix<PrimeField>> out;
  const std::uint64_t q = f.characteristic();
  std::vector<std::size_t> piv;
  std::function<void(std::size_t)> choose = [&](std::size_t next_col) {
    // emit for the current pivot set
    std::vector<std::pair<std::size_t, std::size_t>> free_slots;
    for (std::size_t row = 0; row < piv.size(); ++row)
      for (std::size_t col = piv[row] + 1; col < c; ++col)
        if (std::find(piv.begin(), piv.end(), col) == piv.end()) free_slots.emplace_back(row, col);
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < free_slots.size(); ++k) count *= q;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Matrix<PrimeField> m(f, r, c);
      for (std::size_t row = 0; row < piv.size(); ++row) m(row, piv[row]) = 1;
      std::uint64_t t = idx;
      for (const auto& [row, col] : free_slots) {
        m(row, col) = f.element(t % q);
        t /= q;
      }
      out.push_back(std::move(m));
    }
    if (piv.size() == r) return;
    for (std::size_t col = next_col; col < c; ++col) {
      piv.push_back(col);
      choose(col + 1);
      piv.pop_back();
    }
  };
  choose(0);
  return out;
}

// Every rows x cols matrix over a finite prime field.
inline std::vector<Matrix<PrimeField>> all_matrices(const PrimeField& f, std::size_t rows, std::size_t cols) {
  const std::uint64_t p = f.characteristic();
  if (rows * cols * std::log2(static_cast<double>(p)) > 24)
    throw std::length_error("enumeration: a " + std::to_string(rows) + "x" + std::to_string(cols) +
                            " arrow has too many matrices");
  std::uint64_t count = 1;
  for (std::size_t e = 0; e < rows * cols; ++e) count *= p;
  std::vector<Matrix<PrimeField>> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Matrix<PrimeField> m(f, rows, cols);
    std::uint64_t t = idx;
    for (std::size_t e = 0; e < rows * cols; ++e) {
      m(e / cols, e % cols) = f.element(t % p);
      t /= p;
    }
    out.push_back(std::move(m));
  }
  return out;
}

// Nilpotent Jordan forms of size d with x^k = 0: one per partition of d into
// parts of size at most k.
inline std::vector<Matrix<PrimeField>> nilpotent_forms(const PrimeField& f, std::size_t d, std::size_t k) {
  std::vector<Matrix<PrimeField>> out;
  std::vector<std::size_t> parts;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t left, std::size_t cap) {
    if (left == 0) {
      Matrix<PrimeField> m(f, d, d);
      std::size_t at = 0;
      for (auto b : parts) {
        for (std::size_t i = 0; i + 1 < b; ++i) m(at + i + 1, at + i) = 1;
        at += b;
      }
      out.push_back(std::move(m));
      return;
    }
    for (std::size_t b = std::min(left, cap); b >= 1; --b) {
      parts.push_back(b);
      go(left - b, b);
      parts.pop_back();
    }
  };
  go(d, std::max<std::size_t>(k, 1));
  return out;
}

struct EnumerationStats {
  std::uint64_t dimension_vectors = 0;
  std::uint64_t representations = 0;
};

// Calls visit on a set of representations of total dimension 1..max_total
// with connected support that contains every isomorphism class of modules
// with connected support (up to repetitions). Gauge fixing: a loop x with a
// relation x^k = 0 is in nilpotent Jordan form; along a spanning tree of the
// support, every tree arrow is reduced by the group of its new vertex unless
// that group is spent on a loop, and the first tree arrow also by the root.
// Partial assignments are pruned as soon as a relation is fully assigned and
// fails.
inline EnumerationStats enumerate_representations(const AlgebraPtr<PrimeField>& alg, std::size_t max_total,
                                                  const std::function<void(const Representation<PrimeField>&)>& visit) {
  const PrimeField& f = alg->field();
  const Quiver& q = alg->quiver();
  const std::size_t nv = q.num_vertices(), na = q.num_arrows();
  EnumerationStats stats;

  // loops x with a relation x^k = 0 (smallest k per vertex)
  std::vector<std::size_t> loop_arrow(nv, 0), loop_power(nv, 0);
  for (const auto& rel : alg->relations()) {
    if (rel.terms.size() != 1) continue;
    const Path& path = rel.terms.front().second;
    if (path.arrows.empty()) continue;
    const std::size_t a = path.arrows.front();
    if (q.arrow(a).source != q.arrow(a).target) continue;
    if (std::any_of(path.arrows.begin(), path.arrows.end(), [&](std::size_t b) { return b != a; })) continue;
    const std::size_t v = q.arrow(a).source;
    if (!loop_power[v] || path.length() < loop_power[v] ||
        (path.length() == loop_power[v] && a < loop_arrow[v])) {
      loop_arrow[v] = a;
      loop_power[v] = path.length();
    }
  }

  std::vector<std::size_t> dims(nv, 0);
  auto process = [&]() {
    std::vector<std::size_t> support;
    for (std::size_t v = 0; v < nv; ++v)
      if (dims[v]) support.push_back(v);
    if (support.empty()) return;
    // spanning tree by BFS over arrows inside the support
    std::vector<bool> reached(nv, false);
    std::vector<std::size_t> tree;  // arrows, BFS order
    std::vector<bool> is_tree(na, false);
    std::deque<std::size_t> queue{support.front()};
    reached[support.front()] = true;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t a = 0; a < na; ++a) {
        const auto& ar = q.arrow(a);
        if (ar.source != v && ar.target != v) continue;
        const std::size_t w = ar.source == v ? ar.target : ar.source;
        if (!dims[w] || reached[w]) continue;
        reached[w] = true;
        tree.push_back(a);
        is_tree[a] = true;
        queue.push_back(w);
      }
    }
    for (auto v : support)
      if (!reached[v]) return;  // disconnected support
    ++stats.dimension_vectors;

    // GL(d_v) at a vertex with a nilpotent loop puts that loop in Jordan
    // form; otherwise it reduces the tree arrow that reaches v.
    std::vector<bool> jordan(na, false), loop_gauge(nv, false);
    for (auto v : support)
      if (loop_power[v]) {
        loop_gauge[v] = true;
        jordan[loop_arrow[v]] = true;
      }
    std::vector<std::size_t> order;
    for (std::size_t a = 0; a < na; ++a)
      if (jordan[a]) order.push_back(a);
    const std::size_t first_tree = order.size();
    order.insert(order.end(), tree.begin(), tree.end());
    for (std::size_t a = 0; a < na; ++a)
      if (!is_tree[a] && !jordan[a] && dims[q.arrow(a).source] && dims[q.arrow(a).target]) order.push_back(a);
    std::vector<std::vector<Matrix<PrimeField>>> choices(order.size());
    std::vector<bool> placed(nv, false);
    placed[support.front()] = true;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t a = order[k];
      const auto& ar = q.arrow(a);
      const std::size_t rows = dims[ar.target], cols = dims[ar.source];
      if (jordan[a]) {
        choices[k] = nilpotent_forms(f, rows, loop_power[ar.source]);
      } else if (k >= first_tree && k < first_tree + tree.size()) {
        const bool forward = placed[ar.source];  // new vertex is the target
        const std::size_t nw = forward ? ar.target : ar.source;
        const std::size_t old = forward ? ar.source : ar.target;
        placed[nw] = true;
        const bool new_free = !loop_gauge[nw];
        const bool old_free = k == first_tree && !loop_gauge[old];
        if (new_free && old_free) {
          for (std::size_t rk = 0; rk <= std::min(rows, cols); ++rk) {
            Matrix<PrimeField> m(f, rows, cols);
            for (std::size_t i = 0; i < rk; ++i) m(i, i) = 1;
            choices[k].push_back(std::move(m));
          }
        } else if (new_free || old_free) {
          // reduce on the side of the free vertex: rows for the target
          const bool rows_side = (new_free ? nw : old) == ar.target;
          if (rows_side) choices[k] = rref_matrices(f, rows, cols);
          else
            for (auto& m : rref_matrices(f, cols, rows)) choices[k].push_back(m.transpose());
        } else {
          choices[k] = all_matrices(f, rows, cols);
        }
      } else {
        choices[k] = all_matrices(f, rows, cols);
      }
    }
    // relations become checkable after the last of their arrows is assigned
    std::vector<std::size_t> pos(na, 0);
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
    std::vector<std::vector<std::size_t>> checks(order.size());
    const auto& rels = alg->relations();
    for (std::size_t r = 0; r < rels.size(); ++r) {
      const Path& first = rels[r].terms.front().second;
      if (!dims[first.start] || !dims[first.end]) continue;
      std::size_t last = 0;
      bool live = false;
      for (const auto& [c, path] : rels[r].terms) {
        bool nonzero = true;
        std::size_t at = path.start;
        for (auto a : path.arrows) {
          if (!dims[at]) nonzero = false;
          at = q.arrow(a).target;
        }
        if (!dims[at]) nonzero = false;
        if (!nonzero) continue;
        live = true;
        for (auto a : path.arrows) last = std::max(last, pos[a]);
      }
      if (live) checks[last].push_back(r);
    }
    std::vector<Matrix<PrimeField>> maps(na);
    for (std::size_t a = 0; a < na; ++a) maps[a] = Matrix<PrimeField>(f, dims[q.arrow(a).target], dims[q.arrow(a).source]);
    auto relation_holds = [&](std::size_t r) {
      const auto& rel = rels[r];
      const Path& first = rel.terms.front().second;
      Matrix<PrimeField> sum(f, dims[first.end], dims[first.start]);
      for (const auto& [c, path] : rel.terms) {
        Matrix<PrimeField> m = Matrix<PrimeField>::identity(f, dims[path.start]);
        for (auto a : path.arrows) m = maps[a] * m;
        sum = sum + m.scaled(c);
      }
      return sum.is_zero();
    };
    std::function<void(std::size_t)> assign = [&](std::size_t k) {
      if (k == order.size()) {
        ++stats.representations;
        visit(Representation<PrimeField>(Representation<PrimeField>::Trusted{}, alg, dims, maps));
        return;
      }
      const std::size_t a = order[k];
      for (const auto& m : choices[k]) {
        maps[a] = m;
        bool ok = true;
        for (auto r : checks[k])
          if (!relation_holds(r)) {
            ok = false;
            break;
          }
        if (ok) assign(k + 1);
      }
      maps[a] = Matrix<PrimeField>(f, dims[q.arrow(a).target], dims[q.arrow(a).source]);
    };
    assign(0);
  };

  std::function<void(std::size_t, std::size_t)> dimvec = [&](std::size_t v, std::size_t left) {
    if (v == nv) {
      process();
      return;
    }
    for (std::size_t d = 0; d <= left; ++d) {
      dims[v] = d;
      dimvec(v + 1, left - d);
    }
    dims[v] = 0;
  };
  dimvec(0, max_total);
  return stats;
}

}  // namespace bqa
