#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "bqa/approx.hpp"
#include "bqa/isomorphism.hpp"
#include "bqa/resolution.hpp"
#include "bqa/syzygy.hpp"

namespace bqa::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Entries are strings so that rationals and residues survive unchanged.
template <class F>
json matrix_json(const Matrix<F>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.field().to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

template <class F>
typename F::value_type scalar_from_string(const F& f, const std::string& s) {
  if constexpr (is_rational_field_v<F>) {
    mpq_class q(s);
    q.canonicalize();
    return q;
  } else {
    return f.from_int(std::stoll(s));
  }
}

template <class F>
Matrix<F> matrix_from_json(const F& f, const json& j) {
  const std::size_t rows = j.at("rows"), cols = j.at("cols");
  Matrix<F> m(f, rows, cols);
  const auto& e = j.at("entries");
  if (e.size() != rows) throw std::invalid_argument("matrix: row count mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    if (e[r].size() != cols) throw std::invalid_argument("matrix: column count mismatch");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_string(f, e[r][c].get<std::string>());
  }
  return m;
}

template <class F>
json algebra_json(const BoundAlgebra<F>& alg) {
  const Quiver& q = alg.quiver();
  json verts = json::array(), arrows = json::array();
  for (std::size_t v = 0; v < q.num_vertices(); ++v) verts.push_back(q.vertex_name(v));
  for (std::size_t a = 0; a < q.num_arrows(); ++a)
    arrows.push_back({{"name", q.arrow(a).name},
                      {"source", q.vertex_name(q.arrow(a).source)},
                      {"target", q.vertex_name(q.arrow(a).target)}});
  return json{{"field", alg.field().name()}, {"vertices", verts}, {"arrows", arrows}, {"dimension", alg.dimension()}};
}

template <class F>
json module_json(const Representation<F>& m) {
  json arrows = json::object();
  for (std::size_t a = 0; a < m.quiver().num_arrows(); ++a) arrows[m.quiver().arrow(a).name] = matrix_json(m.arrow_map(a));
  return json{{"dims", m.dims()}, {"arrows", std::move(arrows)}};
}

template <class F>
Representation<F> module_from_json(const AlgebraPtr<F>& alg, const json& j) {
  std::vector<std::size_t> dims = j.at("dims").get<std::vector<std::size_t>>();
  std::vector<Matrix<F>> maps;
  const Quiver& q = alg->quiver();
  for (std::size_t a = 0; a < q.num_arrows(); ++a) maps.push_back(matrix_from_json(alg->field(), j.at("arrows").at(q.arrow(a).name)));
  return Representation<F>(alg, std::move(dims), std::move(maps));
}

template <class F>
json morphism_json(const Morphism<F>& f) {
  json maps = json::array();
  for (const auto& m : f.vertex_maps()) maps.push_back(matrix_json(m));
  return maps;
}

template <class F>
std::vector<Matrix<F>> vertex_maps_from_json(const F& f, const json& j) {
  std::vector<Matrix<F>> out;
  for (const auto& m : j) out.push_back(matrix_from_json(f, m));
  return out;
}

// Modules P_0..P_n, the augmentation P_0 -> M and the differentials P_k -> P_{k-1}.
template <class F>
json resolution_json(const MinimalResolution<F>& res) {
  json steps = json::array();
  for (std::size_t k = 0; k < res.steps.size(); ++k) {
    const auto& s = res.steps[k];
    json step{{"generators", s.free.generators}, {"module", module_json(s.free.module)}};
    step["map"] = morphism_json(k == 0 ? s.map : res.differential(k));
    steps.push_back(std::move(step));
  }
  return json{{"kind", "resolution"},
              {"module", module_json(res.module)},
              {"steps", std::move(steps)},
              {"terminated", res.terminated}};
}

template <class F>
json pdim_json(const PdimResult<F>& p, const Quiver& q) {
  json j;
  if (p.kind == PdimKind::Finite) j["pdim"] = p.value;
  else if (p.kind == PdimKind::Infinite) j["pdim"] = "infinite";
  else j["pdim"] = "unknown";
  j["cutoff"] = p.cutoff;
  j["method"] = p.method;
  if (p.witness_step) j["witness_step"] = *p.witness_step;
  json paths = json::array();
  for (const auto& path : p.witness_paths) paths.push_back(path_to_string(q, path));
  j["witness_paths"] = std::move(paths);
  return j;
}

template <class F>
json isomorphism_json(const Representation<F>& a, const Representation<F>& b, const IsoResult<F>& r) {
  json j{{"kind", "isomorphism"}, {"status", to_string(r.status)}, {"reason", r.reason}, {"exhaustive", r.exhaustive}};
  j["source"] = module_json(a);
  j["target"] = module_json(b);
  if (r.witness) j["witness"] = morphism_json(*r.witness);
  return j;
}

// Cochain certificate for Ext^k(M, N): coboundaries into and out of degree k.
template <class F>
json ext_json(const MinimalResolution<F>& res, const Representation<F>& n, std::size_t k, std::optional<std::size_t> dim) {
  json j{{"kind", "ext"}, {"degree", k}, {"cochain_dimension", cochain_dimension(res, n, k)}};
  if (dim) j["dimension"] = *dim;
  else j["dimension"] = "unknown";
  if (k >= 1 && k < res.steps.size()) j["incoming"] = matrix_json(coboundary(res, n, k));
  if (k + 1 < res.steps.size()) j["outgoing"] = matrix_json(coboundary(res, n, k + 1));
  else if (res.terminated) j["outgoing"] = matrix_json(Matrix<F>(n.field(), 0, cochain_dimension(res, n, k)));
  return j;
}

template <class F>
json approx_json(const ApproximationCertificate<F>& cert, bool embed_ext) {
  const Quiver& q = cert.candidates.front().module.quiver();
  json cands = json::array();
  for (std::size_t i = 0; i < cert.candidates.size(); ++i) {
    const auto& c = cert.candidates[i];
    json e{{"name", c.name}, {"vertex", q.vertex_name(c.vertex)}, {"module", module_json(c.module)}};
    if (c.map) e["map"] = morphism_json(*c.map);
    if (i < cert.pdims.size()) {
      e["pdim"] = pdim_json(cert.pdims[i], q);
      e["resolution"] = resolution_json(cert.pdims[i].resolution);
    }
    cands.push_back(std::move(e));
  }
  json table = json::array();
  for (const auto& row : cert.ext_table) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x ? json(*x) : json("unknown"));
    table.push_back(std::move(r));
  }
  json j{{"kind", "approximation"}, {"verdict", to_string(cert.verdict)}, {"reason", cert.reason}};
  j["candidates"] = std::move(cands);
  j["ext1_table"] = std::move(table);
  if (embed_ext) {
    json ext = json::array();
    for (std::size_t jj = 0; jj < cert.ext_table.size(); ++jj) {
      const auto& res = cert.pdims[jj].resolution;
      if (res.steps.size() < 2) continue;
      for (std::size_t i = 0; i < cert.kernels.size(); ++i) {
        json e = ext_json(res, cert.kernels[i].module, 1, cert.ext_table[jj][i]);
        e["from"] = cert.candidates[jj].name;
        e["to_kernel_of"] = cert.candidates[i].name;
        e["coefficients"] = module_json(cert.kernels[i].module);
        ext.push_back(std::move(e));
      }
    }
    j["ext_cochains"] = std::move(ext);
  }
  return j;
}

// Envelope shared by every command.
inline json report(const std::string& command, json algebra, json inputs, json outputs, json certificates,
                   double seconds) {
  return json{{"schema", kSchemaVersion},
              {"command", command},
              {"algebra", std::move(algebra)},
              {"inputs", std::move(inputs)},
              {"outputs", std::move(outputs)},
              {"certificates", std::move(certificates)},
              {"timings", {{"seconds", seconds}}}};
}

// ---------------------------------------------------------------------------
// Re-verification of embedded matrices. Nothing here computes resolutions,
// Hom spaces or Ext groups; it only checks the claims carried in the document.

struct RecheckReport {
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

namespace detail {

template <class F>
bool contained_in_radical(const Representation<F>& p, const Morphism<F>& d) {
  for (std::size_t v = 0; v < p.dims().size(); ++v)
    if (!column_span_contains(radical_basis_at(p, v), d.at(v))) return false;
  return true;
}

template <class F>
void recheck_resolution(const AlgebraPtr<F>& alg, const json& j, const std::string& where, RecheckReport& rep) {
  auto fail = [&](const std::string& m) { rep.failures.push_back(where + ": " + m); };
  const F& f = alg->field();
  Representation<F> m = module_from_json(alg, j.at("module"));
  std::vector<Representation<F>> p;
  std::vector<Morphism<F>> d;
  const auto& steps = j.at("steps");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    p.push_back(module_from_json(alg, steps[k].at("module")));
    const Representation<F>& tgt = k == 0 ? m : p[k - 1];
    try {
      d.emplace_back(p[k], tgt, vertex_maps_from_json(f, steps[k].at("map")));
    } catch (const std::exception& e) {
      fail("map " + std::to_string(k) + " is not a homomorphism: " + e.what());
      return;
    }
    // projective with the listed generators: top matches and dimension matches the free module
    auto gens = steps[k].at("generators").get<std::vector<std::size_t>>();
    std::vector<std::size_t> expect(alg->num_vertices(), 0), tops(alg->num_vertices(), 0);
    for (auto g : gens) {
      ++tops.at(g);
      for (std::size_t v = 0; v < expect.size(); ++v) expect[v] += alg->projective_data(g).dims[v];
    }
    if (p[k].dims() != expect || top_multiplicities(p[k]) != tops)
      fail("P_" + std::to_string(k) + " is not the projective on its generators");
    ++rep.checked;
  }
  if (p.empty()) {
    if (j.at("terminated").get<bool>() && m.total_dim() != 0) fail("empty resolution of a nonzero module");
    return;
  }
  for (std::size_t v = 0; v < m.dims().size(); ++v)
    if (rank(d[0].at(v)) != m.dim(v)) fail("augmentation is not surjective");
  for (std::size_t k = 1; k < d.size(); ++k) {
    for (std::size_t v = 0; v < m.dims().size(); ++v) {
      const auto prod = d[k - 1].at(v) * d[k].at(v);
      if (!prod.is_zero()) fail("d_" + std::to_string(k - 1) + " d_" + std::to_string(k) + " is not zero");
      const std::size_t ker = p[k - 1].dim(v) - rank(d[k - 1].at(v));
      if (rank(d[k].at(v)) != ker) fail("not exact at P_" + std::to_string(k - 1));
    }
    if (!contained_in_radical(p[k - 1], d[k])) fail("step " + std::to_string(k) + " is not minimal");
    ++rep.checked;
  }
  if (j.at("terminated").get<bool>()) {
    const auto& last = d.back();
    for (std::size_t v = 0; v < m.dims().size(); ++v)
      if (rank(last.at(v)) != p.back().dim(v)) fail("last map is not injective");
  }
}

template <class F>
void recheck_ext(const F& f, const json& j, const std::string& where, RecheckReport& rep) {
  auto fail = [&](const std::string& m) { rep.failures.push_back(where + ": " + m); };
  const std::size_t ck = j.at("cochain_dimension");
  std::size_t rin = 0, rout = 0;
  std::optional<Matrix<F>> in, out;
  if (j.contains("incoming")) in = matrix_from_json(f, j["incoming"]);
  if (j.contains("outgoing")) out = matrix_from_json(f, j["outgoing"]);
  if (in) {
    if (in->rows() != ck) fail("incoming coboundary has the wrong shape");
    rin = rank(*in);
  }
  if (out) {
    if (out->cols() != ck) fail("outgoing coboundary has the wrong shape");
    rout = rank(*out);
  }
  if (in && out && !(*out * *in).is_zero()) fail("coboundaries do not compose to zero");
  if (j.at("dimension").is_number()) {
    if (!out) fail("no outgoing coboundary for a claimed dimension");
    else if (j["dimension"].get<std::size_t>() != ck - rout - rin) fail("claimed Ext dimension does not match ranks");
  }
  ++rep.checked;
}

template <class F>
void recheck_node(const AlgebraPtr<F>& alg, const json& j, const std::string& where, RecheckReport& rep) {
  if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) recheck_node(alg, j[k], where + "[" + std::to_string(k) + "]", rep);
    return;
  }
  if (!j.is_object()) return;
  const std::string kind = j.value("kind", "");
  try {
    if (kind == "resolution") return recheck_resolution(alg, j, where, rep);
    if (kind == "ext") return recheck_ext(alg->field(), j, where, rep);
    if (kind == "isomorphism") {
      if (j.contains("witness")) {
        auto a = module_from_json(alg, j.at("source"));
        auto b = module_from_json(alg, j.at("target"));
        Morphism<F> w(a, b, vertex_maps_from_json(alg->field(), j.at("witness")));
        if (!w.is_isomorphism()) rep.failures.push_back(where + ": witness is not invertible");
        ++rep.checked;
      } else if (j.value("status", "") == "isomorphic") {
        rep.failures.push_back(where + ": isomorphic without a witness");
      }
      return;
    }
    if (kind == "approximation") {
      for (std::size_t i = 0; i < j.at("candidates").size(); ++i) {
        const auto& c = j["candidates"][i];
        const std::string w = where + ".candidates[" + std::to_string(i) + "]";
        auto a = module_from_json(alg, c.at("module"));
        auto v = alg->quiver().find_vertex(c.at("vertex").get<std::string>());
        if (!v) throw std::invalid_argument("unknown vertex");
        if (c.contains("map")) {
          Morphism<F> m(a, simple(alg, *v), vertex_maps_from_json(alg->field(), c["map"]));
          if (!m.is_surjective()) rep.failures.push_back(w + ": map is not surjective");
          ++rep.checked;
        }
        if (c.contains("resolution")) {
          recheck_resolution(alg, c["resolution"], w + ".resolution", rep);
          const auto& pd = c.at("pdim").at("pdim");
          const auto& res = c["resolution"];
          if (pd.is_number() && (!res.at("terminated").get<bool>() || res.at("steps").size() != pd.get<std::size_t>() + 1) &&
              !(pd.get<std::size_t>() == 0 && res.at("steps").size() == 1))
            rep.failures.push_back(w + ": pdim does not match the resolution length");
        }
      }
      if (j.contains("ext_cochains")) recheck_node(alg, j["ext_cochains"], where + ".ext_cochains", rep);
      return;
    }
    for (auto it = j.begin(); it != j.end(); ++it) recheck_node(alg, it.value(), where + "." + it.key(), rep);
  } catch (const std::exception& e) {
    rep.failures.push_back(where + ": malformed certificate: " + e.what());
  }
}

}  // namespace detail

template <class F>
RecheckReport recheck(const AlgebraPtr<F>& alg, const json& doc) {
  RecheckReport rep;
  if (doc.value("schema", 0) != kSchemaVersion) {
    rep.failures.push_back("unsupported schema version");
    return rep;
  }
  if (doc.contains("certificates")) detail::recheck_node(alg, doc["certificates"], "certificates", rep);
  return rep;
}

}  // namespace bqa::io
