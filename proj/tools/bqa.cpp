#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bqa/bqa.hpp"

namespace {

using bqa::io::json;

enum ExitCode { kOk = 0, kRefuted = 1, kUnknown = 2, kInputError = 3 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string file;
  std::vector<std::string> params;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, long long> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, long long> out;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos) throw InputError("--param expects NAME=VALUE, got '" + it + "'");
    try {
      out[it.substr(0, eq)] = std::stoll(it.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("--param value must be an integer: '" + it + "'");
    }
  }
  return out;
}

bqa::io::AnySpec load(const Common& c) {
  const std::string text = read_file(c.file);
  try {
    return bqa::io::parse(text, parse_params(c.params));
  } catch (const bqa::io::ParseError& e) {
    throw InputError(c.file + ":" + e.what());
  }
}

template <class F>
const bqa::Representation<F>& need_module(const bqa::io::SpecFile<F>& spec, const std::string& name) {
  if (auto* m = spec.find_module(name)) return *m;
  throw InputError("unknown module '" + name + "'");
}

template <class F>
std::vector<bqa::Candidate<F>> need_candidates(const bqa::io::SpecFile<F>& spec, const std::string& set) {
  try {
    return bqa::io::load_candidates(spec, set);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

class Timer {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

template <class F>
json algebra_info(const bqa::io::SpecFile<F>& spec) {
  json j = bqa::io::algebra_json(*spec.module_algebra);
  j["side"] = spec.right_side ? "right" : "left";
  if (!spec.params.empty()) j["params"] = spec.params;
  return j;
}

// ---------------------------------------------------------------------------

struct PdimArgs {
  std::string module;
  std::size_t cutoff = 0;
};

template <class F>
int run_pdim(const Common& c, const bqa::io::SpecFile<F>& spec, const PdimArgs& a) {
  Timer t;
  const auto& m = need_module(spec, a.module);
  bqa::PdimOptions opt;
  opt.cutoff = a.cutoff;
  bqa::PdimEngine<F> engine(spec.module_algebra, opt);
  auto r = engine.compute(m);
  json out = bqa::io::pdim_json(r, spec.module_algebra->quiver());
  emit(bqa::io::report("pdim", algebra_info(spec), {{"file", c.file}, {"module", a.module}}, out,
                       json::array({bqa::io::resolution_json(r.resolution)}), t.seconds()));
  return r.kind == bqa::PdimKind::Unknown ? kUnknown : kOk;
}

struct ResolveArgs {
  std::string module, dot;
  std::size_t max_steps = 8;
};

template <class F>
int run_resolve(const Common& c, const bqa::io::SpecFile<F>& spec, const ResolveArgs& a) {
  Timer t;
  const auto& m = need_module(spec, a.module);
  auto res = bqa::resolve(m, a.max_steps);
  const bqa::Quiver& q = spec.module_algebra->quiver();
  json steps = json::array();
  for (std::size_t k = 0; k < res.steps.size(); ++k) {
    json mult = json::object();
    auto mu = res.steps[k].free.multiplicities();
    for (std::size_t v = 0; v < mu.size(); ++v)
      if (mu[v]) mult[q.vertex_name(v)] = mu[v];
    steps.push_back({{"degree", k}, {"projective", mult}, {"syzygy_dims", res.steps[k].kernel.module.dims()}});
  }
  json out{{"steps", steps}, {"terminated", res.terminated}};
  if (res.terminated) out["length"] = *res.length();
  if (!a.dot.empty()) {
    std::string dot = "digraph resolution {\n  compound=true;\n";
    for (std::size_t k = 0; k <= res.steps.size(); ++k) {
      const auto& mod = k == 0 ? res.module : res.steps[k - 1].kernel.module;
      std::string sub = bqa::io::to_dot(bqa::io::module_graph(mod), q, "syz" + std::to_string(k));
      // inline as a cluster, prefixing node ids
      std::string body = sub.substr(sub.find('\n') + 1);
      body = body.substr(0, body.rfind('}'));
      std::string renamed;
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == 'n' && i + 1 < body.size() && std::isdigit(static_cast<unsigned char>(body[i + 1])) &&
            (i == 0 || body[i - 1] == ' ' || body[i - 1] == '\n'))
          renamed += "s" + std::to_string(k) + "_n";
        else
          renamed += body[i];
      }
      dot += "  subgraph cluster_" + std::to_string(k) + " {\n    label=\"" + (k == 0 ? std::string("M") : "syzygy " + std::to_string(k)) +
             "\";\n" + renamed + "  }\n";
    }
    dot += "}\n";
    write_text(a.dot, dot);
  }
  emit(bqa::io::report("resolve", algebra_info(spec), {{"file", c.file}, {"module", a.module}, {"max_steps", a.max_steps}},
                       out, json::array({bqa::io::resolution_json(res)}), t.seconds()));
  return kOk;
}

struct ExtArgs {
  std::string from, to;
  std::size_t degree = 1;
};

template <class F>
int run_ext(const Common& c, const bqa::io::SpecFile<F>& spec, const ExtArgs& a) {
  Timer t;
  const auto& m = need_module(spec, a.from);
  const auto& n = need_module(spec, a.to);
  auto res = bqa::resolve(m, a.degree + 1);
  auto e = bqa::ext(res, n, a.degree);
  json out{{"degree", a.degree}};
  out["dimension"] = e.dimension ? json(*e.dimension) : json("unknown");
  emit(bqa::io::report("ext", algebra_info(spec), {{"file", c.file}, {"from", a.from}, {"to", a.to}, {"degree", a.degree}},
                       out, json::array({bqa::io::resolution_json(res), bqa::io::ext_json(res, n, a.degree, e.dimension)}),
                       t.seconds()));
  return e.dimension ? kOk : kUnknown;
}

struct GraphArgs {
  std::string dot;
};

template <class F>
int run_syzygy_graph(const Common& c, const bqa::io::SpecFile<F>& spec, const GraphArgs& a) {
  Timer t;
  const auto& alg = *spec.module_algebra;
  if (!alg.is_monomial()) throw InputError("the syzygy digraph needs monomial relations");
  auto g = bqa::syzygy_digraph(alg);
  const bqa::Quiver& q = alg.quiver();
  json nodes = json::array();
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    json targets = json::array();
    for (auto e : g.edges[k]) targets.push_back(bqa::path_to_string(q, g.nodes[e]));
    nodes.push_back({{"path", bqa::path_to_string(q, g.nodes[k])},
                     {"label", g.label[k] ? json(*g.label[k]) : json("infinite")},
                     {"edges", targets}});
  }
  if (!a.dot.empty()) {
    std::ostringstream o;
    o << "digraph syzygy {\n";
    for (std::size_t k = 0; k < g.nodes.size(); ++k)
      o << "  p" << k << " [label=\"" << bqa::path_to_string(q, g.nodes[k]) << " ("
        << (g.label[k] ? std::to_string(*g.label[k]) : std::string("inf")) << ")\"];\n";
    for (std::size_t k = 0; k < g.nodes.size(); ++k)
      for (auto e : g.edges[k]) o << "  p" << k << " -> p" << e << ";\n";
    o << "}\n";
    write_text(a.dot, o.str());
  }
  json out{{"nodes", nodes}, {"max_finite_label", g.max_finite_label()}, {"cutoff", g.max_finite_label() + 3}};
  emit(bqa::io::report("syzygy-graph", algebra_info(spec), {{"file", c.file}}, out, json::array(), t.seconds()));
  return kOk;
}

struct ApproxArgs {
  std::string candidates;
  bool brute_force = false;
  std::size_t filt_length = 2;
  std::size_t dim_bound = 0;
  bool no_cochains = false;
};

template <class F>
int run_verify_approx(const Common& c, const bqa::io::SpecFile<F>& spec, const ApproxArgs& a) {
  Timer t;
  auto cands = need_candidates(spec, a.candidates);
  bqa::PdimEngine<F> engine(spec.module_algebra);
  bqa::ApproximationCertificate<F> cert;
  try {
    cert = bqa::verify_certificate(engine, cands);
  } catch (const bqa::CertificateError& e) {
    throw InputError(e.what());
  }
  json out{{"verdict", bqa::to_string(cert.verdict)}, {"reason", cert.reason}};
  json pd = json::object();
  for (std::size_t i = 0; i < cert.candidates.size(); ++i) pd[cert.candidates[i].name] = cert.pdims[i].to_string();
  out["pdims"] = pd;
  if (cert.verdict == bqa::Verdict::Verified) out["Fin_dim"] = bqa::findim_formula(cert);
  int code = cert.verdict == bqa::Verdict::Verified ? kOk : cert.verdict == bqa::Verdict::Refuted ? kRefuted : kUnknown;
  if (a.brute_force) {
    if constexpr (bqa::is_rational_field_v<F>) {
      throw InputError("--brute-force needs a finite field");
    } else {
      bool truncated = false;
      auto corpus = bqa::filt_corpus(cert.candidates, a.filt_length, {}, &truncated);
      auto rep = bqa::brute_force_approx_check(cert.candidates, corpus, engine);
      std::uint64_t enumerated = 0;
      if (a.dim_bound) {
        auto st = bqa::enumerate_representations(spec.module_algebra, a.dim_bound, [&](const bqa::Representation<F>& x) {
          bqa::brute_force_check_one("enumerated[" + std::to_string(enumerated++) + "]", x, cert.candidates, engine, rep);
        });
        (void)st;
      }
      const bqa::Quiver& q = spec.module_algebra->quiver();
      json ces = json::array();
      for (const auto& ce : rep.counterexamples)
        ces.push_back({{"module", ce.module_name},
                       {"vertex", q.vertex_name(ce.vertex)},
                       {"hom_to_simple", ce.hom_to_simple},
                       {"factoring", ce.factoring},
                       {"representation", bqa::io::module_json(ce.module)}});
      out["brute_force"] = {{"corpus_size", corpus.size()},
                            {"corpus_truncated", truncated},
                            {"enumerated", enumerated},
                            {"modules_checked", rep.modules_checked},
                            {"pdim_checks", rep.pdim_checks},
                            {"counterexamples", ces},
                            {"inconclusive", rep.inconclusive.size()}};
      if (!rep.counterexamples.empty()) code = kRefuted;
      else if (code == kOk && (!rep.inconclusive.empty() || truncated)) code = kUnknown;
    }
  }
  emit(bqa::io::report("verify-approx", algebra_info(spec), {{"file", c.file}, {"candidates", a.candidates}}, out,
                       json::array({bqa::io::approx_json(cert, !a.no_cochains)}), t.seconds()));
  return code;
}

template <class F>
int run_findim(const Common& c, const bqa::io::SpecFile<F>& spec, const std::string& set) {
  Timer t;
  auto cands = need_candidates(spec, set);
  bqa::PdimEngine<F> engine(spec.module_algebra);
  bqa::ApproximationCertificate<F> cert;
  try {
    cert = bqa::verify_certificate(engine, cands);
  } catch (const bqa::CertificateError& e) {
    throw InputError(e.what());
  }
  json out{{"verdict", bqa::to_string(cert.verdict)}, {"reason", cert.reason}};
  int code = kOk;
  if (cert.verdict == bqa::Verdict::Verified) {
    const auto d = bqa::findim_formula(cert);
    out["fin_dim"] = d;
    out["Fin_dim"] = d;
  } else {
    out["fin_dim"] = "unknown";
    out["Fin_dim"] = "unknown";
    code = cert.verdict == bqa::Verdict::Refuted ? kRefuted : kUnknown;
  }
  emit(bqa::io::report("findim", algebra_info(spec), {{"file", c.file}, {"candidates", set}}, out,
                       json::array({bqa::io::approx_json(cert, false)}), t.seconds()));
  return code;
}

struct FiltArgs {
  std::string module, candidates;
  std::uint64_t budget = 1u << 12;
};

template <class F>
int run_filt_check(const Common& c, const bqa::io::SpecFile<F>& spec, const FiltArgs& a) {
  Timer t;
  const auto& x = need_module(spec, a.module);
  auto cands = need_candidates(spec, a.candidates);
  std::vector<bqa::Representation<F>> mods;
  for (const auto& cd : cands) mods.push_back(cd.module);
  bqa::FiltOptions opt;
  opt.budget = a.budget;
  auto cert = bqa::filt_check(x, mods, opt);
  json factors = json::array();
  for (const auto& f : cert.factors)
    factors.push_back({{"candidate", cands[f.candidate].name}, {"epimorphism", bqa::io::morphism_json(f.epimorphism)}});
  json out{{"found", cert.found}, {"exhaustive", cert.exhaustive}};
  if (cert.found) out["verified"] = bqa::verify_filt(cert, mods);
  json certs = json::array({{{"kind", "filtration"}, {"factors", factors}}});
  emit(bqa::io::report("filt-check", algebra_info(spec), {{"file", c.file}, {"module", a.module}, {"candidates", a.candidates}},
                       out, certs, t.seconds()));
  if (cert.found) return kOk;
  return cert.exhaustive ? kRefuted : kUnknown;
}

struct RenderArgs {
  std::string module, dot;
};

template <class F>
int run_render(const Common& c, const bqa::io::SpecFile<F>& spec, const RenderArgs& a) {
  Timer t;
  const auto& m = need_module(spec, a.module);
  const bqa::Quiver& q = spec.module_algebra->quiver();
  auto g = bqa::io::module_graph(m);
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"arrow", q.arrow(e.arrow).name}});
  json out{{"layers", g.layer_names(q)}, {"edges", edges}, {"ascii", bqa::io::to_ascii(g, q)}};
  if (!a.dot.empty()) write_text(a.dot, bqa::io::to_dot(g, q, a.module));
  emit(bqa::io::report("render", algebra_info(spec), {{"file", c.file}, {"module", a.module}}, out, json::array(),
                       t.seconds()));
  return kOk;
}

// The declared algebra becomes its opposite and the side flips, so every
// module block keeps its meaning.
template <class F>
int run_opposite(const Common& c, const bqa::io::SpecFile<F>& spec, const std::string& out_path) {
  Timer t;
  bqa::io::SpecFile<F> op = spec;
  auto opp = spec.algebra->opposite().first;
  op.quiver = opp.quiver();
  op.relations = opp.relations();
  op.right_side = !spec.right_side;
  op.algebra = std::make_shared<const bqa::BoundAlgebra<F>>(std::move(opp));
  write_text(out_path, bqa::io::serialize(op));
  emit(bqa::io::report("opposite", algebra_info(spec), {{"file", c.file}}, {{"written", out_path}}, json::array(),
                       t.seconds()));
  return kOk;
}

template <class F>
int run_recheck(const Common& c, const bqa::io::SpecFile<F>& spec, const std::string& report_path) {
  Timer t;
  json doc;
  try {
    doc = json::parse(read_file(report_path));
  } catch (const json::exception& e) {
    throw InputError(std::string("bad JSON: ") + e.what());
  }
  auto rep = bqa::io::recheck(spec.module_algebra, doc);
  json out{{"ok", rep.ok()}, {"checked", rep.checked}, {"failures", rep.failures}};
  emit(bqa::io::report("recheck", algebra_info(spec), {{"file", c.file}, {"report", report_path}}, out, json::array(),
                       t.seconds()));
  return rep.ok() ? kOk : kRefuted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homological computations over bound quiver algebras"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", common.file, "algebra file")->required();
    sub->add_option("--param", common.params, "override a file parameter, NAME=VALUE");
  };

  PdimArgs pdim_args;
  auto* pdim = app.add_subcommand("pdim", "projective dimension of a module");
  add_common(pdim);
  pdim->add_option("--module", pdim_args.module)->required();
  pdim->add_option("--cutoff", pdim_args.cutoff, "resolution steps to examine (0: automatic)");

  ResolveArgs resolve_args;
  auto* resolve = app.add_subcommand("resolve", "minimal projective resolution");
  add_common(resolve);
  resolve->add_option("--module", resolve_args.module)->required();
  resolve->add_option("--max-steps", resolve_args.max_steps)->required();
  resolve->add_option("--dot", resolve_args.dot, "write the syzygy graphs as DOT");

  ExtArgs ext_args;
  auto* ext = app.add_subcommand("ext", "dimension of Ext^k(A, B)");
  add_common(ext);
  ext->add_option("--from", ext_args.from)->required();
  ext->add_option("--to", ext_args.to)->required();
  ext->add_option("--degree", ext_args.degree)->required();

  GraphArgs graph_args;
  auto* syz = app.add_subcommand("syzygy-graph", "syzygy digraph of a monomial algebra");
  add_common(syz);
  syz->add_option("--dot", graph_args.dot);

  ApproxArgs approx_args;
  auto* verify = app.add_subcommand("verify-approx", "check a set of approximation candidates");
  add_common(verify);
  verify->add_option("--candidates", approx_args.candidates)->required();
  verify->add_flag("--brute-force", approx_args.brute_force, "cross-check against a module corpus");
  verify->add_option("--filt-length", approx_args.filt_length, "corpus filtration length");
  verify->add_option("--dim-bound", approx_args.dim_bound, "also enumerate all modules up to this dimension");
  verify->add_flag("--no-ext-cochains", approx_args.no_cochains, "leave Ext cochains out of the certificate");

  std::string findim_set;
  auto* findim = app.add_subcommand("findim", "finitistic dimension from verified candidates");
  add_common(findim);
  findim->add_option("--candidates", findim_set)->required();

  FiltArgs filt_args;
  auto* filt = app.add_subcommand("filt-check", "search a filtration by candidates");
  add_common(filt);
  filt->add_option("--module", filt_args.module)->required();
  filt->add_option("--candidates", filt_args.candidates)->required();
  filt->add_option("--budget", filt_args.budget, "Hom elements scanned per step");

  RenderArgs render_args;
  auto* render = app.add_subcommand("render", "layered graph of a module");
  add_common(render);
  render->add_option("--module", render_args.module)->required();
  render->add_option("--dot", render_args.dot);

  std::string opposite_out;
  auto* opposite = app.add_subcommand("opposite", "write the file over the opposite algebra");
  add_common(opposite);
  opposite->add_option("-o,--output", opposite_out)->required();

  std::string recheck_report;
  auto* recheck = app.add_subcommand("recheck", "re-validate the certificates of a JSON report");
  add_common(recheck);
  recheck->add_option("report", recheck_report)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    auto spec = load(common);
    return std::visit(
        [&](const auto& s) -> int {
          if (*pdim) return run_pdim(common, s, pdim_args);
          if (*resolve) return run_resolve(common, s, resolve_args);
          if (*ext) return run_ext(common, s, ext_args);
          if (*syz) return run_syzygy_graph(common, s, graph_args);
          if (*verify) return run_verify_approx(common, s, approx_args);
          if (*findim) return run_findim(common, s, findim_set);
          if (*filt) return run_filt_check(common, s, filt_args);
          if (*render) return run_render(common, s, render_args);
          if (*opposite) return run_opposite(common, s, opposite_out);
          return run_recheck(common, s, recheck_report);
        },
        spec);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
