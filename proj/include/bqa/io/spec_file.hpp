#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bqa/algebra.hpp"
#include "bqa/module_ops.hpp"
#include "bqa/representation.hpp"

namespace bqa::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

// ---------------------------------------------------------------------------
// Preprocessing: '#' comments, `param NAME = INT;`, `repeat VAR = A .. B { ... }`
// and `${expr}` integer substitution. Expanded blocks are joined onto their
// first line so that later line numbers are unchanged.

namespace detail {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  std::size_t line = 1, col = 1;
  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && pos < s.size(); ++k, ++pos) {
      if (s[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }
};

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
}

class ExprParser {
 public:
  ExprParser(const std::string& text, const std::map<std::string, long long>& env, std::size_t line, std::size_t col)
      : t_(text), env_(env), line_(line), col_(col) {}

  long long parse() {
    long long v = sum();
    skip();
    if (p_ != t_.size()) fail("unexpected '" + std::string(1, t_[p_]) + "' in expression");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& m) const { throw ParseError(line_, col_, m); }
  void skip() {
    while (p_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[p_]))) ++p_;
  }
  long long sum() {
    long long v = product();
    for (;;) {
      skip();
      if (p_ < t_.size() && (t_[p_] == '+' || t_[p_] == '-')) {
        char op = t_[p_++];
        long long r = product();
        v = op == '+' ? v + r : v - r;
      } else {
        return v;
      }
    }
  }
  long long product() {
    long long v = atom();
    for (;;) {
      skip();
      if (p_ < t_.size() && (t_[p_] == '*' || t_[p_] == '/')) {
        char op = t_[p_++];
        long long r = atom();
        if (op == '/' && r == 0) fail("division by zero in expression");
        v = op == '*' ? v * r : v / r;
      } else {
        return v;
      }
    }
  }
  long long atom() {
    skip();
    if (p_ >= t_.size()) fail("expression ends early");
    if (t_[p_] == '(') {
      ++p_;
      long long v = sum();
      skip();
      if (p_ >= t_.size() || t_[p_] != ')') fail("missing ')' in expression");
      ++p_;
      return v;
    }
    if (t_[p_] == '-') {
      ++p_;
      return -atom();
    }
    std::size_t start = p_;
    if (std::isdigit(static_cast<unsigned char>(t_[p_]))) {
      while (p_ < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p_]))) ++p_;
      return std::stoll(t_.substr(start, p_ - start));
    }
    while (p_ < t_.size() && (std::isalnum(static_cast<unsigned char>(t_[p_])) || t_[p_] == '_')) ++p_;
    if (start == p_) fail("unexpected '" + std::string(1, t_[p_]) + "' in expression");
    const std::string name = t_.substr(start, p_ - start);
    auto it = env_.find(name);
    if (it == env_.end()) fail("unknown parameter '" + name + "'");
    return it->second;
  }

  const std::string& t_;
  const std::map<std::string, long long>& env_;
  std::size_t line_, col_;
  std::size_t p_ = 0;
};

inline std::string strip_comments(const std::string& text) {
  std::string out = text;
  bool in_comment = false;
  for (auto& c : out) {
    if (c == '\n') in_comment = false;
    else if (c == '#') in_comment = true;
    if (in_comment) c = ' ';
  }
  return out;
}

inline bool keyword_at(const std::string& s, std::size_t pos, const std::string& kw) {
  if (s.compare(pos, kw.size(), kw) != 0) return false;
  if (pos > 0 && ident_char(s[pos - 1])) return false;
  std::size_t end = pos + kw.size();
  return end >= s.size() || !ident_char(s[end]);
}

// Expands text (already free of comments). `line_base`/`col_base` locate the
// text in the original file for diagnostics.
inline std::string expand(const std::string& s, std::map<std::string, long long>& env,
                          const std::map<std::string, long long>& overrides, std::size_t line_base,
                          std::size_t col_base) {
  std::string out;
  Cursor c{s};
  c.line = line_base;
  c.col = col_base;
  auto fail = [&](const std::string& m) -> void { throw ParseError(c.line, c.col, m); };
  while (c.pos < s.size()) {
    if (s.compare(c.pos, 2, "${") == 0) {
      const std::size_t l = c.line, col = c.col;
      auto close = s.find('}', c.pos);
      if (close == std::string::npos) fail("unterminated '${'");
      const std::string expr = s.substr(c.pos + 2, close - c.pos - 2);
      out += std::to_string(ExprParser(expr, env, l, col).parse());
      c.advance(close + 1 - c.pos);
      continue;
    }
    if (keyword_at(s, c.pos, "param")) {
      const std::size_t l = c.line, col = c.col;
      auto semi = s.find(';', c.pos);
      if (semi == std::string::npos) fail("'param' without ';'");
      std::string body = s.substr(c.pos + 5, semi - c.pos - 5);
      auto eq = body.find('=');
      if (eq == std::string::npos) throw ParseError(l, col, "expected 'param NAME = VALUE;'");
      std::string name = body.substr(0, eq);
      name.erase(0, name.find_first_not_of(" \t\r\n"));
      name.erase(name.find_last_not_of(" \t\r\n") + 1);
      if (name.empty()) throw ParseError(l, col, "parameter name missing");
      long long value = ExprParser(body.substr(eq + 1), env, l, col).parse();
      auto ov = overrides.find(name);
      env[name] = ov != overrides.end() ? ov->second : value;
      // keep newlines so line numbers stay put
      for (std::size_t k = c.pos; k <= semi; ++k) out += s[k] == '\n' ? '\n' : ' ';
      c.advance(semi + 1 - c.pos);
      continue;
    }
    if (keyword_at(s, c.pos, "repeat")) {
      const std::size_t l = c.line, col = c.col;
      auto open = s.find('{', c.pos);
      if (open == std::string::npos) fail("'repeat' without '{'");
      std::string header = s.substr(c.pos + 6, open - c.pos - 6);
      auto eq = header.find('=');
      auto dots = header.find("..");
      if (eq == std::string::npos || dots == std::string::npos || dots < eq)
        throw ParseError(l, col, "expected 'repeat VAR = FROM .. TO { ... }'");
      std::string var = header.substr(0, eq);
      var.erase(0, var.find_first_not_of(" \t\r\n"));
      var.erase(var.find_last_not_of(" \t\r\n") + 1);
      const long long from = ExprParser(header.substr(eq + 1, dots - eq - 1), env, l, col).parse();
      const long long to = ExprParser(header.substr(dots + 2), env, l, col).parse();
      std::size_t depth = 0, close = open;
      for (; close < s.size(); ++close) {
        if (s[close] == '{') ++depth;
        else if (s[close] == '}' && --depth == 0) break;
      }
      if (close >= s.size()) throw ParseError(l, col, "unterminated 'repeat' block");
      const std::string body = s.substr(open + 1, close - open - 1);
      Cursor body_pos{s};
      body_pos.line = c.line;
      body_pos.col = c.col;
      body_pos.pos = c.pos;
      body_pos.advance(open + 1 - c.pos);
      std::size_t newlines = 0;
      for (std::size_t k = c.pos; k <= close; ++k)
        if (s[k] == '\n') ++newlines;
      const bool had = env.count(var) > 0;
      const long long saved = had ? env[var] : 0;
      for (long long k = from; k <= to; ++k) {
        env[var] = k;
        std::string piece = expand(body, env, overrides, body_pos.line, body_pos.col);
        for (auto& ch : piece)
          if (ch == '\n') ch = ' ';
        out += piece;
        out += ' ';
      }
      if (had) env[var] = saved;
      else env.erase(var);
      out += std::string(newlines, '\n');
      c.advance(close + 1 - c.pos);
      continue;
    }
    out += s[c.pos];
    c.advance();
  }
  return out;
}

}  // namespace detail

struct Preprocessed {
  std::string text;
  std::map<std::string, long long> params;
};

inline Preprocessed preprocess(const std::string& text, const std::map<std::string, long long>& overrides = {}) {
  Preprocessed p;
  p.text = detail::expand(detail::strip_comments(text), p.params, overrides, 1, 1);
  for (const auto& [k, v] : overrides)
    if (!p.params.count(k)) throw ParseError(1, 1, "parameter '" + k + "' is not declared in the file");
  return p;
}

// ---------------------------------------------------------------------------
// Tokens

struct Token {
  enum Kind { Name, Punct, End } kind;
  std::string text;
  std::size_t line, col;
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  detail::Cursor c{s};
  while (c.pos < s.size()) {
    const char ch = s[c.pos];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      c.advance();
      continue;
    }
    const std::size_t l = c.line, col = c.col;
    if (s.compare(c.pos, 2, "->") == 0) {
      out.push_back({Token::Punct, "->", l, col});
      c.advance(2);
      continue;
    }
    if (s.compare(c.pos, 2, "..") == 0) {
      out.push_back({Token::Punct, "..", l, col});
      c.advance(2);
      continue;
    }
    if (std::string(";,:{}[]()+-*/=^").find(ch) != std::string::npos) {
      out.push_back({Token::Punct, std::string(1, ch), l, col});
      c.advance();
      continue;
    }
    if (detail::ident_char(ch) && ch != '.') {
      std::size_t start = c.pos;
      while (c.pos < s.size() && detail::ident_char(s[c.pos]) && s.compare(c.pos, 2, "..") != 0) c.advance();
      out.push_back({Token::Name, s.substr(start, c.pos - start), l, col});
      continue;
    }
    throw ParseError(l, col, std::string("unexpected character '") + ch + "'");
  }
  out.push_back({Token::End, "", c.line, c.col});
  return out;
}

// ---------------------------------------------------------------------------
// Parsed file

template <class F>
struct NamedModule {
  std::string name;
  Representation<F> module;
};

template <class F>
struct NamedMorphism {
  std::string name, source, target;
  Morphism<F> morphism;
};

struct CandidateEntry {
  std::string vertex, module;
  std::optional<std::string> morphism;
};

template <class F>
struct SpecFile {
  F field;
  std::map<std::string, long long> params;
  Quiver quiver;
  std::vector<Relation<F>> relations;
  bool right_side = false;
  AlgebraPtr<F> algebra;         // as declared
  AlgebraPtr<F> module_algebra;  // algebra, or its opposite for right modules
  std::vector<NamedModule<F>> modules;
  std::vector<NamedMorphism<F>> morphisms;
  std::vector<std::pair<std::string, std::vector<CandidateEntry>>> candidate_sets;

  const Representation<F>* find_module(const std::string& name) const {
    for (const auto& m : modules)
      if (m.name == name) return &m.module;
    return nullptr;
  }
  const Representation<F>& module(const std::string& name) const {
    if (auto* m = find_module(name)) return *m;
    throw std::invalid_argument("unknown module '" + name + "'");
  }
  const NamedMorphism<F>* find_morphism(const std::string& name) const {
    for (const auto& m : morphisms)
      if (m.name == name) return &m;
    return nullptr;
  }
  const std::vector<CandidateEntry>& candidate_set(const std::string& name) const {
    for (const auto& [n, set] : candidate_sets)
      if (n == name) return set;
    throw std::invalid_argument("unknown candidate set '" + name + "'");
  }

  // Structural equality (parameters are not part of the structure).
  bool same_structure(const SpecFile& o) const {
    if (!(field == o.field) || !(quiver == o.quiver) || right_side != o.right_side) return false;
    if (relations.size() != o.relations.size()) return false;
    for (std::size_t k = 0; k < relations.size(); ++k)
      if (relations[k].terms != o.relations[k].terms) return false;
    if (modules.size() != o.modules.size() || morphisms.size() != o.morphisms.size()) return false;
    for (std::size_t k = 0; k < modules.size(); ++k)
      if (modules[k].name != o.modules[k].name || !(modules[k].module == o.modules[k].module)) return false;
    for (std::size_t k = 0; k < morphisms.size(); ++k) {
      const auto &a = morphisms[k], &b = o.morphisms[k];
      if (a.name != b.name || a.source != b.source || a.target != b.target ||
          !(a.morphism.vertex_maps() == b.morphism.vertex_maps()))
        return false;
    }
    if (candidate_sets.size() != o.candidate_sets.size()) return false;
    for (std::size_t k = 0; k < candidate_sets.size(); ++k) {
      const auto &a = candidate_sets[k], &b = o.candidate_sets[k];
      if (a.first != b.first || a.second.size() != b.second.size()) return false;
      for (std::size_t e = 0; e < a.second.size(); ++e)
        if (a.second[e].vertex != b.second[e].vertex || a.second[e].module != b.second[e].module ||
            a.second[e].morphism != b.second[e].morphism)
          return false;
    }
    return true;
  }
};

using AnySpec = std::variant<SpecFile<PrimeField>, SpecFile<RationalField>>;

namespace detail {

template <class F>
typename F::value_type scalar_from_digits(const F& f, bool neg, const std::string& num, const std::string& den) {
  if constexpr (is_rational_field_v<F>) {
    mpq_class q(mpz_class(num), den.empty() ? mpz_class(1) : mpz_class(den));
    if (q.get_den() == 0) throw ArithmeticError("zero denominator");
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
  } else {
    auto reduce = [&](const std::string& digits) {
      typename F::value_type r = 0;
      for (char d : digits) r = f.add(f.mul(r, f.from_int(10)), f.from_int(d - '0'));
      return r;
    };
    auto v = reduce(num);
    if (!den.empty()) v = f.div(v, reduce(den));
    return neg ? f.neg(v) : v;
  }
}

inline bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

template <class F>
class Parser {
 public:
  Parser(std::vector<Token> toks, F field) : t_(std::move(toks)) { spec_.field = field; }

  SpecFile<F> run() {
    while (peek().kind != Token::End) statement();
    finish_algebra();
    return std::move(spec_);
  }

 private:
  const Token& peek(std::size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  const Token& next() { return t_[std::min(p_++, t_.size() - 1)]; }
  [[noreturn]] void fail(const Token& at, const std::string& m) const { throw ParseError(at.line, at.col, m); }
  bool is(const std::string& text) const { return peek().text == text && peek().kind != Token::End; }
  const Token& expect(const std::string& text) {
    if (!is(text)) fail(peek(), "expected '" + text + "', found '" + peek().text + "'");
    return next();
  }
  const Token& name() {
    if (peek().kind != Token::Name) fail(peek(), "expected a name, found '" + peek().text + "'");
    return next();
  }

  void statement() {
    const Token& kw = peek();
    if (kw.kind != Token::Name) fail(kw, "expected a statement keyword, found '" + kw.text + "'");
    if (kw.text == "field") return field_stmt();
    if (kw.text == "vertices") return vertices_stmt();
    if (kw.text == "arrows") return arrows_stmt();
    if (kw.text == "relations") return relations_stmt();
    if (kw.text == "side") return side_stmt();
    if (kw.text == "module") return module_stmt();
    if (kw.text == "morphism") return morphism_stmt();
    if (kw.text == "candidates") return candidates_stmt();
    fail(kw, "unknown statement '" + kw.text + "'");
  }

  void require_open(const Token& at) {
    if (spec_.algebra) fail(at, "'" + at.text + "' must come before modules, morphisms and candidates");
  }

  void field_stmt() {
    const Token& kw = next();
    require_open(kw);
    const Token& f = name();
    std::string desc = f.text;
    if (f.text == "GF") {
      expect("(");
      const Token& p = name();
      expect(")");
      desc += "(" + p.text + ")";
    }
    if (desc != spec_.field.name()) fail(f, "field '" + desc + "' does not match the parser's field");
    expect(";");
  }

  void vertices_stmt() {
    const Token& kw = next();
    require_open(kw);
    while (!is(";")) {
      const Token& v = name();
      try {
        spec_.quiver.add_vertex(v.text);
      } catch (const QuiverError& e) {
        fail(v, e.what());
      }
      if (!is(";")) expect(",");
    }
    expect(";");
  }

  void arrows_stmt() {
    const Token& kw = next();
    require_open(kw);
    while (!is(";")) {
      const Token& a = name();
      expect(":");
      const Token& s = name();
      expect("->");
      const Token& t = name();
      try {
        spec_.quiver.add_arrow(a.text, s.text, t.text);
      } catch (const QuiverError& e) {
        fail(a, e.what());
      }
      if (!is(";")) expect(",");
    }
    expect(";");
  }

  // [-] [coef '*'] name ('*' name)*
  Path path_tokens(const Quiver& q, std::vector<const Token*> names) {
    Path p;
    bool first = true;
    for (std::size_t k = names.size(); k-- > 0;) {
      const Token& n = *names[k];
      if (names.size() == 1 && n.text.rfind("e_", 0) == 0 && !q.find_arrow(n.text)) {
        auto v = q.find_vertex(n.text.substr(2));
        if (!v) fail(n, "unknown vertex in '" + n.text + "'");
        return Path::trivial(*v);
      }
      auto a = q.find_arrow(n.text);
      if (!a) fail(n, "unknown arrow '" + n.text + "'");
      if (first) {
        p = Path::of_arrow(q, *a);
        first = false;
      } else {
        auto c = compose(Path::of_arrow(q, *a), p);
        if (!c) fail(n, "arrow '" + n.text + "' does not compose with the path to its right");
        p = *c;
      }
    }
    return p;
  }

  void relations_stmt() {
    const Token& kw = next();
    require_open(kw);
    const F& f = spec_.field;
    while (!is(";")) {
      const Token& start = peek();
      Relation<F> rel;
      bool first_term = true;
      for (;;) {
        bool neg = false;
        if (is("+") || is("-")) {
          neg = next().text == "-";
        } else if (!first_term) {
          break;
        }
        first_term = false;
        auto coef = f.one();
        std::vector<const Token*> names;
        if (peek().kind == Token::Name && all_digits(peek().text) && !spec_.quiver.find_arrow(peek().text)) {
          const Token& num = next();
          std::string den;
          if (is("/")) {
            next();
            den = name().text;
          }
          coef = scalar_from_digits(f, false, num.text, den);
          expect("*");
        }
        names.push_back(&name());
        while (is("*")) {
          next();
          names.push_back(&name());
        }
        if (neg) coef = f.neg(coef);
        Path p = path_tokens(spec_.quiver, names);
        bool merged = false;
        for (auto& [c, q] : rel.terms)
          if (q == p) {
            c = f.add(c, coef);
            merged = true;
          }
        if (!merged) rel.terms.push_back({coef, p});
        if (!(is("+") || is("-"))) break;
      }
      std::vector<std::pair<typename F::value_type, Path>> kept;
      for (auto& term : rel.terms)
        if (!f.is_zero(term.first)) kept.push_back(term);
      rel.terms = std::move(kept);
      if (rel.terms.empty()) fail(start, "relation has no nonzero terms");
      spec_.relations.push_back(std::move(rel));
      if (!is(";")) expect(",");
    }
    expect(";");
  }

  void side_stmt() {
    const Token& kw = next();
    require_open(kw);
    const Token& s = name();
    if (s.text == "right") spec_.right_side = true;
    else if (s.text == "left") spec_.right_side = false;
    else fail(s, "expected 'left' or 'right'");
    expect(";");
  }

  void finish_algebra() {
    if (spec_.algebra) return;
    try {
      spec_.algebra = make_algebra(spec_.quiver, spec_.field, spec_.relations);
    } catch (const std::exception& e) {
      fail(peek(), std::string("algebra: ") + e.what());
    }
    spec_.module_algebra =
        spec_.right_side ? std::make_shared<const BoundAlgebra<F>>(spec_.algebra->opposite().first) : spec_.algebra;
  }

  typename F::value_type scalar() {
    bool neg = false;
    if (is("-")) {
      next();
      neg = true;
    }
    const Token& num = name();
    if (!all_digits(num.text)) fail(num, "expected a number, found '" + num.text + "'");
    std::string den;
    if (is("/")) {
      next();
      const Token& d = name();
      if (!all_digits(d.text)) fail(d, "expected a denominator");
      den = d.text;
    }
    try {
      return scalar_from_digits(spec_.field, neg, num.text, den);
    } catch (const std::exception& e) {
      fail(num, e.what());
    }
  }

  // [[a, b], [c, d]]; `[]` stands for any matrix without entries.
  Matrix<F> matrix(std::size_t rows, std::size_t cols, const std::string& what) {
    const Token& open = expect("[");
    std::vector<std::vector<typename F::value_type>> data;
    while (!is("]")) {
      expect("[");
      std::vector<typename F::value_type> row;
      while (!is("]")) {
        row.push_back(scalar());
        if (!is("]")) expect(",");
      }
      expect("]");
      data.push_back(std::move(row));
      if (!is("]")) expect(",");
    }
    expect("]");
    Matrix<F> m(spec_.field, rows, cols);
    bool no_entries = std::all_of(data.begin(), data.end(), [](const auto& r) { return r.empty(); });
    if (rows * cols == 0 && no_entries) return m;
    if (data.size() != rows)
      fail(open, what + " needs " + std::to_string(rows) + " rows, got " + std::to_string(data.size()));
    for (std::size_t r = 0; r < rows; ++r) {
      if (data[r].size() != cols)
        fail(open, what + " needs " + std::to_string(cols) + " columns, row " + std::to_string(r + 1) + " has " +
                       std::to_string(data[r].size()));
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = data[r][c];
    }
    return m;
  }

  const AlgebraPtr<F>& malg() { return spec_.module_algebra; }

  std::size_t vertex_of(const Token& t) {
    auto v = malg()->quiver().find_vertex(t.text);
    if (!v) fail(t, "unknown vertex '" + t.text + "'");
    return *v;
  }

  Representation<F> summand() {
    const Token& t = name();
    if (t.text == "proj" || t.text == "simple" || t.text == "inj") {
      expect("(");
      const std::size_t v = vertex_of(name());
      expect(")");
      if (t.text == "simple") return simple(malg(), v);
      if (t.text == "inj") return injective(malg(), v);
      Representation<F> p = projective(malg(), v);
      if (!is("/")) return p;
      next();
      expect("(");
      const auto& d = malg()->projective_data(v);
      std::vector<std::pair<std::size_t, std::vector<typename F::value_type>>> gens;
      while (!is(")")) {
        std::vector<const Token*> names{&name()};
        while (is("*")) {
          next();
          names.push_back(&name());
        }
        Path path = path_tokens(malg()->quiver(), names);
        if (path.start != v) fail(*names.back(), "path does not start at vertex '" + malg()->quiver().vertex_name(v) + "'");
        auto it = std::find(d.basis.begin(), d.basis.end(), path);
        std::vector<typename F::value_type> x(d.dims[path.end], spec_.field.zero());
        if (it != d.basis.end()) x[d.slot[static_cast<std::size_t>(it - d.basis.begin())]] = spec_.field.one();
        gens.emplace_back(path.end, std::move(x));
        if (!is(")")) expect(",");
      }
      expect(")");
      return quotient_by(p, generated_subspaces(p, gens)).module;
    }
    auto* m = spec_.find_module(t.text);
    if (!m) fail(t, "unknown module '" + t.text + "'");
    Representation<F> base = *m;
    if (is("^")) {
      next();
      const Token& k = name();
      if (!all_digits(k.text)) fail(k, "expected an exponent");
      return power(base, std::stoul(k.text));
    }
    return base;
  }

  void module_stmt() {
    next();
    finish_algebra();
    const Token& n = name();
    if (spec_.find_module(n.text)) fail(n, "module '" + n.text + "' is defined twice");
    if (is("=")) {
      next();
      std::vector<Representation<F>> parts{summand()};
      while (is("+")) {
        next();
        parts.push_back(summand());
      }
      expect(";");
      Representation<F> m = parts.size() == 1 ? parts[0] : direct_sum_module(malg(), parts);
      spec_.modules.push_back({n.text, std::move(m)});
      return;
    }
    const Token& open = expect("{");
    const Quiver& q = malg()->quiver();
    std::vector<std::size_t> dims(q.num_vertices(), 0);
    std::vector<std::optional<Matrix<F>>> maps(q.num_arrows());
    bool have_dims = false;
    while (!is("}")) {
      const Token& key = name();
      if (key.text == "dims") {
        if (have_dims) fail(key, "'dims' given twice");
        have_dims = true;
        while (!is(";")) {
          const std::size_t v = vertex_of(name());
          expect(":");
          const Token& d = name();
          if (!all_digits(d.text)) fail(d, "expected a dimension");
          dims[v] = std::stoul(d.text);
          if (!is(";")) expect(",");
        }
        expect(";");
        continue;
      }
      if (!have_dims) fail(key, "'dims' must come first in a module block");
      auto a = q.find_arrow(key.text);
      if (!a) fail(key, "unknown arrow '" + key.text + "'");
      if (maps[*a]) fail(key, "arrow '" + key.text + "' given twice");
      expect("=");
      const auto& ar = q.arrow(*a);
      maps[*a] = matrix(dims[ar.target], dims[ar.source], "arrow '" + key.text + "'");
      expect(";");
    }
    expect("}");
    std::vector<Matrix<F>> full;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const auto& ar = q.arrow(a);
      full.push_back(maps[a] ? *maps[a] : Matrix<F>(spec_.field, dims[ar.target], dims[ar.source]));
    }
    try {
      spec_.modules.push_back({n.text, Representation<F>(malg(), dims, std::move(full))});
    } catch (const InvalidRepresentation& e) {
      fail(open, "module '" + n.text + "': " + e.what());
    }
  }

  void morphism_stmt() {
    next();
    finish_algebra();
    const Token& n = name();
    expect(":");
    const Token& s = name();
    expect("->");
    const Token& t = name();
    auto* src = spec_.find_module(s.text);
    auto* tgt = spec_.find_module(t.text);
    if (!src) fail(s, "unknown module '" + s.text + "'");
    if (!tgt) fail(t, "unknown module '" + t.text + "'");
    const Token& open = expect("{");
    const Quiver& q = malg()->quiver();
    std::vector<std::optional<Matrix<F>>> maps(q.num_vertices());
    while (!is("}")) {
      const std::size_t v = vertex_of(name());
      expect("=");
      maps[v] = matrix(tgt->dim(v), src->dim(v), "vertex map");
      expect(";");
    }
    expect("}");
    std::vector<Matrix<F>> full;
    for (std::size_t v = 0; v < q.num_vertices(); ++v)
      full.push_back(maps[v] ? *maps[v] : Matrix<F>(spec_.field, tgt->dim(v), src->dim(v)));
    try {
      spec_.morphisms.push_back({n.text, s.text, t.text, Morphism<F>(*src, *tgt, std::move(full))});
    } catch (const InvalidRepresentation& e) {
      fail(open, "morphism '" + n.text + "': " + e.what());
    }
  }

  void candidates_stmt() {
    next();
    finish_algebra();
    const Token& n = name();
    expect("{");
    std::vector<CandidateEntry> set;
    while (!is("}")) {
      const Token& v = name();
      vertex_of(v);
      expect(":");
      const Token& m = name();
      if (!spec_.find_module(m.text)) fail(m, "unknown module '" + m.text + "'");
      CandidateEntry e{v.text, m.text, std::nullopt};
      if (is("via")) {
        next();
        const Token& f = name();
        if (!spec_.find_morphism(f.text)) fail(f, "unknown morphism '" + f.text + "'");
        e.morphism = f.text;
      }
      expect(";");
      set.push_back(std::move(e));
    }
    expect("}");
    spec_.candidate_sets.emplace_back(n.text, std::move(set));
  }

  std::vector<Token> t_;
  std::size_t p_ = 0;
  SpecFile<F> spec_;
};

}  // namespace detail

// Reads the field declaration and parses with the matching scalar type.
inline AnySpec parse(const std::string& text, const std::map<std::string, long long>& overrides = {}) {
  auto pre = preprocess(text, overrides);
  auto toks = tokenize(pre.text);
  // default field GF(2)
  std::optional<std::uint32_t> prime = 2;
  for (std::size_t k = 0; k + 1 < toks.size(); ++k) {
    if (toks[k].kind == Token::Name && toks[k].text == "field") {
      const Token& f = toks[k + 1];
      if (f.text == "Q") prime.reset();
      else if (f.text == "GF" && k + 4 < toks.size() && toks[k + 2].text == "(" && toks[k + 4].text == ")") {
        if (!detail::all_digits(toks[k + 3].text)) throw ParseError(toks[k + 3].line, toks[k + 3].col, "bad modulus");
        try {
          PrimeField check(static_cast<std::uint32_t>(std::stoul(toks[k + 3].text)));
          prime = check.characteristic();
        } catch (const std::exception& e) {
          throw ParseError(toks[k + 3].line, toks[k + 3].col, e.what());
        }
      } else {
        throw ParseError(f.line, f.col, "expected 'Q' or 'GF(p)'");
      }
      break;
    }
  }
  if (prime) {
    auto spec = detail::Parser<PrimeField>(std::move(toks), PrimeField(*prime)).run();
    spec.params = pre.params;
    return spec;
  }
  auto spec = detail::Parser<RationalField>(std::move(toks), RationalField()).run();
  spec.params = pre.params;
  return spec;
}

// ---------------------------------------------------------------------------
// Serialization (expanded form; every module written with explicit matrices)

template <class F>
std::string matrix_text(const Matrix<F>& m) {
  std::string s = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    s += r ? ", [" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) s += (c ? ", " : "") + m.field().to_string(m(r, c));
    s += "]";
  }
  return s + "]";
}

template <class F>
std::string relation_text(const Quiver& q, const F& f, const Relation<F>& rel) {
  std::string s;
  for (std::size_t k = 0; k < rel.terms.size(); ++k) {
    auto [c, p] = rel.terms[k];
    std::string cs = f.to_string(c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (neg) cs = cs.substr(1);
    if (k == 0) s += neg ? "-" : "";
    else s += neg ? " - " : " + ";
    if (cs != "1") s += cs + "*";
    s += path_to_string(q, p);
  }
  return s;
}

template <class F>
std::string serialize(const SpecFile<F>& spec) {
  std::ostringstream o;
  const Quiver& q = spec.quiver;
  o << "field " << spec.field.name() << ";\n";
  o << "vertices ";
  for (std::size_t v = 0; v < q.num_vertices(); ++v) o << (v ? ", " : "") << q.vertex_name(v);
  o << ";\n";
  o << "arrows";
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const auto& ar = q.arrow(a);
    o << (a ? ",\n  " : "\n  ") << ar.name << ": " << q.vertex_name(ar.source) << " -> " << q.vertex_name(ar.target);
  }
  o << ";\n";
  o << "relations";
  for (std::size_t r = 0; r < spec.relations.size(); ++r)
    o << (r ? ",\n  " : "\n  ") << relation_text(q, spec.field, spec.relations[r]);
  o << ";\n";
  if (spec.right_side) o << "side right;\n";
  const Quiver& mq = spec.module_algebra->quiver();
  for (const auto& nm : spec.modules) {
    o << "\nmodule " << nm.name << " {\n  dims";
    bool first = true;
    for (std::size_t v = 0; v < mq.num_vertices(); ++v) {
      if (!nm.module.dim(v)) continue;
      o << (first ? " " : ", ") << mq.vertex_name(v) << ": " << nm.module.dim(v);
      first = false;
    }
    o << ";\n";
    for (std::size_t a = 0; a < mq.num_arrows(); ++a) {
      const auto& m = nm.module.arrow_map(a);
      if (m.empty() || m.is_zero()) continue;
      o << "  " << mq.arrow(a).name << " = " << matrix_text(m) << ";\n";
    }
    o << "}\n";
  }
  for (const auto& nm : spec.morphisms) {
    o << "\nmorphism " << nm.name << " : " << nm.source << " -> " << nm.target << " {\n";
    for (std::size_t v = 0; v < mq.num_vertices(); ++v) {
      const auto& m = nm.morphism.at(v);
      if (m.empty() || m.is_zero()) continue;
      o << "  " << mq.vertex_name(v) << " = " << matrix_text(m) << ";\n";
    }
    o << "}\n";
  }
  for (const auto& [name, set] : spec.candidate_sets) {
    o << "\ncandidates " << name << " {\n";
    for (const auto& e : set) {
      o << "  " << e.vertex << ": " << e.module;
      if (e.morphism) o << " via " << *e.morphism;
      o << ";\n";
    }
    o << "}\n";
  }
  return o.str();
}

inline std::string serialize(const AnySpec& spec) {
  return std::visit([](const auto& s) { return serialize(s); }, spec);
}


}  // namespace bqa::io
