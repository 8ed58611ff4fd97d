#pragma once

#include <string>
#include <vector>

#include "bqa/approx.hpp"
#include "bqa/io/spec_file.hpp"

namespace bqa::io {

// Candidates of a named set, each with its explicit map when one is given.
template <class F>
std::vector<Candidate<F>> load_candidates(const SpecFile<F>& spec, const std::string& set_name) {
  std::vector<Candidate<F>> out;
  const Quiver& q = spec.module_algebra->quiver();
  for (const auto& e : spec.candidate_set(set_name)) {
    Candidate<F> c;
    c.vertex = q.vertex(e.vertex);
    c.name = e.module;
    c.module = spec.module(e.module);
    if (e.morphism) c.map = spec.find_morphism(*e.morphism)->morphism;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace bqa::io
