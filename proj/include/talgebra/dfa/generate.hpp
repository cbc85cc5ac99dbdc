#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/dfa/dfa.hpp"
#include "talgebra/dfa/examples.hpp"
#include "talgebra/dfa/inference.hpp"

namespace talgebra::dfa {

// Builds an example set that check_sufficient accepts for L(target) and from
// which infer() reconstructs canonical_dfa(target) exactly. The construction
// is canonical (breadth-first access strings, lex-sorted equiv chains), so
// `seed` does not influence the result; it is part of the signature so
// callers can treat generators uniformly.
//
// Besides the entry strings the five conditions demand, every prefix that
// lands in a convergence class joins the example strings (eps included when
// the initial class is a convergence); without this the right completion of
// the equiv classes can under-merge and inference would return a proper
// refinement of the target.
inline RegularExampleSet generate_sufficient(const Dfa& target,
                                             std::uint64_t seed = 0) {
  (void)seed;
  Dfa c = canonical_dfa(target);
  RegularExampleSet out;
  out.alphabet = c.alphabet;
  if (c.finals.empty()) {
    out.validate();
    return out;  // empty language: nothing to witness
  }

  std::map<int, std::string> rep = access_strings(c);
  auto preds = pred_map(c);

  std::set<std::string> w;
  for (int f : c.finals) w.insert(rep.at(f));
  for (int b : c.states)
    if (is_convergence(c, b))
      for (const auto& [d, x] : preds.at(b)) w.insert(rep.at(d) + x);
  if (is_convergence(c, c.initial)) w.insert("");
  for (const std::string& z : prefix_closure(w)) {
    if (z.empty()) continue;
    auto q = c.run(z);
    if (q && is_convergence(c, *q)) w.insert(z);
  }

  // All of w is live, so run() is defined on every member.
  std::map<int, std::vector<std::string>> members;
  for (const std::string& u : w) members[*c.run(u)].push_back(u);
  for (auto& [q, ms] : members)
    std::sort(ms.begin(), ms.end(),
              [&](const std::string& a, const std::string& b) {
                return lex_less(a, b, c.alphabet);
              });

  for (int f : c.finals)
    out.examples.push_back({RegularExampleKind::accept, {rep.at(f)}});
  for (const auto& [q, ms] : members)
    for (std::size_t i = 1; i < ms.size(); ++i)
      out.examples.push_back({RegularExampleKind::equiv, {ms[i - 1], ms[i]}});
  for (auto itb = c.states.begin(); itb != c.states.end(); ++itb)
    for (auto itr = std::next(itb); itr != c.states.end(); ++itr)
      out.examples.push_back(
          {RegularExampleKind::not_equiv, {rep.at(*itb), rep.at(*itr)}});

  out.validate();
  return out;
}

}  // namespace talgebra::dfa
