#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/dfa/dfa.hpp"
#include "talgebra/dfa/examples.hpp"
#include "talgebra/dfa/partition.hpp"
#include "talgebra/errors.hpp"

namespace talgebra::dfa {

// All prefixes of all members. eps is always included: it is the access
// string of the would-be initial state even for an empty input set.
inline std::set<std::string> prefix_closure(const std::set<std::string>& s) {
  std::set<std::string> out{""};
  for (const std::string& w : s)
    for (std::size_t i = 1; i <= w.size(); ++i)
      out.insert(w.substr(0, i));
  return out;
}

// Partition of Strings(S) induced by the equiv examples.
inline StringPartition equiv_closure(const RegularExampleSet& s) {
  s.validate();
  StringPartition p(strings_of(s));
  for (const RegularExample& e : s.examples)
    if (e.kind == RegularExampleKind::equiv)
      p.merge(e.strings[0], e.strings[1]);
  return p;
}

// Smallest equivalence on the prefix closure of p's carrier that contains p
// and satisfies: u ~ w implies u.x ~ w.x whenever both extensions lie in
// the carrier. Worklist to a fixpoint; the result does not depend on merge
// order (the closure is unique).
inline StringPartition right_completion(const StringPartition& p) {
  std::set<std::string> carrier = prefix_closure(p.carrier());
  StringPartition q(carrier);
  for (const auto& cls : p.classes())
    for (std::size_t i = 1; i < cls.size(); ++i) q.merge(cls[0], cls[i]);

  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<std::string, char>, std::string> seen;
    for (const std::string& s : carrier) {
      if (s.empty()) continue;
      std::string w = s.substr(0, s.size() - 1);
      char x = s.back();
      auto key = std::make_pair(q.find(w), x);
      auto [it, fresh] = seen.emplace(key, s);
      if (!fresh && !q.same(it->second, s)) {
        q.merge(it->second, s);
        changed = true;
      }
    }
  }
  return q;
}

// Quotient automaton of a partition over a prefix-closed carrier. States
// are classes numbered by their lexicographically least member (so the
// class of eps is state 0); delta([w], x) = [w.x] when defined.
inline Dfa build_dfa(const StringPartition& p,
                     const std::set<std::string>& final_strings,
                     std::vector<char> alphabet) {
  const std::set<std::string>& carrier = p.carrier();
  if (!carrier.count(""))
    fail(ErrorCode::domain_error, "carrier must contain the empty string");
  for (const std::string& w : carrier)
    if (!w.empty() && !carrier.count(w.substr(0, w.size() - 1)))
      fail(ErrorCode::domain_error, "carrier is not prefix-closed");
  for (const std::string& w : final_strings)
    if (!carrier.count(w))
      fail(ErrorCode::domain_error, "final string not in carrier: " + w);

  auto classes = p.classes();
  std::map<std::string, int> state_of_rep;
  for (const auto& cls : classes)
    state_of_rep.emplace(cls[0], (int)state_of_rep.size());

  Dfa m;
  m.alphabet = std::move(alphabet);
  for (const auto& [rep, id] : state_of_rep) m.states.insert(id);
  m.initial = state_of_rep.at(p.find(""));

  for (const auto& cls : classes) {
    int from = state_of_rep.at(cls[0]);
    for (const std::string& w : cls) {
      for (char x : m.alphabet) {
        std::string wx = w + x;
        if (!carrier.count(wx)) continue;
        int to = state_of_rep.at(p.find(wx));
        auto [it, fresh] = m.delta.emplace(std::make_pair(from, x), to);
        if (!fresh && it->second != to)
          fail(ErrorCode::not_right_congruence,
               "partition is not a right congruence at \"" + w + "\" + '" +
                   x + "'");
      }
    }
  }
  for (const std::string& w : final_strings)
    m.finals.insert(state_of_rep.at(p.find(w)));
  m.validate();
  return m;
}

// M_S: quotient of the right completion of the equiv closure, with the
// accept strings as finals.
inline Dfa infer(const RegularExampleSet& s) {
  s.validate();
  StringPartition rc = right_completion(equiv_closure(s));
  return build_dfa(rc, accept_strings(s), s.alphabet);
}

}  // namespace talgebra::dfa
