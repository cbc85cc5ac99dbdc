#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "talgebra/dfa/dfa.hpp"

namespace talgebra::dfa {

// Exact isomorphism: a bijection preserving initial state, finals, and
// delta including undefinedness. Found by parallel BFS from the initial
// pair, which is complete for automata whose states are all reachable
// (canonical and inferred automata are). Returns the state map or nullopt.
inline std::optional<std::map<int, int>> dfa_isomorphic(const Dfa& a,
                                                        const Dfa& b) {
  if (a.alphabet != b.alphabet) return std::nullopt;
  if (a.states.size() != b.states.size() ||
      a.finals.size() != b.finals.size() ||
      a.delta.size() != b.delta.size())
    return std::nullopt;
  if (a.reachable().size() != a.states.size() ||
      b.reachable().size() != b.states.size())
    return std::nullopt;

  std::map<int, int> fwd;
  std::map<int, int> back;
  std::deque<int> todo;
  auto bind = [&](int qa, int qb) {
    auto f = fwd.find(qa);
    if (f != fwd.end()) return f->second == qb;
    auto g = back.find(qb);
    if (g != back.end()) return false;
    if (a.finals.count(qa) != b.finals.count(qb)) return false;
    fwd[qa] = qb;
    back[qb] = qa;
    todo.push_back(qa);
    return true;
  };

  if (!bind(a.initial, b.initial)) return std::nullopt;
  while (!todo.empty()) {
    int qa = todo.front();
    todo.pop_front();
    int qb = fwd.at(qa);
    for (char x : a.alphabet) {
      const int* ra = a.step(qa, x);
      const int* rb = b.step(qb, x);
      if (!ra != !rb) return std::nullopt;
      if (ra && !bind(*ra, *rb)) return std::nullopt;
    }
  }
  if (fwd.size() != a.states.size()) return std::nullopt;
  return fwd;
}

// Injective embedding of a into b: initial maps to initial, delta is
// preserved on a's domain (b may define more), finals map into finals.
// Built by deterministic simulation from the initial pair.
inline std::optional<std::map<int, int>> embedding(const Dfa& a,
                                                   const Dfa& b) {
  if (a.alphabet != b.alphabet) return std::nullopt;
  std::map<int, int> fwd;
  std::set<int> used;
  std::deque<int> todo;
  auto bind = [&](int qa, int qb) {
    auto f = fwd.find(qa);
    if (f != fwd.end()) return f->second == qb;
    if (used.count(qb)) return false;
    if (a.finals.count(qa) && !b.finals.count(qb)) return false;
    fwd[qa] = qb;
    used.insert(qb);
    todo.push_back(qa);
    return true;
  };

  if (!bind(a.initial, b.initial)) return std::nullopt;
  while (!todo.empty()) {
    int qa = todo.front();
    todo.pop_front();
    int qb = fwd.at(qa);
    for (char x : a.alphabet) {
      const int* ra = a.step(qa, x);
      if (!ra) continue;
      const int* rb = b.step(qb, x);
      if (!rb) return std::nullopt;
      if (!bind(*ra, *rb)) return std::nullopt;
    }
  }
  return fwd;
}

}  // namespace talgebra::dfa
