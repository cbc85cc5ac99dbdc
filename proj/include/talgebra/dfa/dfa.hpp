#pragma once

#include <algorithm>
#include <compare>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "talgebra/errors.hpp"

namespace talgebra::dfa {

// Partial DFA. Symbols are single characters; the alphabet vector's order
// fixes the lexicographic order on strings. States are arbitrary ints.
struct Dfa {
  std::vector<char> alphabet;
  std::set<int> states;
  int initial = 0;
  std::set<int> finals;
  std::map<std::pair<int, char>, int> delta;

  bool operator==(const Dfa&) const = default;

  void validate() const {
    std::set<char> seen(alphabet.begin(), alphabet.end());
    if (seen.size() != alphabet.size())
      fail(ErrorCode::domain_error, "alphabet has repeated symbols");
    if (!states.count(initial))
      fail(ErrorCode::domain_error, "initial state not in state set");
    for (int f : finals)
      if (!states.count(f))
        fail(ErrorCode::domain_error, "final state not in state set");
    for (const auto& [key, to] : delta) {
      if (!states.count(key.first) || !states.count(to))
        fail(ErrorCode::domain_error, "transition endpoint not in state set");
      if (!seen.count(key.second))
        fail(ErrorCode::domain_error, "transition symbol not in alphabet");
    }
  }

  bool has_symbol(char x) const {
    return std::find(alphabet.begin(), alphabet.end(), x) != alphabet.end();
  }

  const int* step(int q, char x) const {
    auto it = delta.find({q, x});
    return it == delta.end() ? nullptr : &it->second;
  }

  std::optional<int> run(std::string_view w) const {
    int q = initial;
    for (char x : w) {
      const int* next = step(q, x);
      if (!next) return std::nullopt;
      q = *next;
    }
    return q;
  }

  bool accepts(std::string_view w) const {
    auto q = run(w);
    return q && finals.count(*q);
  }

  std::set<int> reachable() const {
    std::set<int> seen{initial};
    std::deque<int> todo{initial};
    while (!todo.empty()) {
      int q = todo.front();
      todo.pop_front();
      for (char x : alphabet)
        if (const int* r = step(q, x))
          if (seen.insert(*r).second) todo.push_back(*r);
    }
    return seen;
  }

  // States from which some final state is reachable.
  std::set<int> coaccessible() const {
    std::map<int, std::set<int>> rev;
    for (const auto& [key, to] : delta) rev[to].insert(key.first);
    std::set<int> seen(finals.begin(), finals.end());
    std::deque<int> todo(finals.begin(), finals.end());
    while (!todo.empty()) {
      int q = todo.front();
      todo.pop_front();
      for (int p : rev[q])
        if (seen.insert(p).second) todo.push_back(p);
    }
    return seen;
  }
};

// Strict lexicographic (dictionary) order induced by the alphabet order:
// a proper prefix precedes its extensions.
inline bool lex_less(std::string_view u, std::string_view w,
                     const std::vector<char>& alphabet) {
  auto rank = [&](char x) -> std::size_t {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == x) return i;
    fail(ErrorCode::symbol_not_in_alphabet,
         std::string("symbol not in alphabet: ") + x);
  };
  for (char x : u) rank(x);
  for (char x : w) rank(x);
  std::size_t n = std::min(u.size(), w.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ru = rank(u[i]), rw = rank(w[i]);
    if (ru != rw) return ru < rw;
  }
  return u.size() < w.size();
}

// w is live when w = eps (live by definition) or some continuation of w is
// accepted.
inline bool is_live(const Dfa& m, std::string_view w) {
  if (w.empty()) return true;
  auto q = m.run(w);
  if (!q) return false;
  return m.coaccessible().count(*q) != 0;
}

// Canonical partial DFA of L(m): states are the live Nerode classes,
// renumbered 0..n-1 in BFS order from the initial state (alphabet order).
// For the empty language the result is the lone class of eps: one state,
// no finals, no transitions. Idempotent.
inline Dfa canonical_dfa(const Dfa& m) {
  m.validate();
  std::set<int> reach = m.reachable();
  std::set<int> live;
  for (int q : m.coaccessible())
    if (reach.count(q)) live.insert(q);

  Dfa out;
  out.alphabet = m.alphabet;
  if (!live.count(m.initial)) {
    out.states = {0};
    out.initial = 0;
    return out;
  }

  // Moore refinement over the live part; undefined successors distinguish
  // (all kept states are live, so a defined edge leads to a live class).
  std::map<int, int> block;
  for (int q : live) block[q] = m.finals.count(q) ? 1 : 0;
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::vector<int>, int> sig_ids;
    std::map<int, int> next;
    for (int q : live) {
      std::vector<int> sig{block[q]};
      for (char x : m.alphabet) {
        const int* r = m.step(q, x);
        sig.push_back(r && live.count(*r) ? block[*r] : -1);
      }
      auto it = sig_ids.emplace(sig, (int)sig_ids.size()).first;
      next[q] = it->second;
    }
    if (next != block) {
      block = next;
      changed = true;
    }
  }

  // BFS renumbering by access order.
  std::map<int, int> id;  // block id -> new state
  std::deque<int> todo;
  auto visit = [&](int b) {
    if (!id.count(b)) {
      int n = (int)id.size();
      id[b] = n;
      todo.push_back(b);
    }
  };
  // Representative original state per block, for stepping.
  std::map<int, int> rep;
  for (int q : live)
    if (!rep.count(block[q])) rep[block[q]] = q;
  // rep must be block-invariant; refinement stability guarantees the choice
  // of member does not matter for defined-ness or successor block.
  visit(block[m.initial]);
  while (!todo.empty()) {
    int b = todo.front();
    todo.pop_front();
    for (char x : m.alphabet) {
      const int* r = m.step(rep[b], x);
      if (r && live.count(*r)) visit(block[*r]);
    }
  }

  for (const auto& [b, q] : id) out.states.insert(q);
  out.initial = id.at(block[m.initial]);
  for (int q : live)
    if (m.finals.count(q)) out.finals.insert(id.at(block[q]));
  for (int q : live) {
    for (char x : m.alphabet) {
      const int* r = m.step(q, x);
      if (r && live.count(*r))
        out.delta[{id.at(block[q]), x}] = id.at(block[*r]);
    }
  }
  return out;
}

// Incoming (state, symbol) edges per state. Keys cover all states.
inline std::map<int, std::set<std::pair<int, char>>> pred_map(const Dfa& c) {
  std::map<int, std::set<std::pair<int, char>>> pred;
  for (int q : c.states) pred[q];
  for (const auto& [key, to] : c.delta) pred[to].insert(key);
  return pred;
}

// A class B is a convergence when |B ∩ {eps}| + |pred(B)| > 1. On the
// canonical automaton, eps lies in the initial class.
inline bool is_convergence(const Dfa& c, int state) {
  std::size_t score = state == c.initial ? 1 : 0;
  for (const auto& [key, to] : c.delta)
    if (to == state) ++score;
  return score > 1;
}

// Shortest access string per state (BFS, alphabet order breaks ties), for
// reachable states.
inline std::map<int, std::string> access_strings(const Dfa& c) {
  std::map<int, std::string> acc;
  acc[c.initial] = "";
  std::deque<int> todo{c.initial};
  while (!todo.empty()) {
    int q = todo.front();
    todo.pop_front();
    for (char x : c.alphabet)
      if (const int* r = c.step(q, x))
        if (!acc.count(*r)) {
          acc[*r] = acc[q] + x;
          todo.push_back(*r);
        }
  }
  return acc;
}

}  // namespace talgebra::dfa
