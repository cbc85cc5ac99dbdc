#pragma once

// Test-side oracles. They answer language questions purely by running an
// automaton on enumerated strings, independent of the inference code under
// test.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "talgebra/dfa/dfa.hpp"

namespace testsupport {

// All strings over `alphabet` up to max_len, shortest first.
inline std::vector<std::string> all_strings(const std::vector<char>& alphabet,
                                            std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char x : alphabet) out.push_back(out[i] + x);
    begin = end;
  }
  return out;
}

// Suffixes that decide Nerode equivalence in L(m) by brute force. Length
// |states|+1 suffices: totalising m with a dead sink yields at most
// |states|+1 states, and in a DFA with k states any two inequivalent states
// are separated by a word shorter than k.
inline std::vector<std::string> deciding_suffixes(
    const talgebra::dfa::Dfa& m) {
  return all_strings(m.alphabet, m.states.size() + 1);
}

inline bool oracle_equiv(const talgebra::dfa::Dfa& m,
                         const std::vector<std::string>& suffixes,
                         const std::string& u, const std::string& w) {
  for (const std::string& v : suffixes)
    if (m.accepts(u + v) != m.accepts(w + v)) return false;
  return true;
}

inline bool oracle_live(const talgebra::dfa::Dfa& m,
                        const std::vector<std::string>& suffixes,
                        const std::string& w) {
  if (w.empty()) return true;
  for (const std::string& v : suffixes)
    if (m.accepts(w + v)) return true;
  return false;
}

inline double unit_real(std::mt19937_64& rng) {
  return (double)(rng() >> 11) * 0x1.0p-53;
}

// Random partial DFA: 2..6 states, 2..3 symbols, each transition present
// with probability 0.85, each state final with probability 0.4. May contain
// unreachable or dead parts and may recognise the empty language.
inline talgebra::dfa::Dfa random_dfa(std::mt19937_64& rng) {
  talgebra::dfa::Dfa m;
  int nstates = 2 + (int)(rng() % 5);
  int nsyms = 2 + (int)(rng() % 2);
  const char syms[3] = {'a', 'b', 'c'};
  m.alphabet.assign(syms, syms + nsyms);
  for (int q = 0; q < nstates; ++q) m.states.insert(q);
  m.initial = 0;
  for (int q = 0; q < nstates; ++q) {
    if (unit_real(rng) < 0.4) m.finals.insert(q);
    for (char x : m.alphabet)
      if (unit_real(rng) < 0.85)
        m.delta[{q, x}] = (int)(rng() % (std::uint64_t)nstates);
  }
  return m;
}

}  // namespace testsupport
