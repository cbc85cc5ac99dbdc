#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "talgebra/dfa/dfa.hpp"
#include "talgebra/errors.hpp"
#include "talgebra/io/text.hpp"

namespace talgebra::io {

// Canonical line-oriented form: one alphabet line, one states line, the
// initial state, one finals line (present even when empty), then one trans
// line per transition in (state, alphabet-order symbol) order.
inline std::string dfa_text(const dfa::Dfa& m) {
  m.validate();
  std::string out = "alphabet";
  for (char x : m.alphabet) out += std::string(" ") + x;
  out += "\nstates";
  for (int q : m.states) out += " " + std::to_string(q);
  out += "\ninitial " + std::to_string(m.initial);
  out += "\nfinal";
  for (int q : m.finals) out += " " + std::to_string(q);
  out += "\n";
  for (int q : m.states)
    for (char x : m.alphabet)
      if (const int* to = m.step(q, x))
        out += "trans " + std::to_string(q) + " " + x + " " +
               std::to_string(*to) + "\n";
  return out;
}

inline dfa::Dfa parse_dfa_text(const std::string& text) {
  dfa::Dfa m;
  bool saw_states = false, saw_initial = false, saw_final = false;
  std::vector<std::string> lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    std::vector<std::string> tok = detail::split_ws(lines[i]);
    if (tok.empty() || tok[0][0] == '#') continue;
    auto want_symbol = [&](const std::string& t) {
      if (t.size() != 1 || !m.has_symbol(t[0]))
        fail(ErrorCode::syntax_error, "line " + std::to_string(line_no) +
                                          ": unknown symbol '" + t + "'");
      return t[0];
    };
    if (tok[0] == "alphabet") {
      for (std::size_t k = 1; k < tok.size(); ++k) {
        if (tok[k].size() != 1)
          fail(ErrorCode::syntax_error,
               "line " + std::to_string(line_no) +
                   ": alphabet symbols are single characters");
        m.alphabet.push_back(tok[k][0]);
      }
    } else if (tok[0] == "states") {
      saw_states = true;
      for (std::size_t k = 1; k < tok.size(); ++k)
        m.states.insert(int(detail::parse_int(tok[k], line_no)));
    } else if (tok[0] == "initial") {
      if (saw_initial || tok.size() != 2)
        fail(ErrorCode::syntax_error, "line " + std::to_string(line_no) +
                                          ": need exactly one initial state");
      saw_initial = true;
      m.initial = int(detail::parse_int(tok[1], line_no));
    } else if (tok[0] == "final") {
      saw_final = true;
      for (std::size_t k = 1; k < tok.size(); ++k)
        m.finals.insert(int(detail::parse_int(tok[k], line_no)));
    } else if (tok[0] == "trans") {
      if (tok.size() != 4)
        fail(ErrorCode::syntax_error,
             "line " + std::to_string(line_no) +
                 ": trans needs 'trans <from> <symbol> <to>'");
      int from = int(detail::parse_int(tok[1], line_no));
      char x = want_symbol(tok[2]);
      int to = int(detail::parse_int(tok[3], line_no));
      if (m.delta.count({from, x}))
        fail(ErrorCode::syntax_error, "line " + std::to_string(line_no) +
                                          ": duplicate transition");
      m.delta[{from, x}] = to;
    } else {
      fail(ErrorCode::syntax_error, "line " + std::to_string(line_no) +
                                        ": unknown keyword '" + tok[0] + "'");
    }
  }
  if (!saw_states || !saw_initial || !saw_final)
    fail(ErrorCode::syntax_error,
         "missing required line: states, initial, and final");
  try {
    m.validate();
  } catch (const Error& e) {
    fail(ErrorCode::syntax_error, std::string("invalid automaton: ") + e.what());
  }
  return m;
}

inline void write_dfa_file(const std::string& path, const dfa::Dfa& m) {
  write_file_atomic(path, dfa_text(m));
}

inline dfa::Dfa read_dfa_file(const std::string& path) {
  return parse_dfa_text(read_file(path));
}

// Graphviz rendering: the initial state gets an in-arrow from an invisible
// point, final states are double-circled.
inline std::string dot_text(const dfa::Dfa& m) {
  m.validate();
  std::map<int, std::string> node;
  std::size_t i = 0;
  for (int q : m.states) node[q] = "s" + std::to_string(i++);
  std::string out = "digraph dfa {\n  rankdir=LR;\n";
  out += "  __start [shape=point, label=\"\"];\n";
  for (int q : m.states)
    out += "  " + node[q] + " [shape=" +
           (m.finals.count(q) ? "doublecircle" : "circle") + ", label=\"" +
           std::to_string(q) + "\"];\n";
  out += "  __start -> " + node[m.initial] + ";\n";
  for (int q : m.states)
    for (char x : m.alphabet)
      if (const int* to = m.step(q, x))
        out += "  " + node[q] + " -> " + node[*to] + " [label=\"" + x +
               "\"];\n";
  out += "}\n";
  return out;
}

}  // namespace talgebra::io
