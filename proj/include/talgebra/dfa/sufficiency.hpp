#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/dfa/dfa.hpp"
#include "talgebra/dfa/examples.hpp"
#include "talgebra/dfa/inference.hpp"
#include "talgebra/dfa/instance.hpp"
#include "talgebra/grounding.hpp"

namespace talgebra::dfa {

struct ConditionResult {
  bool pass = true;
  std::vector<std::string> witnesses;
};

// Outcome of the five sufficiency clauses, with concrete witnesses for each
// failing one. to_text() renders the stable report the CLI prints.
struct SufficiencyReport {
  ConditionResult faithful;           // condition 1
  ConditionResult accepting_cover;    // condition 2a
  ConditionResult convergence_entry;  // condition 2b
  ConditionResult lex_chains;         // condition 3
  ConditionResult class_separation;   // condition 4

  bool sufficient() const {
    return faithful.pass && accepting_cover.pass && convergence_entry.pass &&
           lex_chains.pass && class_separation.pass;
  }

  std::string to_text() const {
    std::string out;
    auto block = [&](const char* label, const ConditionResult& r) {
      out += label;
      out += r.pass ? ": PASS\n" : ": FAIL\n";
      for (const std::string& w : r.witnesses) {
        out += "  ";
        out += w;
        out += '\n';
      }
    };
    block("condition 1 (faithful)", faithful);
    block("condition 2a (accepting classes covered)", accepting_cover);
    block("condition 2b (convergence entries confirmed)", convergence_entry);
    block("condition 3 (equiv chains to lex-minimal strings)", lex_chains);
    block("condition 4 (live class pairs separated)", class_separation);
    out += sufficient() ? "overall: SUFFICIENT\n" : "overall: INSUFFICIENT\n";
    return out;
  }
};

namespace detail {

// Class key of a string under the Nerode congruence of L(c), c canonical:
// live strings get their state, dead strings share one key. For the empty
// language every string is congruent.
inline int nerode_key(const Dfa& c, const std::string& w) {
  if (c.finals.empty()) return 0;
  auto q = c.run(w);
  return q ? *q : -1;
}

inline std::string quoted(const std::string& w) { return "\"" + w + "\""; }

}  // namespace detail

// Literal evaluation of the five sufficiency clauses against the canonical
// automaton of `reference`. Example indices in witnesses are 1-based.
inline SufficiencyReport check_sufficient(const RegularExampleSet& s,
                                          const Dfa& reference) {
  s.validate();
  reference.validate();
  Dfa c = canonical_dfa(reference);
  TemplateAlgebra inst = admissible_instance(reference);
  std::map<int, std::string> rep = access_strings(c);
  std::set<std::string> strs = strings_of(s);
  std::set<std::string> prefs = prefix_closure(strs);
  SufficiencyReport rpt;

  // Condition 1: every example string is live and some grounding is true.
  for (std::size_t i = 0; i < s.examples.size(); ++i) {
    const RegularExample& e = s.examples[i];
    std::string tag = "example " + std::to_string(i + 1) + ": ";
    for (const std::string& w : e.strings)
      if (!is_live(reference, w)) {
        rpt.faithful.pass = false;
        rpt.faithful.witnesses.push_back(tag + "dead string " +
                                         detail::quoted(w));
      }
    Example core = to_core_example(e);
    bool any_true = false;
    for (const GroundingAssignment& g :
         enumerate_groundings(core.vars, core.objects))
      if (inst.eval_open(core.term, core.vars, grounding_env(core, g))
              .as_bool()) {
        any_true = true;
        break;
      }
    if (!any_true) {
      rpt.faithful.pass = false;
      rpt.faithful.witnesses.push_back(tag + "no true grounding");
    }
  }

  // Condition 2a: every class inside L carries an accept example.
  for (int q : c.finals) {
    bool covered = false;
    for (const std::string& w : accept_strings(s)) {
      auto state = c.run(w);
      if (state && *state == q) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      rpt.accepting_cover.pass = false;
      rpt.accepting_cover.witnesses.push_back(
          "class [" + detail::quoted(rep.at(q)) + "]: no accept example");
    }
  }

  // Condition 2b: for every edge into a convergence, the entry strings seen
  // among prefixes all appear as example strings, and at least one exists.
  auto preds = pred_map(c);
  for (int b : c.states) {
    if (!is_convergence(c, b)) continue;
    for (const auto& edge : preds.at(b)) {
      int d = edge.first;
      char x = edge.second;
      std::set<std::string> in_strings, in_prefixes;
      auto collect = [&](const std::set<std::string>& pool,
                         std::set<std::string>& out) {
        for (const std::string& u : pool) {
          if (u.empty() || u.back() != x) continue;
          auto state = c.run(u.substr(0, u.size() - 1));
          if (state && *state == d) out.insert(u);
        }
      };
      collect(strs, in_strings);
      collect(prefs, in_prefixes);
      std::string where = "convergence [" + detail::quoted(rep.at(b)) +
                          "], edge ([" + detail::quoted(rep.at(d)) + "], '" +
                          x + "')";
      if (in_prefixes.empty()) {
        rpt.convergence_entry.pass = false;
        rpt.convergence_entry.witnesses.push_back(where +
                                                  ": no entry string");
        continue;
      }
      for (const std::string& u : in_prefixes)
        if (!in_strings.count(u)) {
          rpt.convergence_entry.pass = false;
          rpt.convergence_entry.witnesses.push_back(
              where + ": prefix " + detail::quoted(u) +
              " is not an example string");
        }
    }
  }

  // Condition 3: every non-lex-minimal example string has an equiv example
  // linking it to an earlier equivalent example string.
  {
    std::map<int, std::vector<std::string>> groups;
    for (const std::string& w : strs)
      groups[detail::nerode_key(c, w)].push_back(w);
    auto has_equiv = [&](const std::string& u, const std::string& w) {
      for (const RegularExample& e : s.examples)
        if (e.kind == RegularExampleKind::equiv &&
            ((e.strings[0] == u && e.strings[1] == w) ||
             (e.strings[0] == w && e.strings[1] == u)))
          return true;
      return false;
    };
    for (auto& [key, members] : groups) {
      std::sort(members.begin(), members.end(),
                [&](const std::string& a, const std::string& b) {
                  return lex_less(a, b, s.alphabet);
                });
      for (std::size_t i = 1; i < members.size(); ++i) {
        bool linked = false;
        for (std::size_t j = 0; j < i; ++j)
          if (has_equiv(members[j], members[i])) {
            linked = true;
            break;
          }
        if (!linked) {
          rpt.lex_chains.pass = false;
          rpt.lex_chains.witnesses.push_back(
              "string " + detail::quoted(members[i]) +
              ": no equiv example to an earlier equivalent string");
        }
      }
    }
  }

  // Condition 4: each pair of distinct live classes needs a not-equiv
  // example holding exactly one member of each.
  for (auto itb = c.states.begin(); itb != c.states.end(); ++itb) {
    for (auto itr = std::next(itb); itr != c.states.end(); ++itr) {
      bool separated = false;
      for (const RegularExample& e : s.examples) {
        if (e.kind != RegularExampleKind::not_equiv) continue;
        int in_b = 0, in_r = 0;
        for (const std::string& w : e.strings) {
          auto state = c.run(w);
          if (!state) continue;
          if (*state == *itb) ++in_b;
          if (*state == *itr) ++in_r;
        }
        if (in_b == 1 && in_r == 1) {
          separated = true;
          break;
        }
      }
      if (!separated) {
        rpt.class_separation.pass = false;
        rpt.class_separation.witnesses.push_back(
            "classes [" + detail::quoted(rep.at(*itb)) + "] and [" +
            detail::quoted(rep.at(*itr)) + "]: no separating example");
      }
    }
  }

  return rpt;
}

}  // namespace talgebra::dfa
