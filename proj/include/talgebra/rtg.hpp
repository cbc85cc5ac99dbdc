#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/term.hpp"

namespace talgebra {

// Rule lhs -> rhs. In rhs, a variable leaf whose name is a declared
// nonterminal stands for that nonterminal; other leaves are plain term
// structure (including genuine variables of generated formulas).
struct RtgRule {
  std::string lhs;
  Term rhs;
};

class Rtg {
 public:
  Rtg(std::vector<std::string> nonterminals, std::string start,
      std::vector<RtgRule> rules)
      : nts_(std::move(nonterminals)),
        start_(std::move(start)),
        rules_(std::move(rules)) {
    if (!is_nonterminal(start_))
      fail(ErrorCode::domain_error, "start symbol is not declared: " + start_);
    for (const RtgRule& r : rules_)
      if (!is_nonterminal(r.lhs))
        fail(ErrorCode::domain_error, "rule lhs is not declared: " + r.lhs);
  }

  bool is_nonterminal(const std::string& name) const {
    return std::find(nts_.begin(), nts_.end(), name) != nts_.end();
  }

  const std::string& start() const { return start_; }
  const std::vector<std::string>& nonterminals() const { return nts_; }
  const std::vector<RtgRule>& rules() const { return rules_; }

  std::vector<std::size_t> rules_for(const std::string& nt) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rules_.size(); ++i)
      if (rules_[i].lhs == nt) out.push_back(i);
    return out;
  }

 private:
  std::vector<std::string> nts_;
  std::string start_;
  std::vector<RtgRule> rules_;
};

namespace detail {

inline constexpr int kInfHeight = std::numeric_limits<int>::max() / 4;

// Height of a derivation: 0 for a rule whose rhs has no nonterminal,
// otherwise 1 + max over nonterminal slots. min_heights computes, per
// nonterminal, the least achievable derivation height (fixpoint).
inline std::map<std::string, int> min_heights(const Rtg& g) {
  std::map<std::string, int> h;
  for (const std::string& nt : g.nonterminals()) h[nt] = kInfHeight;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const RtgRule& r : g.rules()) {
      int worst = -1;
      auto scan = [&](auto&& self, const Term& t) -> void {
        if (t.is_variable() && g.is_nonterminal(t.head()))
          worst = std::max(worst, h.at(t.head()));
        for (const Term& a : t.args()) self(self, a);
      };
      scan(scan, r.rhs);
      int cost = worst < 0 ? 0 : (worst >= kInfHeight ? kInfHeight : worst + 1);
      if (cost < h.at(r.lhs)) {
        h.at(r.lhs) = cost;
        changed = true;
      }
    }
  }
  return h;
}

inline int rule_min_height(const Rtg& g, const std::map<std::string, int>& h,
                           const RtgRule& r) {
  int worst = -1;
  auto scan = [&](auto&& self, const Term& t) -> void {
    if (t.is_variable() && g.is_nonterminal(t.head()))
      worst = std::max(worst, h.at(t.head()));
    for (const Term& a : t.args()) self(self, a);
  };
  scan(scan, r.rhs);
  return worst < 0 ? 0 : (worst >= kInfHeight ? kInfHeight : worst + 1);
}

}  // namespace detail

// All distinct terminal terms derivable from the start symbol with a
// derivation of height <= depth_bound (see detail::min_heights for the
// height convention). Result is sorted; monotone in depth_bound.
inline std::vector<Term> rtg_generate_exhaustive(const Rtg& g,
                                                 int depth_bound) {
  if (depth_bound < 0)
    fail(ErrorCode::domain_error, "depth bound must be nonnegative");
  auto mh = detail::min_heights(g);
  if (mh.at(g.start()) >= detail::kInfHeight)
    fail(ErrorCode::no_terminal_derivation,
         "grammar derives no terminal term");

  std::map<std::pair<std::string, int>, std::vector<Term>> memo;
  auto gen = [&](auto&& self, const std::string& nt,
                 int depth) -> const std::vector<Term>& {
    auto key = std::make_pair(nt, depth);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::set<Term> acc;
    for (std::size_t ri : g.rules_for(nt)) {
      const RtgRule& r = g.rules()[ri];
      // rule_min_height is 0 exactly when the rhs has no nonterminal leaf;
      // such rules cost no depth. Others consume one level.
      bool has_nt = detail::rule_min_height(g, mh, r) > 0;
      if (has_nt && depth == 0) continue;
      int sub_depth = has_nt ? depth - 1 : depth;
      auto expand = [&](auto&& self2, const Term& t,
                        std::vector<Term>& alts) -> void {
        if (t.is_variable() && g.is_nonterminal(t.head())) {
          alts = self(self, t.head(), sub_depth);
          return;
        }
        if (t.args().empty()) {
          alts = {t};
          return;
        }
        std::vector<std::vector<Term>> child_alts(t.args().size());
        for (std::size_t i = 0; i < t.args().size(); ++i)
          self2(self2, t.args()[i], child_alts[i]);
        for (const auto& ca : child_alts)
          if (ca.empty()) {
            alts.clear();
            return;
          }
        // Cross product over child alternatives.
        std::vector<std::size_t> idx(t.args().size(), 0);
        while (true) {
          std::vector<Term> kids;
          kids.reserve(idx.size());
          for (std::size_t i = 0; i < idx.size(); ++i)
            kids.push_back(child_alts[i][idx[i]]);
          alts.push_back(Term::apply(t.head(), std::move(kids)));
          std::size_t k = idx.size();
          while (k > 0) {
            if (++idx[k - 1] < child_alts[k - 1].size()) break;
            idx[k - 1] = 0;
            --k;
          }
          if (k == 0) break;
        }
      };
      std::vector<Term> alts;
      expand(expand, r.rhs, alts);
      for (Term& t : alts) acc.insert(std::move(t));
    }
    return memo.emplace(key, std::vector<Term>(acc.begin(), acc.end()))
        .first->second;
  };
  return gen(gen, g.start(), depth_bound);
}

// `count` random terminal terms. Rules are chosen uniformly until the
// cutoff depth; past it, only rules of minimal completion height remain,
// which forces termination.
inline std::vector<Term> rtg_generate_random(const Rtg& g, std::size_t count,
                                             std::uint64_t seed, int cutoff) {
  auto mh = detail::min_heights(g);
  if (mh.at(g.start()) >= detail::kInfHeight)
    fail(ErrorCode::no_terminal_derivation,
         "grammar derives no terminal term");
  std::mt19937_64 rng(seed);

  auto derive = [&](auto&& self, const std::string& nt, int depth) -> Term {
    std::vector<std::size_t> options = g.rules_for(nt);
    if (depth >= cutoff) {
      int best = detail::kInfHeight;
      for (std::size_t ri : options)
        best =
            std::min(best, detail::rule_min_height(g, mh, g.rules()[ri]));
      std::vector<std::size_t> forced;
      for (std::size_t ri : options)
        if (detail::rule_min_height(g, mh, g.rules()[ri]) == best)
          forced.push_back(ri);
      options = std::move(forced);
    }
    const RtgRule& r = g.rules()[options[rng() % options.size()]];
    auto fill = [&](auto&& self2, const Term& t) -> Term {
      if (t.is_variable() && g.is_nonterminal(t.head()))
        return self(self, t.head(), depth + 1);
      if (t.args().empty()) return t;
      std::vector<Term> kids;
      kids.reserve(t.args().size());
      for (const Term& a : t.args()) kids.push_back(self2(self2, a));
      return Term::apply(t.head(), std::move(kids));
    };
    return fill(fill, r.rhs);
  };

  std::vector<Term> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(derive(derive, g.start(), 0));
  return out;
}

}  // namespace talgebra
