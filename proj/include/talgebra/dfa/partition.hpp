#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"

namespace talgebra::dfa {

// Equivalence classes over a fixed finite string carrier. Roots are the
// lexicographically least members of their class (std::string order), so
// find() doubles as a deterministic class representative.
class StringPartition {
 public:
  explicit StringPartition(std::set<std::string> carrier)
      : carrier_(std::move(carrier)) {
    for (const std::string& s : carrier_) parent_[s] = s;
  }

  const std::set<std::string>& carrier() const { return carrier_; }

  bool contains(const std::string& s) const { return carrier_.count(s) != 0; }

  const std::string& find(const std::string& s) const {
    auto it = parent_.find(s);
    if (it == parent_.end())
      fail(ErrorCode::domain_error, "string not in partition carrier: " + s);
    while (it->second != it->first) it = parent_.find(it->second);
    return it->first;
  }

  bool same(const std::string& a, const std::string& b) const {
    return find(a) == find(b);
  }

  void merge(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;
  }

  // Classes sorted by representative; members sorted.
  std::vector<std::vector<std::string>> classes() const {
    std::map<std::string, std::vector<std::string>> by_rep;
    for (const std::string& s : carrier_) by_rep[find(s)].push_back(s);
    std::vector<std::vector<std::string>> out;
    out.reserve(by_rep.size());
    for (auto& [rep, members] : by_rep) out.push_back(std::move(members));
    return out;
  }

 private:
  std::set<std::string> carrier_;
  std::map<std::string, std::string> parent_;
};

}  // namespace talgebra::dfa
