#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "talgebra/errors.hpp"

namespace talgebra::dfa {

enum class RegularExampleKind { accept, not_accept, equiv, not_equiv };

// One regular example. accept/not_accept carry a single string; equiv an
// unordered pair of distinct strings; not_equiv a set of two or more
// distinct strings (its value is the min over injective pairs).
struct RegularExample {
  RegularExampleKind kind;
  std::vector<std::string> strings;

  void validate() const {
    auto distinct = [&] {
      std::set<std::string> s(strings.begin(), strings.end());
      return s.size() == strings.size();
    };
    switch (kind) {
      case RegularExampleKind::accept:
      case RegularExampleKind::not_accept:
        if (strings.size() != 1)
          fail(ErrorCode::domain_error,
               "accept/not-accept example needs exactly one string");
        break;
      case RegularExampleKind::equiv:
        if (strings.size() != 2 || !distinct())
          fail(ErrorCode::domain_error,
               "equiv example needs two distinct strings");
        break;
      case RegularExampleKind::not_equiv:
        if (strings.size() < 2 || !distinct())
          fail(ErrorCode::domain_error,
               "not-equiv example needs at least two distinct strings");
        break;
    }
  }

  bool operator==(const RegularExample&) const = default;
};

struct RegularExampleSet {
  std::vector<char> alphabet;
  std::vector<RegularExample> examples;

  void validate() const {
    std::set<char> chars(alphabet.begin(), alphabet.end());
    if (chars.size() != alphabet.size())
      fail(ErrorCode::domain_error, "alphabet has repeated symbols");
    for (const RegularExample& e : examples) {
      e.validate();
      for (const std::string& w : e.strings)
        for (char x : w)
          if (!chars.count(x))
            fail(ErrorCode::symbol_not_in_alphabet,
                 std::string("example symbol not in alphabet: ") + x);
    }
  }

  bool operator==(const RegularExampleSet&) const = default;
};

// Strings(S): strings of positive examples only (accept and equiv).
inline std::set<std::string> strings_of(const RegularExampleSet& s) {
  std::set<std::string> out;
  for (const RegularExample& e : s.examples)
    if (e.kind == RegularExampleKind::accept ||
        e.kind == RegularExampleKind::equiv)
      out.insert(e.strings.begin(), e.strings.end());
  return out;
}

inline std::set<std::string> accept_strings(const RegularExampleSet& s) {
  std::set<std::string> out;
  for (const RegularExample& e : s.examples)
    if (e.kind == RegularExampleKind::accept) out.insert(e.strings[0]);
  return out;
}

}  // namespace talgebra::dfa
