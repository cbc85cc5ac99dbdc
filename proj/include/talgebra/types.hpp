#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"

namespace talgebra {

struct TypeName {
  std::string name;
  auto operator<=>(const TypeName&) const = default;
};

// A ranked, typed symbol. Two symbols may share a name if their signatures
// differ; overloads are resolved bottom-up from argument types.
struct TypedSymbol {
  std::string name;
  std::vector<TypeName> arg_types;
  TypeName result_type;

  std::size_t arity() const { return arg_types.size(); }
  auto operator<=>(const TypedSymbol&) const = default;
};

class Alphabet {
 public:
  Alphabet() = default;

  void add(TypedSymbol s) {
    for (const TypedSymbol& t : symbols_)
      if (t == s)
        fail(ErrorCode::domain_error,
             "duplicate symbol in alphabet: " + s.name);
    symbols_.push_back(std::move(s));
  }

  const std::vector<TypedSymbol>& symbols() const { return symbols_; }

  std::vector<const TypedSymbol*> lookup(const std::string& name) const {
    std::vector<const TypedSymbol*> found;
    for (const TypedSymbol& s : symbols_)
      if (s.name == name) found.push_back(&s);
    return found;
  }

  const TypedSymbol* lookup_one(const std::string& name,
                                const std::vector<TypeName>& args) const {
    for (const TypedSymbol& s : symbols_)
      if (s.name == name && s.arg_types == args) return &s;
    return nullptr;
  }

 private:
  std::vector<TypedSymbol> symbols_;
};

// Ordered variable declarations x1:t1, ..., xl:tl. Order fixes the grounding
// enumeration order. Names are unique.
class VariableContext {
 public:
  VariableContext() = default;

  explicit VariableContext(
      std::vector<std::pair<std::string, TypeName>> vars) {
    for (auto& [name, type] : vars) declare(name, type);
  }

  void declare(const std::string& name, const TypeName& type) {
    if (find(name))
      fail(ErrorCode::domain_error, "duplicate variable: " + name);
    vars_.emplace_back(name, type);
  }

  const TypeName* find(const std::string& name) const {
    for (const auto& [n, t] : vars_)
      if (n == name) return &t;
    return nullptr;
  }

  const std::vector<std::pair<std::string, TypeName>>& entries() const {
    return vars_;
  }

  std::size_t size() const { return vars_.size(); }

 private:
  std::vector<std::pair<std::string, TypeName>> vars_;
};

}  // namespace talgebra
