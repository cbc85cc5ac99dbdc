#pragma once

#include <compare>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace talgebra {

// Immutable term over a ranked alphabet, with variables at the leaves.
// Nodes are shared, so copying a Term and reusing it as a subterm of many
// parents costs one pointer. Equality and ordering are structural.
class Term {
 public:
  static Term apply(std::string head, std::vector<Term> args = {}) {
    return Term(std::make_shared<const Node>(
        Node{std::move(head), std::move(args), false}));
  }

  static Term var(std::string name) {
    return Term(std::make_shared<const Node>(Node{std::move(name), {}, true}));
  }

  const std::string& head() const { return n_->head; }
  bool is_variable() const { return n_->variable; }
  const std::vector<Term>& args() const { return n_->args; }

  bool operator==(const Term& o) const {
    if (n_ == o.n_) return true;
    return n_->variable == o.n_->variable && n_->head == o.n_->head &&
           n_->args == o.n_->args;
  }

  std::strong_ordering operator<=>(const Term& o) const {
    if (n_ == o.n_) return std::strong_ordering::equal;
    if (auto c = n_->variable <=> o.n_->variable; c != 0) return c;
    if (auto c = n_->head <=> o.n_->head; c != 0) return c;
    return n_->args <=> o.n_->args;
  }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (const Term& a : n_->args) n += a.node_count();
    return n;
  }

 private:
  struct Node {
    std::string head;
    std::vector<Term> args;
    bool variable;
  };

  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

  std::shared_ptr<const Node> n_;
};

// Bracket rendering: `head` or `head[arg,arg,...]`. parse_term in io/ reads
// this same syntax back.
inline void append_text(const Term& t, std::string& out) {
  out += t.head();
  if (!t.args().empty()) {
    out += '[';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ',';
      append_text(t.args()[i], out);
    }
    out += ']';
  }
}

inline std::string to_text(const Term& t) {
  std::string out;
  append_text(t, out);
  return out;
}

}  // namespace talgebra
