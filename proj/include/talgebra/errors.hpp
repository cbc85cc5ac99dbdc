#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace talgebra {

// Every failure carries a code; codes group into four categories that the
// CLI maps onto exit codes (parse=2, constraint=3, cap=4, io=5).
enum class ErrorCode {
  unknown_symbol,
  arity_mismatch,
  type_mismatch,
  uninterpreted_symbol,
  domain_error,
  unbound_variable,
  cap_exceeded,
  no_grounding,
  empty_corpus,
  no_terminal_derivation,
  symbol_not_in_alphabet,
  not_right_congruence,
  empty_picture,
  non_finite_loss,
  generation_stalled,
  missing_truth,
  syntax_error,
  io_error,
};

enum class ErrorKind { parse, constraint, cap, io };

constexpr ErrorKind kind_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::syntax_error: return ErrorKind::parse;
    case ErrorCode::cap_exceeded: return ErrorKind::cap;
    case ErrorCode::io_error: return ErrorKind::io;
    default: return ErrorKind::constraint;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace talgebra
