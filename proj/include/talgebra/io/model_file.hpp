#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/io/text.hpp"
#include "talgebra/scene/model.hpp"

namespace talgebra::io {

// One `model` line per predicate: the weight vector then the bias.
inline std::string models_text(const std::vector<scene::PredicateModel>& ms) {
  scene::check_models(ms);
  std::string out =
      "#dimension " + std::to_string(ms.front().weights.size()) + "\n";
  for (const scene::PredicateModel& m : ms) {
    out += "model";
    for (double w : m.weights) out += " " + real_text(w);
    out += " " + real_text(m.bias) + "\n";
  }
  return out;
}

inline std::vector<scene::PredicateModel> parse_models_text(
    const std::string& text) {
  std::vector<scene::PredicateModel> out;
  std::size_t dimension = 0;
  bool saw_dimension = false;
  std::vector<std::string> lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line_no = i + 1;
    std::vector<std::string> tok = detail::split_ws(lines[i]);
    if (tok.empty()) continue;
    if (tok[0] == "#dimension" && tok.size() == 2) {
      dimension = std::size_t(detail::parse_int(tok[1], line_no));
      saw_dimension = true;
      continue;
    }
    if (tok[0][0] == '#') continue;
    if (tok[0] != "model")
      fail(ErrorCode::syntax_error, "line " + std::to_string(line_no) +
                                        ": unknown keyword '" + tok[0] + "'");
    if (!saw_dimension)
      fail(ErrorCode::syntax_error,
           "line " + std::to_string(line_no) +
               ": model before '#dimension'");
    if (tok.size() != dimension + 2)
      fail(ErrorCode::syntax_error,
           "line " + std::to_string(line_no) + ": expected " +
               std::to_string(dimension + 1) + " numbers, got " +
               std::to_string(tok.size() - 1));
    scene::PredicateModel m;
    for (std::size_t k = 1; k + 1 < tok.size(); ++k)
      m.weights.push_back(detail::parse_real(tok[k], line_no));
    m.bias = detail::parse_real(tok.back(), line_no);
    out.push_back(std::move(m));
  }
  if (out.empty())
    fail(ErrorCode::syntax_error, "model file declares no predicates");
  return out;
}

inline void write_models_file(const std::string& path,
                              const std::vector<scene::PredicateModel>& ms) {
  write_file_atomic(path, models_text(ms));
}

inline std::vector<scene::PredicateModel> read_models_file(
    const std::string& path) {
  return parse_models_text(read_file(path));
}

}  // namespace talgebra::io
