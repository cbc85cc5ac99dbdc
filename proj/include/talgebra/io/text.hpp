#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "talgebra/errors.hpp"

namespace talgebra::io {

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io_error, "cannot open " + path);
  std::ostringstream out;
  out << f.rdbuf();
  if (f.bad()) fail(ErrorCode::io_error, "cannot read " + path);
  return out.str();
}

// Writes via a sibling temp file and renames over the target, so readers
// never observe a half-written file.
inline void write_file_atomic(const std::string& path,
                              const std::string& bytes) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::io_error, "cannot write " + tmp);
    f.write(bytes.data(), std::streamsize(bytes.size()));
    f.flush();
    if (!f) fail(ErrorCode::io_error, "cannot write " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(ErrorCode::io_error, "cannot move " + tmp + " into place");
  }
}

// Decimal form with enough digits to parse back to the identical double.
inline std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string dirname_of(const std::string& path) {
  std::size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".")
                                    : path.substr(0, slash);
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else
      cur += c;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double parse_real(const std::string& tok, std::size_t line_no) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty())
    fail(ErrorCode::syntax_error,
         "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  return v;
}

inline long parse_int(const std::string& tok, std::size_t line_no) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (end != begin + tok.size() || tok.empty())
    fail(ErrorCode::syntax_error,
         "line " + std::to_string(line_no) + ": bad integer '" + tok + "'");
  return v;
}

}  // namespace detail

}  // namespace talgebra::io
