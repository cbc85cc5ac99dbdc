#pragma once

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "talgebra/collage/raster.hpp"
#include "talgebra/errors.hpp"
#include "talgebra/geom.hpp"

namespace talgebra::collage {

namespace detail {

inline void append_num(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  f.write(bytes.data(), std::streamsize(bytes.size()));
  if (!f) fail(ErrorCode::io_error, "cannot write " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io_error, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  if (!f && !f.eof()) fail(ErrorCode::io_error, "cannot read " + path);
  return std::move(ss).str();
}

}  // namespace detail

// One even-odd-filled path per polygon; the group transform flips y inside
// the viewport band so the picture's mathematical orientation (y up) renders
// upright. Coordinates are printed with enough digits to round-trip exactly.
inline std::string svg_text(const geom::Picture& pic,
                            const geom::Viewport& viewport =
                                geom::unit_viewport()) {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
  detail::append_num(out, viewport.lo.x);
  out += ' ';
  detail::append_num(out, viewport.lo.y);
  out += ' ';
  detail::append_num(out, viewport.width());
  out += ' ';
  detail::append_num(out, viewport.height());
  long px_h =
      std::lround(512.0 * viewport.height() / viewport.width());
  out += "\" width=\"512\" height=\"" + std::to_string(px_h < 1 ? 1 : px_h) +
         "\">\n<g transform=\"matrix(1 0 0 -1 0 ";
  detail::append_num(out, viewport.lo.y + viewport.hi.y);
  out += ")\">\n";
  for (const geom::Polygon& poly : pic.polygons) {
    out += "<path d=\"";
    const std::vector<geom::Point>& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += i == 0 ? "M " : "L ";
      detail::append_num(out, v[i].x);
      out += ' ';
      detail::append_num(out, v[i].y);
      out += ' ';
    }
    out += "Z\" fill=\"#000000\" fill-rule=\"evenodd\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

// Reads back the subset svg_text emits: every path's d attribute must be
// "M x y (L x y)* Z". Anything else is a syntax error.
inline geom::Picture parse_svg_text(const std::string& text) {
  geom::Picture pic;
  std::size_t pos = 0;
  while ((pos = text.find("d=\"", pos)) != std::string::npos) {
    pos += 3;
    std::size_t end = text.find('"', pos);
    if (end == std::string::npos)
      fail(ErrorCode::syntax_error, "unterminated path data");
    std::string data = text.substr(pos, end - pos);
    pos = end + 1;

    std::vector<geom::Point> points;
    const char* cur = data.c_str();
    auto skip_space = [&] {
      while (*cur == ' ' || *cur == '\t' || *cur == '\n') ++cur;
    };
    auto read_point = [&] {
      char* after = nullptr;
      double x = std::strtod(cur, &after);
      if (after == cur)
        fail(ErrorCode::syntax_error, "expected coordinate in path data");
      cur = after;
      double y = std::strtod(cur, &after);
      if (after == cur)
        fail(ErrorCode::syntax_error, "expected coordinate in path data");
      cur = after;
      points.push_back({x, y});
    };
    skip_space();
    if (*cur != 'M')
      fail(ErrorCode::syntax_error, "path data must start with M");
    ++cur;
    read_point();
    skip_space();
    while (*cur == 'L') {
      ++cur;
      read_point();
      skip_space();
    }
    if (*cur != 'Z')
      fail(ErrorCode::syntax_error, "path data must end with Z");
    ++cur;
    skip_space();
    if (*cur != '\0')
      fail(ErrorCode::syntax_error, "trailing characters in path data");
    pic.polygons.push_back(geom::Polygon(std::move(points)));
  }
  return pic;
}

inline void export_svg(const geom::Picture& pic, const std::string& path,
                       const geom::Viewport& viewport =
                           geom::unit_viewport()) {
  detail::write_file(path, svg_text(pic, viewport));
}

inline geom::Picture parse_svg_subset(const std::string& path) {
  return parse_svg_text(detail::read_file(path));
}

namespace detail {

inline void append_be32(std::string& out, std::uint32_t v) {
  out += char(v >> 24 & 0xff);
  out += char(v >> 16 & 0xff);
  out += char(v >> 8 & 0xff);
  out += char(v & 0xff);
}

inline void append_chunk(std::string& out, const char type[5],
                         const std::string& data) {
  append_be32(out, std::uint32_t(data.size()));
  std::string body = std::string(type, 4) + data;
  out += body;
  append_be32(out,
              std::uint32_t(crc32(0, reinterpret_cast<const Bytef*>(
                                         body.data()),
                                  uInt(body.size()))));
}

}  // namespace detail

// 1-bit grayscale PNG of the mask, set pixels white. PNG rows run top-down,
// so the bottom-up mask is flipped on the way out.
inline std::string png_bytes(const RasterMask& m) {
  std::string raw;
  const int row_bytes = (m.width + 7) / 8;
  raw.reserve(std::size_t(m.height) * (row_bytes + 1));
  for (int j = m.height - 1; j >= 0; --j) {
    raw += '\0';  // filter type: none
    for (int byte = 0; byte < row_bytes; ++byte) {
      unsigned packed = 0;
      for (int bit = 0; bit < 8; ++bit) {
        int i = byte * 8 + bit;
        if (i < m.width && m.at(i, j)) packed |= 0x80u >> bit;
      }
      raw += char(packed);
    }
  }
  uLongf compressed_size = compressBound(uLong(raw.size()));
  std::string compressed(compressed_size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &compressed_size,
                reinterpret_cast<const Bytef*>(raw.data()), uLong(raw.size()),
                Z_BEST_COMPRESSION) != Z_OK)
    fail(ErrorCode::io_error, "png compression failed");
  compressed.resize(compressed_size);

  std::string ihdr;
  detail::append_be32(ihdr, std::uint32_t(m.width));
  detail::append_be32(ihdr, std::uint32_t(m.height));
  ihdr += char(1);  // bit depth
  ihdr += char(0);  // color type: grayscale
  ihdr += char(0);  // compression
  ihdr += char(0);  // filter
  ihdr += char(0);  // interlace

  std::string out("\x89PNG\r\n\x1a\n", 8);
  detail::append_chunk(out, "IHDR", ihdr);
  detail::append_chunk(out, "IDAT", compressed);
  detail::append_chunk(out, "IEND", "");
  return out;
}

inline void export_png_mask(const RasterMask& m, const std::string& path) {
  detail::write_file(path, png_bytes(m));
}

}  // namespace talgebra::collage
