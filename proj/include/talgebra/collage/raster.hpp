#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "talgebra/errors.hpp"
#include "talgebra/geom.hpp"

namespace talgebra::collage {

// Pixel grid over a viewport. Row 0 is the bottom row; bit (i, j) reports
// whether the pixel center (center_x(i), center_y(j)) lies inside a picture.
struct RasterMask {
  geom::Viewport viewport;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // row-major: bits[j*width + i]

  bool at(int i, int j) const {
    return bits[std::size_t(j) * width + i] != 0;
  }

  std::size_t set_count() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits) n += b != 0;
    return n;
  }

  double pixel_width() const { return viewport.width() / width; }
  double pixel_height() const { return viewport.height() / height; }
  double pixel_area() const { return pixel_width() * pixel_height(); }
  double center_x(int i) const {
    return viewport.lo.x + (i + 0.5) * pixel_width();
  }
  double center_y(int j) const {
    return viewport.lo.y + (j + 0.5) * pixel_height();
  }

  bool operator==(const RasterMask&) const = default;
};

// Even-odd membership test: an edge counts when its y-span straddles p.y
// under the semi-open rule (lo.y <= p.y < hi.y after orienting) and its
// crossing lies strictly right of p.x. Points on shared tile boundaries
// therefore belong to exactly one of two abutting tiles.
inline bool point_in_polygon(const geom::Polygon& poly, geom::Point p) {
  const std::vector<geom::Point>& v = poly.vertices();
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      double cx =
          (v[j].x - v[i].x) * (p.y - v[i].y) / (v[j].y - v[i].y) + v[i].x;
      if (p.x < cx) in = !in;
    }
  }
  return in;
}

// Scanline rasterizer. Per row and polygon it computes the same crossing
// abscissas the point test uses (they do not depend on p.x), sorts them, and
// fills the alternating spans between crossing pairs. A pixel center lands
// in span [xs[2t], xs[2t+1]) exactly when an odd number of crossings lies
// strictly right of it, so the result is bit-identical to testing
// point_in_polygon at every pixel center. Zero-area polygons never straddle
// a row and contribute nothing.
inline RasterMask rasterize(const geom::Picture& pic,
                            const geom::Viewport& viewport, int width,
                            int height) {
  if (width < 1 || height < 1)
    fail(ErrorCode::domain_error, "raster needs positive pixel counts");
  RasterMask m{viewport, width, height,
               std::vector<std::uint8_t>(std::size_t(width) * height, 0)};
  const double dx = m.pixel_width();
  // Least i in [0, width] with center_x(i) >= x. The estimate starts a few
  // slots early and advances with the exact predicate, so float error in it
  // cannot move a boundary.
  auto first_at_or_after = [&](double x) {
    double est = (x - viewport.lo.x) / dx - 0.5;
    int i = 0;
    if (est >= double(width)) return width;
    if (est > 0) i = std::max(0, int(est) - 2);
    while (i < width && m.center_x(i) < x) ++i;
    return i;
  };
  std::vector<double> xs;
  for (int jj = 0; jj < height; ++jj) {
    double cy = m.center_y(jj);
    std::uint8_t* row = m.bits.data() + std::size_t(jj) * width;
    for (const geom::Polygon& poly : pic.polygons) {
      const std::vector<geom::Point>& v = poly.vertices();
      xs.clear();
      for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].y > cy) != (v[j].y > cy))
          xs.push_back((v[j].x - v[i].x) * (cy - v[i].y) /
                           (v[j].y - v[i].y) +
                       v[i].x);
      }
      if (xs.empty()) continue;
      std::sort(xs.begin(), xs.end());
      for (std::size_t t = 0; t + 1 < xs.size(); t += 2) {
        int lo = first_at_or_after(xs[t]);
        int hi = first_at_or_after(xs[t + 1]);
        for (int ii = lo; ii < hi; ++ii) row[ii] = 1;
      }
    }
  }
  return m;
}

namespace detail {

inline void require_same_grid(const RasterMask& a, const RasterMask& b) {
  if (!(a.viewport == b.viewport) || a.width != b.width ||
      a.height != b.height)
    fail(ErrorCode::domain_error, "masks disagree on raster grid");
}

inline constexpr double kFarCost = 1e100;

// Lower envelope of parabolas rooted at positions i*s with heights f[i]
// (Felzenszwalb-Huttenlocher); overwrites f with the 1d squared-distance
// transform. kFarCost stands in for +infinity and survives the arithmetic
// because adding bounded squares leaves it dominant.
inline void dt_1d(std::vector<double>& f, double s, std::vector<double>& d,
                  std::vector<double>& z, std::vector<int>& v) {
  const int n = static_cast<int>(f.size());
  d.resize(f.size());
  z.resize(f.size() + 1);
  v.resize(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kFarCost;
  z[1] = kFarCost;
  for (int q = 1; q < n; ++q) {
    double xq = q * s;
    while (true) {
      double xv = v[k] * s;
      double inter =
          (f[q] + xq * xq - (f[v[k]] + xv * xv)) / (2 * xq - 2 * xv);
      if (k > 0 && inter <= z[k]) {
        --k;
        continue;
      }
      v[++k] = q;
      z[k] = inter;
      z[k + 1] = kFarCost;
      break;
    }
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    double xq = q * s;
    while (z[k + 1] < xq) ++k;
    double dx = xq - v[k] * s;
    d[q] = dx * dx + f[v[k]];
  }
  f = d;
}

// Squared Euclidean distance from every pixel center to the nearest set
// pixel center, separable passes with the grid's physical spacings.
inline std::vector<double> squared_edt(const RasterMask& m) {
  const int w = m.width, h = m.height;
  std::vector<double> dist(std::size_t(w) * h);
  for (std::size_t i = 0; i < dist.size(); ++i)
    dist[i] = m.bits[i] ? 0.0 : kFarCost;
  std::vector<double> line, d, z;
  std::vector<int> v;
  line.reserve(std::max(w, h));
  for (int j = 0; j < h; ++j) {
    line.assign(dist.begin() + std::size_t(j) * w,
                dist.begin() + std::size_t(j + 1) * w);
    dt_1d(line, m.pixel_width(), d, z, v);
    std::copy(line.begin(), line.end(), dist.begin() + std::size_t(j) * w);
  }
  for (int i = 0; i < w; ++i) {
    line.resize(h);
    for (int j = 0; j < h; ++j) line[j] = dist[std::size_t(j) * w + i];
    dt_1d(line, m.pixel_height(), d, z, v);
    for (int j = 0; j < h; ++j) dist[std::size_t(j) * w + i] = line[j];
  }
  return dist;
}

}  // namespace detail

// Area of the symmetric difference, measured as XOR pixel count times pixel
// area on a shared grid.
inline double mask_sym_diff_area(const RasterMask& a, const RasterMask& b) {
  detail::require_same_grid(a, b);
  std::size_t differing = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i)
    differing += (a.bits[i] != 0) != (b.bits[i] != 0);
  return double(differing) * a.pixel_area();
}

// Discrete Hausdorff distance between the two set-pixel center sets: the
// larger of the two directed sup-min Euclidean distances.
inline double mask_hausdorff(const RasterMask& a, const RasterMask& b) {
  detail::require_same_grid(a, b);
  if (a.set_count() == 0 || b.set_count() == 0)
    fail(ErrorCode::empty_picture,
         "hausdorff distance needs nonempty pictures");
  std::vector<double> to_a = detail::squared_edt(a);
  std::vector<double> to_b = detail::squared_edt(b);
  double worst = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    if (a.bits[i]) worst = std::max(worst, to_b[i]);
    if (b.bits[i]) worst = std::max(worst, to_a[i]);
  }
  return std::sqrt(worst);
}

inline double sym_diff_area(const geom::Picture& a, const geom::Picture& b,
                            const geom::Viewport& viewport, int resolution) {
  return mask_sym_diff_area(rasterize(a, viewport, resolution, resolution),
                            rasterize(b, viewport, resolution, resolution));
}

inline double hausdorff_distance(const geom::Picture& a,
                                 const geom::Picture& b,
                                 const geom::Viewport& viewport,
                                 int resolution) {
  return mask_hausdorff(rasterize(a, viewport, resolution, resolution),
                        rasterize(b, viewport, resolution, resolution));
}

}  // namespace talgebra::collage
