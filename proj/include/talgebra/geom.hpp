#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <utility>
#include <vector>

#include "talgebra/errors.hpp"

namespace talgebra::geom {

struct Point {
  double x = 0;
  double y = 0;
  auto operator<=>(const Point&) const = default;
};

// Affine map p -> M p + b with M = [[a, b], [c, d]], translation (tx, ty).
// Singular M is legal; images may collapse to segments or points.
struct AffineTransform {
  double a = 1, b = 0, c = 0, d = 1, tx = 0, ty = 0;

  Point apply(Point p) const {
    return {a * p.x + b * p.y + tx, c * p.x + d * p.y + ty};
  }

  // this ∘ other: apply `other` first.
  AffineTransform compose(const AffineTransform& o) const {
    return {a * o.a + b * o.c,  a * o.b + b * o.d,
            c * o.a + d * o.c,  c * o.b + d * o.d,
            a * o.tx + b * o.ty + tx, c * o.tx + d * o.ty + ty};
  }

  auto operator<=>(const AffineTransform&) const = default;
};

inline double orient(Point p, Point q, Point r) {
  return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
}

// Strict transversal crossing of segments pq and rs. Touching endpoints and
// collinear overlap do not count, so collapsed (zero-area) shapes pass the
// simplicity check and later rasterize to nothing.
inline bool proper_crossing(Point p, Point q, Point r, Point s) {
  double o1 = orient(p, q, r), o2 = orient(p, q, s);
  double o3 = orient(r, s, p), o4 = orient(r, s, q);
  return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) &&
         ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

// Closed polygon given by its vertex cycle. Construction rejects fewer than
// three vertices, non-finite coordinates, and self-crossing edge pairs.
class Polygon {
 public:
  explicit Polygon(std::vector<Point> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 3)
      fail(ErrorCode::domain_error, "polygon needs at least 3 vertices");
    for (const Point& p : v_)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        fail(ErrorCode::domain_error, "polygon vertex is not finite");
    std::size_t n = v_.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // Skip edges sharing a vertex (consecutive, and first-last pair).
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        if (proper_crossing(v_[i], v_[(i + 1) % n], v_[j], v_[(j + 1) % n]))
          fail(ErrorCode::domain_error, "polygon edges cross");
      }
    }
  }

  const std::vector<Point>& vertices() const { return v_; }

  Polygon transformed(const AffineTransform& t) const {
    std::vector<Point> w;
    w.reserve(v_.size());
    for (const Point& p : v_) w.push_back(t.apply(p));
    return Polygon(std::move(w));
  }

  auto operator<=>(const Polygon& o) const { return v_ <=> o.v_; }
  bool operator==(const Polygon& o) const { return v_ == o.v_; }

 private:
  std::vector<Point> v_;
};

// A picture is a finite union of filled polygons (each filled even-odd).
struct Picture {
  std::vector<Polygon> polygons;

  Picture transformed(const AffineTransform& t) const {
    Picture out;
    out.polygons.reserve(polygons.size());
    for (const Polygon& p : polygons) out.polygons.push_back(p.transformed(t));
    return out;
  }

  auto operator<=>(const Picture&) const = default;
};

struct Viewport {
  Point lo;
  Point hi;

  Viewport(Point lo_, Point hi_) : lo(lo_), hi(hi_) {
    if (!(lo.x < hi.x) || !(lo.y < hi.y))
      fail(ErrorCode::domain_error, "viewport must have positive extent");
  }

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }

  bool operator==(const Viewport&) const = default;
};

inline Viewport unit_viewport() { return Viewport({0, 0}, {1, 1}); }

}  // namespace talgebra::geom
