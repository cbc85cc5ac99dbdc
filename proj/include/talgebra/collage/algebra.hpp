#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "talgebra/algebra.hpp"
#include "talgebra/collage/raster.hpp"
#include "talgebra/errors.hpp"
#include "talgebra/geom.hpp"
#include "talgebra/grounding.hpp"
#include "talgebra/term.hpp"
#include "talgebra/types.hpp"
#include "talgebra/value.hpp"

namespace talgebra::collage {

inline const TypeName kPictureType{"picture"};
inline const TypeName kRealType{"real"};

// A k-ary collage operator: applies transform i to argument i and unions
// the results. Affine maps send polygons to polygons, so vertex mapping is
// exact and the output polygon count is the sum of the argument counts.
struct CollageOp {
  std::vector<geom::AffineTransform> transforms;

  std::size_t arity() const { return transforms.size(); }

  // Parameter layout per transform: m11, m12, m21, m22, b1, b2.
  static CollageOp from_params(std::span<const double> params) {
    if (params.empty() || params.size() % 6 != 0)
      fail(ErrorCode::domain_error,
           "collage op needs 6 parameters per transform");
    CollageOp op;
    for (std::size_t i = 0; i < params.size(); i += 6)
      op.transforms.push_back({params[i], params[i + 1], params[i + 2],
                               params[i + 3], params[i + 4], params[i + 5]});
    return op;
  }

  std::vector<double> params() const {
    std::vector<double> out;
    out.reserve(6 * transforms.size());
    for (const geom::AffineTransform& t : transforms) {
      out.push_back(t.a);
      out.push_back(t.b);
      out.push_back(t.c);
      out.push_back(t.d);
      out.push_back(t.tx);
      out.push_back(t.ty);
    }
    return out;
  }

  bool operator==(const CollageOp&) const = default;
};

inline geom::Point affine_apply(const geom::AffineTransform& t,
                                geom::Point p) {
  return t.apply(p);
}

inline geom::Picture collage_apply(const CollageOp& op,
                                   const std::vector<geom::Picture>& pics) {
  if (pics.size() != op.arity())
    fail(ErrorCode::arity_mismatch, "collage op arity does not match arguments");
  geom::Picture out;
  for (std::size_t i = 0; i < pics.size(); ++i) {
    geom::Picture part = pics[i].transformed(op.transforms[i]);
    for (geom::Polygon& poly : part.polygons)
      out.polygons.push_back(std::move(poly));
  }
  return out;
}

inline geom::Picture unit_square_picture() {
  return {{geom::Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})}};
}

// Right triangle on the unit square's lower-left half.
inline geom::Picture unit_triangle_picture() {
  return {{geom::Polygon({{0, 0}, {1, 0}, {0, 1}})}};
}

// Four half-scale translates tiling the unit square; argument order is
// lower-left, lower-right, upper-left, upper-right.
inline CollageOp grid_op() {
  return {{{0.5, 0, 0, 0.5, 0, 0},
           {0.5, 0, 0, 0.5, 0.5, 0},
           {0.5, 0, 0, 0.5, 0, 0.5},
           {0.5, 0, 0, 0.5, 0.5, 0.5}}};
}

// Two half-scale copies, the second shifted to the upper-right quadrant.
inline CollageOp pair_op() {
  return {{{0.5, 0, 0, 0.5, 0, 0}, {0.5, 0, 0, 0.5, 0.5, 0.5}}};
}

enum class PictureDistance { symdiff, hausdorff };

inline double picture_distance(const geom::Picture& a, const geom::Picture& b,
                               PictureDistance d,
                               const geom::Viewport& viewport,
                               int resolution) {
  return d == PictureDistance::symdiff
             ? sym_diff_area(a, b, viewport, resolution)
             : hausdorff_distance(a, b, viewport, resolution);
}

struct CollageConfig {
  PictureDistance distance = PictureDistance::symdiff;
  int resolution = 128;
  geom::Viewport viewport = geom::unit_viewport();
};

inline TypedSymbol sq_symbol() { return {"sq", {}, kPictureType}; }
inline TypedSymbol tri_symbol() { return {"tri", {}, kPictureType}; }
inline TypedSymbol c_symbol() { return {"C", {}, kPictureType}; }
inline TypedSymbol f_symbol() {
  return {"F",
          {kPictureType, kPictureType, kPictureType, kPictureType},
          kPictureType};
}
inline TypedSymbol g_symbol() {
  return {"G", {kPictureType, kPictureType}, kPictureType};
}
inline TypedSymbol delta_symbol() {
  return {"delta", {kPictureType, kPictureType}, kRealType};
}

namespace detail {

inline Operation constant_op(geom::Picture pic) {
  return [pic = std::move(pic)](const std::vector<Value>&) {
    return Value(kPictureType, pic);
  };
}

inline Operation collage_operation(CollageOp op) {
  return [op = std::move(op)](const std::vector<Value>& args) {
    std::vector<geom::Picture> pics;
    pics.reserve(args.size());
    for (const Value& a : args) pics.push_back(a.as_picture());
    return Value(kPictureType, collage_apply(op, pics));
  };
}

inline Operation distance_operation(PictureDistance d,
                                    geom::Viewport viewport, int resolution) {
  return [d, viewport, resolution](const std::vector<Value>& args) {
    return Value(kRealType,
                 picture_distance(args[0].as_picture(), args[1].as_picture(),
                                  d, viewport, resolution));
  };
}

inline AlgebraSpec collage_spec(const CollageConfig& cfg) {
  AlgebraSpec spec;
  spec.alphabet.add(sq_symbol());
  spec.alphabet.add(tri_symbol());
  spec.alphabet.add(c_symbol());
  spec.alphabet.add(f_symbol());
  spec.alphabet.add(g_symbol());
  spec.alphabet.add(delta_symbol());
  spec.domains[kPictureType] = [](const Value& v) {
    return std::holds_alternative<geom::Picture>(v.payload());
  };
  spec.domains[kRealType] = [](const Value& v) {
    const double* d = std::get_if<double>(&v.payload());
    return d && std::isfinite(*d);
  };
  spec.interpretations[sq_symbol()] = constant_op(unit_square_picture());
  spec.interpretations[tri_symbol()] = constant_op(unit_triangle_picture());
  spec.interpretations[c_symbol()] = constant_op(unit_triangle_picture());
  spec.interpretations[g_symbol()] = collage_operation(pair_op());
  spec.interpretations[delta_symbol()] =
      distance_operation(cfg.distance, cfg.viewport, cfg.resolution);
  spec.eval_type = kRealType;
  spec.eval_less = [](const Value& a, const Value& b) {
    return a.as_real() < b.as_real();
  };
  spec.combine = [](const std::vector<Value>& vs) {
    double sum = 0;
    for (const Value& v : vs) sum += v.as_real();
    return Value(kRealType, sum / double(vs.size()));
  };
  spec.opt = OptMode::min;
  return spec;
}

}  // namespace detail

// Template with the grid slot F left open: any 24-parameter vector picks a
// quadruple of affine transforms as its interpretation.
inline TemplateAlgebra collage_template(const CollageConfig& cfg = {}) {
  AlgebraSpec spec = detail::collage_spec(cfg);
  spec.candidate_families[f_symbol()] = {
      24, [](std::span<const double> params) {
        return detail::collage_operation(CollageOp::from_params(params));
      }};
  return TemplateAlgebra(std::move(spec));
}

inline TemplateAlgebra collage_ground_truth(const CollageConfig& cfg = {}) {
  AlgebraSpec spec = detail::collage_spec(cfg);
  spec.interpretations[f_symbol()] = detail::collage_operation(grid_op());
  return TemplateAlgebra(std::move(spec));
}

inline geom::Picture eval_picture_term(const TemplateAlgebra& alg,
                                       const Term& term) {
  return alg.eval_closed(term).as_picture();
}

// Example pairing the term's rendering with a fresh picture variable: the
// query is delta[x1, term] and the lone object is the rendering itself, so
// the example's value under an instance is that instance's distance to the
// reference rendering.
inline Example make_collage_example(const TemplateAlgebra& alg,
                                    const Term& term) {
  Value target = alg.eval_closed(term);
  VariableContext vars;
  vars.declare("x1", kPictureType);
  return Example{Term::apply("delta", {Term::var("x1"), term}),
                 std::move(vars),
                 {{"target", std::move(target)}}};
}

// The four-term training corpus used by the operator-recovery experiment:
// three flat tilings plus one nested term that breaks tile symmetries.
inline std::vector<Term> mixed_tile_terms() {
  Term sq = Term::apply("sq");
  Term tri = Term::apply("tri");
  Term first = Term::apply("F", {tri, sq, tri, sq});
  return {first, Term::apply("F", {tri, tri, sq, sq}),
          Term::apply("F", {sq, tri, sq, tri}),
          Term::apply("F", {first, tri, tri, sq})};
}

}  // namespace talgebra::collage
