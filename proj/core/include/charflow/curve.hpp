#pragma once

#include <cstddef>
#include <vector>

#include "charflow/expr.hpp"

namespace charflow {

/// Point/vector in the (x, u) solution plane.
struct Vec2 {
  double x = 0.0;
  double u = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, u + o.u}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, u - o.u}; }
  Vec2 operator*(double s) const { return {x * s, u * s}; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Scalar cross product a_x b_u - b_x a_u.
inline double cross(Vec2 a, Vec2 b) { return a.x * b.u - b.x * a.u; }

class VanishingTangentError : public Error {
 public:
  using Error::Error;
};

class NonMonotoneError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class DegenerateAreaSolveError : public Error {
 public:
  using Error::Error;
};

/// One cubic Bezier arc with the endpoint tangent decomposition
/// B'(0) = r1*alpha, B'(1) = r2*beta. The control points always satisfy
/// c1 = a + (r1/3)*alpha and c2 = d - (r2/3)*beta.
struct BezierSegment {
  Vec2 a, c1, c2, d;
  Vec2 alpha, beta;
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Bernstein-form evaluation. t outside [0, 1] is a caller bug.
Vec2 eval(const BezierSegment& seg, double t);

/// Derivative of the Bernstein form; eval_derivative(seg, 0) == r1*alpha.
Vec2 eval_derivative(const BezierSegment& seg, double t);

/// Parametric Hermite: r1 and r2 are chosen so the horizontal component is
/// linear in t. Requires nonvanishing horizontal tangent components; violators
/// must refine the grid instead.
BezierSegment hermite_segment(Vec2 p0, Vec2 p1, Vec2 tan0, Vec2 tan1);

/// Companion constructor for exactly vertical data (jump connectors at the
/// initial time): the Hermite ratios are formed from the vertical components.
/// Requires nonvanishing vertical tangent components and p0.x == p1.x.
BezierSegment vertical_segment(Vec2 p0, Vec2 p1, Vec2 tan0, Vec2 tan1);

/// Rebuilds a segment from endpoints, tangent directions and explicit (r1, r2).
BezierSegment segment_from_tangent_scales(Vec2 p0, Vec2 p1, Vec2 tan0, Vec2 tan1, double r1,
                                          double r2);

/// Signed area under the parametric arc: integral of B2(t) B1'(t) dt over
/// [0, 1], computed with the 3-point Gauss rule (the integrand has degree 5,
/// so the value is exact up to roundoff).
double parametric_area(const BezierSegment& seg);

/// Same quantity from the closed-form bilinear expression in (r1, r2) plus the
/// translation correction. Kept as an independent cross-check of
/// parametric_area.
double parametric_area_closed_form(const BezierSegment& seg);

/// Solves for the r2 that makes the segment's parametric area equal
/// target_area, holding endpoints, tangent directions and r1 fixed. The area
/// is affine in r2; throws DegenerateAreaSolveError when the linear
/// coefficient is below 1e-12 of the segment scale.
double solve_area_preserving_r2(Vec2 p0, Vec2 p1, Vec2 tan0, Vec2 tan1, double r1,
                                double target_area);

/// Minimum of the horizontal velocity B1'(t) over [0, 1]. B1' is quadratic,
/// so the minimizer is an endpoint or the single interior critical point.
/// A negative minimum means the arc overturns.
struct SlopeMinimum {
  double t_min = 0.0;
  double slope = 0.0;
};
SlopeMinimum min_x_slope(const BezierSegment& seg);

/// Piecewise cubic curve: one smooth branch of the solution at a fixed time.
/// Adjacent segments share endpoints exactly; node_params holds the strictly
/// increasing originating parameter of each knot.
struct CurveChain {
  std::vector<BezierSegment> segments;
  std::vector<double> node_params;
  double time_stamp = 0.0;

  std::size_t size() const { return segments.size(); }
  bool empty() const { return segments.empty(); }
  double x_front() const { return segments.front().a.x; }
  double x_back() const { return segments.back().d.x; }

  /// Evaluation at the global parameter s in [0, size()]: segment index
  /// floor(s), local parameter s - floor(s).
  Vec2 at(double s) const;
  Vec2 derivative_at(double s) const;
};

/// Result of inverting the horizontal coordinate on an x-monotone span.
struct ChainPoint {
  std::size_t segment = 0;
  double t = 0.0;
  double u = 0.0;

  double param() const { return static_cast<double>(segment) + t; }
};

/// Solves B1(t) = xq on the bracketing segment with safeguarded Newton
/// (|B1 - xq| <= 1e-13 * (1 + |xq|)). Throws OutOfRangeError when xq is
/// outside the chain and NonMonotoneError when the bracketing segment
/// overturns.
ChainPoint invert_x(const CurveChain& chain, double xq);

/// Signed area of the whole chain: sum of segment parametric areas.
double parametric_area(const CurveChain& chain);

/// Signed area between global parameters s1 <= s2 (partial segments handled
/// by Gauss quadrature on the parameter sub-interval).
double parametric_area_between(const CurveChain& chain, double s1, double s2);

}  // namespace charflow
