#include "charflow/curve.hpp"

#include <algorithm>
#include <cmath>

#include "charflow/quadrature.hpp"

namespace charflow {

namespace {

double bernstein3(double a, double c1, double c2, double d, double t) {
  const double s = 1.0 - t;
  return a * s * s * s + 3.0 * c1 * s * s * t + 3.0 * c2 * s * t * t + d * t * t * t;
}

double bernstein3_derivative(double a, double c1, double c2, double d, double t) {
  const double s = 1.0 - t;
  return 3.0 * ((c1 - a) * s * s + 2.0 * (c2 - c1) * s * t + (d - c2) * t * t);
}

BezierSegment assemble(Vec2 p0, Vec2 p1, Vec2 tan0, Vec2 tan1, double r1, double r2) {
  BezierSegment seg;
  seg.a = p0;
  seg.d = p1;
  seg.alpha = tan0;
  seg.beta = tan1;
  seg.r1 = r1;
  seg.r2 = r2;
  seg.c1 = p0 + (r1 / 3.0) * tan0;
  seg.c2 = p1 - (r2 / 3.0) * tan1;
  return seg;
}

}  // namespace

Vec2 eval(const BezierSegment& seg, double t) {
  if (t < 0.0 || t > 1.0) throw OutOfRangeError("Bezier parameter outside [0, 1]");
  return {bernstein3(seg.a.x, seg.c1.x, seg.c2.x, seg.d.x, t),
          bernstein3(seg.a.u, seg.c1.u, seg.c2.u, seg.d.u, t)};
}

Vec2 eval_derivative(const BezierSegment& seg, double t) {
  if (t < 0.0 || t > 1.0) throw OutOfRangeError("Bezier parameter outside [0, 1]");
  return {bernstein3_derivative(seg.a.x, seg.c1.x, seg.c2.x, seg.d.x, t),
          bernstein3_derivative(seg.a.u, seg.c1.u, seg.c2.u, seg.d.u, t)};
}

BezierSegment hermite_segment(Vec2 p0, Vec2 p1, Vec2 tan0, Vec2 tan1) {
  if (tan0.x == 0.0 || tan1.x == 0.0)
    throw VanishingTangentError(
        "horizontal tangent component vanishes; refine the grid around the fold");
  const double dx = p1.x - p0.x;
  return assemble(p0, p1, tan0, tan1, dx / tan0.x, dx / tan1.x);
}

BezierSegment vertical_segment(Vec2 p0, Vec2 p1, Vec2 tan0, Vec2 tan1) {
  if (tan0.u == 0.0 || tan1.u == 0.0)
    throw VanishingTangentError("vertical tangent component vanishes for vertical data");
  const double du = p1.u - p0.u;
  return assemble(p0, p1, tan0, tan1, du / tan0.u, du / tan1.u);
}

BezierSegment segment_from_tangent_scales(Vec2 p0, Vec2 p1, Vec2 tan0, Vec2 tan1, double r1,
                                          double r2) {
  return assemble(p0, p1, tan0, tan1, r1, r2);
}

double parametric_area(const BezierSegment& seg) {
  return gauss3(
      [&seg](double t) {
        return bernstein3(seg.a.u, seg.c1.u, seg.c2.u, seg.d.u, t) *
               bernstein3_derivative(seg.a.x, seg.c1.x, seg.c2.x, seg.d.x, t);
      },
      0.0, 1.0);
}

double parametric_area_closed_form(const BezierSegment& seg) {
  const Vec2 dd = seg.d - seg.a;  // data translated so the start point is the origin
  const double translated = seg.r1 * seg.r2 / 60.0 * cross(seg.alpha, seg.beta) +
                            seg.r1 / 10.0 * cross(dd, seg.alpha) +
                            seg.r2 / 10.0 * cross(seg.beta, dd) + 0.5 * dd.x * dd.u;
  return translated + seg.a.u * dd.x;
}

double solve_area_preserving_r2(Vec2 p0, Vec2 p1, Vec2 tan0, Vec2 tan1, double r1,
                                double target_area) {
  const Vec2 dd = p1 - p0;
  const double coef = r1 / 60.0 * cross(tan0, tan1) + cross(tan1, dd) / 10.0;
  const double norm0 = std::hypot(tan0.x, tan0.u);
  const double norm1 = std::hypot(tan1.x, tan1.u);
  const double extent = std::hypot(dd.x, dd.u);
  const double coef_scale = std::abs(r1) / 60.0 * norm0 * norm1 + norm1 * extent / 10.0;
  if (std::abs(coef) <= 1e-12 * coef_scale)
    throw DegenerateAreaSolveError("area equation is degenerate in r2");
  const double translated_target = target_area - p0.u * dd.x;
  const double constant = r1 / 10.0 * cross(dd, tan0) + 0.5 * dd.x * dd.u;
  return (translated_target - constant) / coef;
}

SlopeMinimum min_x_slope(const BezierSegment& seg) {
  const double d0 = 3.0 * (seg.c1.x - seg.a.x);
  const double d1 = 3.0 * (seg.c2.x - seg.c1.x);
  const double d2 = 3.0 * (seg.d.x - seg.c2.x);
  // B1'(t) = A t^2 + B t + C in monomial form.
  const double qa = d0 - 2.0 * d1 + d2;
  const double qb = 2.0 * (d1 - d0);
  SlopeMinimum best{0.0, d0};
  if (d2 < best.slope) best = {1.0, d2};
  if (qa != 0.0) {
    const double tc = -qb / (2.0 * qa);
    if (tc > 0.0 && tc < 1.0) {
      const double val = (qa * tc + qb) * tc + d0;
      if (val < best.slope) best = {tc, val};
    }
  }
  return best;
}

Vec2 CurveChain::at(double s) const {
  const auto n = static_cast<double>(segments.size());
  s = std::clamp(s, 0.0, n);
  std::size_t idx = static_cast<std::size_t>(std::min(std::floor(s), n - 1.0));
  return eval(segments[idx], s - static_cast<double>(idx));
}

Vec2 CurveChain::derivative_at(double s) const {
  const auto n = static_cast<double>(segments.size());
  s = std::clamp(s, 0.0, n);
  std::size_t idx = static_cast<std::size_t>(std::min(std::floor(s), n - 1.0));
  return eval_derivative(segments[idx], s - static_cast<double>(idx));
}

ChainPoint invert_x(const CurveChain& chain, double xq) {
  if (chain.empty()) throw OutOfRangeError("inverting an empty chain");
  const double tol = 1e-13 * (1.0 + std::abs(xq));
  const double lo = chain.x_front();
  const double hi = chain.x_back();
  if (xq < lo - tol || xq > hi + tol)
    throw OutOfRangeError("query x outside the chain's horizontal range");
  const double x_clamped = std::clamp(xq, lo, hi);

  // Bracketing segment by endpoint abscissae (the span is x-monotone).
  std::size_t idx = 0;
  while (idx + 1 < chain.segments.size() && chain.segments[idx].d.x < x_clamped) ++idx;
  const BezierSegment& seg = chain.segments[idx];

  const double span = seg.d.x - seg.a.x;
  if (min_x_slope(seg).slope < -1e-12 * (1.0 + std::abs(span)))
    throw NonMonotoneError("segment overturns; resolve the shock before inverting");

  // Safeguarded Newton on B1(t) = xq with a bisection bracket.
  double t_lo = 0.0, t_hi = 1.0;
  double t = span != 0.0 ? std::clamp((x_clamped - seg.a.x) / span, 0.0, 1.0) : 0.5;
  for (int iter = 0; iter < 100; ++iter) {
    const double fx = bernstein3(seg.a.x, seg.c1.x, seg.c2.x, seg.d.x, t) - x_clamped;
    if (std::abs(fx) <= tol) break;
    if (fx > 0.0)
      t_hi = t;
    else
      t_lo = t;
    const double dfx = bernstein3_derivative(seg.a.x, seg.c1.x, seg.c2.x, seg.d.x, t);
    double t_next = dfx != 0.0 ? t - fx / dfx : 0.5 * (t_lo + t_hi);
    if (t_next <= t_lo || t_next >= t_hi) t_next = 0.5 * (t_lo + t_hi);
    t = t_next;
  }
  return {idx, t, bernstein3(seg.a.u, seg.c1.u, seg.c2.u, seg.d.u, t)};
}

double parametric_area(const CurveChain& chain) {
  double total = 0.0;
  for (const BezierSegment& seg : chain.segments) total += parametric_area(seg);
  return total;
}

double parametric_area_between(const CurveChain& chain, double s1, double s2) {
  if (s1 > s2) return -parametric_area_between(chain, s2, s1);
  const double n = static_cast<double>(chain.segments.size());
  s1 = std::clamp(s1, 0.0, n);
  s2 = std::clamp(s2, 0.0, n);
  double total = 0.0;
  std::size_t first = static_cast<std::size_t>(std::min(std::floor(s1), n - 1.0));
  std::size_t last = static_cast<std::size_t>(std::min(std::floor(s2), n - 1.0));
  for (std::size_t i = first; i <= last; ++i) {
    const double ta = i == first ? s1 - static_cast<double>(i) : 0.0;
    const double tb = i == last ? s2 - static_cast<double>(i) : 1.0;
    if (tb <= ta) continue;
    const BezierSegment& seg = chain.segments[i];
    if (ta == 0.0 && tb == 1.0) {
      total += parametric_area(seg);
    } else {
      total += gauss3(
          [&seg](double t) {
            return bernstein3(seg.a.u, seg.c1.u, seg.c2.u, seg.d.u, t) *
                   bernstein3_derivative(seg.a.x, seg.c1.x, seg.c2.x, seg.d.x, t);
          },
          ta, tb);
    }
  }
  return total;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
  struct Recursor {
    const std::function<double(double)>& f;
    static double simpson(double fa, double fm, double fb, double h) {
      return h / 6.0 * (fa + 4.0 * fm + fb);
    }
    double go(double a, double b, double fa, double fm, double fb, double whole, double tol,
              int depth) const {
      const double m = 0.5 * (a + b);
      const double lm = 0.5 * (a + m);
      const double rm = 0.5 * (m + b);
      const double flm = f(lm);
      const double frm = f(rm);
      const double left = simpson(fa, flm, fm, m - a);
      const double right = simpson(fm, frm, fb, b - m);
      const double delta = left + right - whole;
      if (depth >= 48 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
      return go(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
             go(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
  };
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  const double whole = Recursor::simpson(fa, fm, fb, b - a);
  return Recursor{f}.go(a, b, fa, fm, fb, whole, abs_tol, 0);
}

}  // namespace charflow
