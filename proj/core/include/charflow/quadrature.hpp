#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace charflow {

/// 3-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 5.
template <typename F>
double gauss3(F&& f, double a, double b) {
  // Nodes/weights on [-1, 1].
  constexpr double n = 0.7745966692414834;  // sqrt(3/5)
  constexpr double w0 = 0.8888888888888888;
  constexpr double w1 = 0.5555555555555556;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  return half * (w0 * f(mid) + w1 * (f(mid - half * n) + f(mid + half * n)));
}

/// 7-point Gauss-Legendre rule on [a, b]; exact to degree 13. Used for
/// non-polynomial integrands (source-term residuals).
template <typename F>
double gauss7(F&& f, double a, double b) {
  constexpr std::array<double, 7> nodes = {
      -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
      0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
  constexpr std::array<double, 7> weights = {
      0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
      0.3818300505051189, 0.2797053914892766, 0.1294849661688697};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
  return half * sum;
}

/// Adaptive Simpson quadrature with an absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol);

}  // namespace charflow
