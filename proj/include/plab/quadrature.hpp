#pragma once

#include <functional>
#include <stdexcept>

namespace plab {

/// Raised when adaptive quadrature cannot reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate(estimate), error(error) {}
  double estimate;
  double error;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 31-point Gauss–Kronrod on [a, b], relative tolerance `tol`.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-10, unsigned max_depth = 20);

/// ∫_0^∞ f(r) dr via r = scale·tan(u), u ∈ [0, π/2).
QuadratureResult integrate_half_line(const std::function<double(double)>& f, double scale = 1.0,
                                     double tol = 1e-10);

/// ∫_R f(x) dx via x = center + scale·tan(u).
QuadratureResult integrate_line(const std::function<double(double)>& f, double center = 0.0,
                                double scale = 1.0, double tol = 1e-10);

/// ∫_0^∞ (1 - cos(k r)) / r² dr for k ≥ 0, equal to πk/2.
/// Integrated numerically: period-by-period Gauss–Kronrod out to `periods` periods,
/// then the asymptotic tail 1/P - 2/(k² P³) (the oscillatory part averages out).
double oscillatory_radial_integral(double k, int periods = 200, double tol = 1e-12);

}  // namespace plab
