#include "plab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace plab {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double tol,
                           unsigned max_depth) {
  using boost::math::quadrature::gauss_kronrod;
  QuadratureResult r;
  double l1 = 0.0;
  // work on [0, 1]: boost's error floor is absolute, so short intervals would never converge
  const double w = b - a;
  auto g = [&](double u) { return f(a + w * u) * w; };
  r.value = gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, max_depth, tol, &r.error, &l1);
  if (!std::isfinite(r.value))
    throw QuadratureError("non-finite quadrature result on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]",
                          r.value, r.error);
  if (r.error > 100.0 * tol * std::max(l1, 1e-300) && r.error > 1e-14)
    throw QuadratureError("quadrature did not converge (error " + std::to_string(r.error) + ")",
                          r.value, r.error);
  return r;
}

QuadratureResult integrate_half_line(const std::function<double(double)>& f, double scale,
                                     double tol) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  auto mapped = [&](double u) {
    if (u >= half_pi) return 0.0;
    const double c = std::cos(u);
    return f(scale * std::tan(u)) * scale / (c * c);
  };
  return integrate(mapped, 0.0, half_pi, tol);
}

QuadratureResult integrate_line(const std::function<double(double)>& f, double center,
                                double scale, double tol) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  auto mapped = [&](double u) {
    if (std::abs(u) >= half_pi) return 0.0;
    const double c = std::cos(u);
    return f(center + scale * std::tan(u)) * scale / (c * c);
  };
  // split at the center so a peak there sits on a panel edge
  auto left = integrate(mapped, -half_pi, 0.0, tol);
  auto right = integrate(mapped, 0.0, half_pi, tol);
  return {left.value + right.value, left.error + right.error};
}

double oscillatory_radial_integral(double k, int periods, double tol) {
  if (k < 0.0) k = -k;
  if (k == 0.0) return 0.0;
  const double period = 2.0 * std::numbers::pi / k;
  auto g = [k](double r) {
    if (r < 1e-4 / k) return 0.5 * k * k * (1.0 - k * k * r * r / 12.0);
    const double s = std::sin(0.5 * k * r);
    return 2.0 * s * s / (r * r);
  };
  double sum = 0.0;
  for (int m = 0; m < periods; ++m) sum += integrate(g, m * period, (m + 1) * period, tol).value;
  const double p = periods * period;
  return sum + 1.0 / p - 2.0 / (k * k * p * p * p);
}

}  // namespace plab
