#include "plab/nonlocal_ops.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "plab/quadrature.hpp"

namespace plab {

using std::numbers::pi;

namespace {

void require_torus(const PeriodicField& f, const char* who) {
  if (f.dims() != 1) throw PreconditionError(std::string(who) + " expects a 1D field");
  if (std::abs(f.length() - kTwoPi) > 1e-12)
    throw PreconditionError(std::string(who) + " quadrature nodes assume the domain [0, 2π)");
}

inline std::size_t wrap(std::size_t i, std::ptrdiff_t shift, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  auto k = (static_cast<std::ptrdiff_t>(i) + shift) % m;
  if (k < 0) k += m;
  return static_cast<std::size_t>(k);
}

// Value at α = 0 of an even smooth function sampled at h, 2h, 3h (polynomial in α²).
inline double extrapolate_even(double g1, double g2, double g3) {
  return 1.5 * g1 - 0.6 * g2 + 0.1 * g3;
}

double angular_integral(const std::function<double(double)>& f, double split) {
  // integrate over one full turn with panel edges at split and split + π
  double total = 0.0;
  for (int q = 0; q < 2; ++q) {
    const double lo = split + q * pi;
    total += integrate(f, lo, lo + pi, 1e-11).value;
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// Normalizing constant of the anisotropic (1 - cos) integral

double lemz0_constant(int d, int periods) {
  if (d == 1) return 1.0 / (2.0 * oscillatory_radial_integral(1.0, periods));
  if (d == 2) {
    auto f = [periods](double theta) {
      return oscillatory_radial_integral(std::abs(std::cos(theta)), periods);
    };
    return 1.0 / angular_integral(f, 0.5 * pi);
  }
  throw PreconditionError("lemz0_constant supports d = 1, 2");
}

double lemz0_identity_lhs(int d, std::array<double, 2> b, std::array<double, 2> e, int periods) {
  const double c = lemz0_constant(d, periods);
  if (d == 1) {
    return c * 2.0 * oscillatory_radial_integral(std::abs(e[0]), periods) / (1.0 + b[0] * b[0]);
  }
  if (d != 2) throw PreconditionError("lemz0 identity supports d = 1, 2");
  auto f = [&](double theta) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double beta = b[0] * ct + b[1] * st;
    const double k = std::abs(e[0] * ct + e[1] * st);
    return oscillatory_radial_integral(k, periods) / std::pow(1.0 + beta * beta, 1.5);
  };
  // e·θ̂ vanishes at θ_e ± π/2
  const double theta_e = std::atan2(e[1], e[0]);
  return c * angular_integral(f, theta_e + 0.5 * pi);
}

double lemz0_identity_rhs(int d, std::array<double, 2> b, std::array<double, 2> e) {
  double bb = b[0] * b[0];
  double be = b[0] * e[0];
  if (d == 2) {
    bb += b[1] * b[1];
    be += b[1] * e[1];
  }
  const double jb = 1.0 + bb;
  return std::sqrt(jb - be * be) / jb;
}

// ---------------------------------------------------------------------------
// Dirichlet–Neumann operator

std::complex<double> DriftedSqrtSymbol::operator()(std::array<double, 2> xi) const {
  double bxi = b[0] * xi[0];
  double bb = b[0] * b[0];
  double xx = xi[0] * xi[0];
  if (d == 2) {
    bxi += b[1] * xi[1];
    bb += b[1] * b[1];
    xx += xi[1] * xi[1];
  }
  const double jb = 1.0 + bb;
  const double root = std::sqrt(std::max(0.0, jb * xx - bxi * bxi));
  return {sign * root / jb, bxi / jb};
}

PeriodicField dirichlet_neumann_op(const PeriodicField& field, const DriftedSqrtSymbol& symbol,
                                   OperatorBackend backend) {
  if (field.components() != 1) throw PreconditionError("𝔏 acts on scalar fields");
  if (symbol.sign != 1 && symbol.sign != -1) throw PreconditionError("sign must be ±1");
  if (backend == OperatorBackend::fourier) {
    if (field.dims() == 1) {
      if (symbol.d != 1) throw PreconditionError("symbol dimension does not match the field");
      return apply_multiplier(field, [&](double k) { return symbol(k); });
    }
    if (symbol.d != 2) throw PreconditionError("symbol dimension does not match the field");
    return apply_multiplier_2d(field, [&](double kx, double ky) { return symbol({kx, ky}); });
  }

  require_torus(field, "quadrature 𝔏");
  if (symbol.d != 1) throw PreconditionError("quadrature 𝔏 is implemented for d = 1");
  static const double c1 = lemz0_constant(1);
  const double b = symbol.b[0];
  const double jb = 1.0 + b * b;
  const std::size_t n = field.n();
  const double h = field.spacing();
  auto f = field.component(0);

  // b f' by the 8th-order central stencil
  static constexpr double w[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};

  std::vector<double> inv_sin2(n / 2 + 1);
  for (std::size_t j = 1; j <= n / 2; ++j) {
    const double s = std::sin(0.5 * static_cast<double>(j) * h);
    inv_sin2[j] = 1.0 / (4.0 * s * s);
  }

  PeriodicField out(n, field.length());
  for (std::size_t i = 0; i < n; ++i) {
    double drift = 0.0;
    for (int m = 1; m <= 4; ++m)
      drift += w[m - 1] * (f[wrap(i, m, n)] - f[wrap(i, -m, n)]);
    drift /= h;
    // ∫_R δ_α f/α² dα = ∫_{-π}^{π} δ_α f /(4 sin²(α/2)) dα
    auto pair = [&](std::size_t j) {
      const auto sj = static_cast<std::ptrdiff_t>(j);
      return (2.0 * f[i] - f[wrap(i, -sj, n)] - f[wrap(i, sj, n)]) * inv_sin2[j];
    };
    const double pv = paired_trapezoid(n, pair);
    out[i] = b * drift / jb + symbol.sign * c1 * pv / jb;
  }
  // the P.V. integral annihilates constants; remove the round-off mean of the drift part
  double mean = 0.0;
  for (double v : out.samples()) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : out.samples()) v -= mean;
  return out;
}

double dirichlet_neumann_crosscheck(const PeriodicField& field, const DriftedSqrtSymbol& symbol,
                                    double tol) {
  auto a = dirichlet_neumann_op(field, symbol, OperatorBackend::fourier);
  auto q = dirichlet_neumann_op(field, symbol, OperatorBackend::quadrature);
  double gap = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) {
    gap = std::max(gap, std::abs(a[i] - q[i]));
    scale = std::max(scale, std::abs(a[i]));
  }
  const double rel = scale > 0.0 ? gap / scale : gap;
  if (rel > 10.0 * tol) {
    std::ostringstream msg;
    msg << "Dirichlet–Neumann backends disagree: relative L∞ gap " << rel;
    throw BackendDisagreement(msg.str(), std::move(a), std::move(q), rel);
  }
  return rel;
}

double paired_trapezoid(std::size_t n, const std::function<double(std::size_t)>& pair) {
  const std::size_t half = n / 2;
  const double h = kTwoPi / static_cast<double>(n);
  const double p1 = pair(1);
  const double p2 = pair(2);
  const double p3 = pair(3);
  double sum = 0.5 * extrapolate_even(p1, p2, p3) + p1 + p2 + p3;
  for (std::size_t j = 4; j < half; ++j) sum += pair(j);
  sum += 0.5 * pair(half);
  return h * sum;
}

// ---------------------------------------------------------------------------
// Nonlocal mean curvature

double gcal(double rho, int d, double a, double tol) {
  if (rho == 0.0) return 0.0;
  const double p = 0.5 * (d + a);
  auto f = [p](double t) { return std::pow(1.0 + t * t, -p); };
  const double r = std::abs(rho);
  double v = integrate(f, 0.0, std::min(r, 1.0), tol, 15).value;
  if (r > 1.0) {
    // t = e^u on [1, r]
    auto g = [p](double u) { return std::exp(u) * std::pow(1.0 + std::exp(2.0 * u), -p); };
    v += integrate(g, 0.0, std::log(r), tol, 15).value;
  }
  v *= 2.0;
  return rho > 0.0 ? v : -v;
}

double gcal_fast(double rho, int d, double a) {
  const double p = 0.5 * (d + a);
  const double r = std::abs(rho);
  double v;
  if (r < 1e-2) {
    const double r2 = r * r;
    v = 2.0 * r *
        (1.0 - p * r2 / 3.0 + p * (p + 1.0) * r2 * r2 / 10.0 -
         p * (p + 1.0) * (p + 2.0) * r2 * r2 * r2 / 42.0);
  } else {
    const double x = r * r / (1.0 + r * r);
    v = boost::math::beta(0.5, p - 0.5, x);
  }
  return rho < 0.0 ? -v : v;
}

namespace {

struct NavotCorrection {
  double z0;  // ζ(a)
  double z2;  // ζ(a - 2)
};

NavotCorrection navot(double a) {
  return {boost::math::zeta(a), boost::math::zeta(a - 2.0)};
}

// ∫_0^A g(α) α^{-a} dα from g(jh), j = 1..M (M h = A), g even and smooth.
double singular_trapezoid(const std::vector<double>& g, double h, double a, bool corrected,
                          const NavotCorrection& z) {
  const std::size_t m = g.size() - 1;  // g[0] unused
  double sum = 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    const double wgt = j == m ? 0.5 : 1.0;
    sum += wgt * g[j] * std::pow(static_cast<double>(j) * h, -a);
  }
  sum *= h;
  if (!corrected) return sum;
  // quadratic fit in α² through the first three nodes
  const double h2 = h * h;
  const double d1 = (g[2] - g[1]) / (3.0 * h2);
  const double d12 = (g[3] - g[2]) / (5.0 * h2);
  const double d2 = (d12 - d1) / (8.0 * h2);
  const double c0 = g[1] - d1 * h2 + 4.0 * h2 * h2 * d2;
  const double c2 = d1 - 5.0 * h2 * d2;
  return sum - z.z0 * c0 * std::pow(h, 1.0 - a) - z.z2 * c2 * std::pow(h, 3.0 - a);
}

}  // namespace

PeriodicField fractional_mean_curvature(const PeriodicField& u, double a, int d,
                                        FmcOptions options) {
  require_torus(u, "fractional_mean_curvature");
  if (u.components() != 1) throw PreconditionError("graph must be scalar");
  if (!(a > 0.0 && a < 1.0) && options.symmetrized)
    throw PreconditionError("fractional_mean_curvature requires a in (0, 1)");
  if (!options.symmetrized && a >= 1.0)
    throw PreconditionError("raw nonlocal curvature quadrature diverges for a >= 1");
  if (options.periods < 1) throw PreconditionError("periods must be positive");

  const std::size_t n = u.n();
  const double h = u.spacing();
  const std::size_t m = static_cast<std::size_t>(options.periods) * n;
  const double big_a = static_cast<double>(m) * h;
  const auto z = navot(a);
  auto s = u.component(0);
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(n);

  PeriodicField out(n, u.length());
  std::vector<double> g(m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const double alpha = static_cast<double>(j) * h;
      const auto sj = static_cast<std::ptrdiff_t>(j % n);
      const double dp = (s[i] - s[wrap(i, -sj, n)]) / alpha;
      const double dm = (s[i] - s[wrap(i, sj, n)]) / alpha;
      g[j] = (gcal_fast(dp, d, a) + gcal_fast(dm, d, a)) / alpha;
    }
    double v = singular_trapezoid(g, h, a, options.symmetrized, z);
    // far field: 𝒢(ρ) ≈ 2ρ and the oscillatory part averages out
    v += 4.0 * (s[i] - mean) * std::pow(big_a, -1.0 - a) / (1.0 + a);
    out[i] = v;
  }
  return out;
}

double fractional_mean_curvature_at(const std::function<double(double)>& u, double x, double a,
                                    int d, double h, int nodes) {
  if (!(a > 0.0 && a < 1.0)) throw PreconditionError("a must lie in (0, 1)");
  if (nodes < 4) throw PreconditionError("need at least 4 nodes");
  const auto z = navot(a);
  std::vector<double> g(static_cast<std::size_t>(nodes) + 1);
  const double ux = u(x);
  for (int j = 1; j <= nodes; ++j) {
    const double alpha = j * h;
    const double dp = (ux - u(x - alpha)) / alpha;
    const double dm = (ux - u(x + alpha)) / alpha;
    g[static_cast<std::size_t>(j)] = (gcal_fast(dp, d, a) + gcal_fast(dm, d, a)) / alpha;
  }
  return singular_trapezoid(g, h, a, true, z);
}

double fmc_linear_constant(double a) {
  if (!(a > 0.0 && a < 1.0)) throw PreconditionError("a must lie in (0, 1)");
  // 4 ∫_0^∞ (1 - cos β) β^{-2-a} dβ = 4 Γ(-1-a) sin(πa/2)
  return 4.0 * std::tgamma(-1.0 - a) * std::sin(0.5 * pi * a);
}

// ---------------------------------------------------------------------------
// Peskin

ThetaResult well_stretched_theta(const PeriodicField& x) {
  if (x.components() != 2 || x.dims() != 1) throw PreconditionError("Θ needs a planar curve");
  const std::size_t n = x.n();
  auto x1 = x.component(0);
  auto x2 = x.component(1);
  const double h = x.spacing();
  ThetaResult r;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = static_cast<double>(std::min(j - i, n - (j - i))) * h;
      const double chord = std::hypot(x1[i] - x1[j], x2[i] - x2[j]);
      const double ratio = chord > 0.0 ? dist / chord : std::numeric_limits<double>::infinity();
      if (ratio > r.theta) r = {ratio, i, j};
    }
  }
  return r;
}

namespace {

PeriodicField tension_flux(const PeriodicField& x, const PeriodicField& dx,
                           const TensionLaw& tension) {
  PeriodicField g = dx;
  const std::size_t n = x.n();
  for (std::size_t i = 0; i < n; ++i) {
    const double len = std::hypot(dx[i], dx[n + i]);
    if (!(len > 0.0)) throw PreconditionError("degenerate parametrization: X' = 0");
    const double t = tension.reduced(len);
    g[i] *= t;
    g[n + i] *= t;
  }
  return g;
}

}  // namespace

PeriodicField peskin_nonlinear(const PeriodicField& x, const TensionLaw& tension,
                               double theta_cap) {
  require_torus(x, "peskin");
  if (x.components() != 2) throw PreconditionError("Peskin needs a planar curve");
  const std::size_t n = x.n();
  const double h = x.spacing();
  const PeriodicField dx = derivative(x, 1);
  const PeriodicField g = tension_flux(x, dx, tension);
  auto x1 = x.component(0), x2 = x.component(1);
  auto p1 = dx.component(0), p2 = dx.component(1);
  auto g1 = g.component(0), g2 = g.component(1);

  std::vector<double> half_cot(n);
  for (std::size_t j = 1; j < n; ++j) half_cot[j] = 0.5 / std::tan(0.5 * static_cast<double>(j) * h);

  PeriodicField out(n, x.length(), 2);
  std::vector<double> q1(n), q2(n);
  ThetaResult worst;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) {
      const std::size_t k = wrap(i, -static_cast<std::ptrdiff_t>(j), n);
      const double d1 = x1[i] - x1[k], d2 = x2[i] - x2[k];
      const double xp1 = p1[k], xp2 = p2[k];
      const double f1 = g1[i] - g1[k], f2 = g2[i] - g2[k];
      const double dd = d1 * d1 + d2 * d2;
      const double dist = static_cast<double>(std::min(j, n - j)) * h;
      if (!(dd > 0.0) || dist / std::sqrt(dd) > theta_cap) {
        const double theta = dd > 0.0 ? dist / std::sqrt(dd) : std::numeric_limits<double>::infinity();
        std::ostringstream msg;
        msg << "well-stretched condition violated: Θ = " << theta << " between nodes " << i
            << " and " << k;
        throw WellStretchedViolation(msg.str(), theta, i, k);
      }
      const double dxp = d1 * xp1 + d2 * xp2;
      const double df = d1 * f1 + d2 * f2;
      const double xf = xp1 * f1 + xp2 * f2;
      const double c = half_cot[j];
      const double lead = dxp / dd - c;
      const double cross = 2.0 * df * dxp / (dd * dd);
      q1[j] = lead * f1 - (xp1 * df + d1 * xf) / dd + cross * d1;
      q2[j] = lead * f2 - (xp2 * df + d2 * xf) / dd + cross * d2;
    }
    auto pair1 = [&](std::size_t j) { return q1[j] + q1[n - j]; };
    auto pair2 = [&](std::size_t j) { return q2[j] + q2[n - j]; };
    // the j = n/2 node is its own mirror; paired_trapezoid halves it
    out[i] = paired_trapezoid(n, pair1) / (4.0 * pi);
    out[n + i] = paired_trapezoid(n, pair2) / (4.0 * pi);
  }
  return out;
}

PeriodicField peskin_rhs(const PeriodicField& x, const TensionLaw& tension, double theta_cap) {
  PeriodicField nl = peskin_nonlinear(x, tension, theta_cap);
  const PeriodicField g = tension_flux(x, derivative(x, 1), tension);
  PeriodicField main = hilbert_transform(g);
  main *= -0.25;
  return main + nl;
}

// ---------------------------------------------------------------------------
// Muskat with surface tension

namespace {

struct MuskatInputs {
  PeriodicField fp, fpp, w, dkappa;
};

MuskatInputs muskat_inputs(const PeriodicField& f) {
  MuskatInputs in{derivative(f, 1), derivative(f, 2), PeriodicField(f.n(), f.length()),
                  PeriodicField()};
  PeriodicField kappa(f.n(), f.length());
  for (std::size_t i = 0; i < f.n(); ++i) {
    const double jp = 1.0 + in.fp[i] * in.fp[i];
    in.w[i] = 1.0 / (jp * std::sqrt(jp));
    kappa[i] = in.fpp[i] * in.w[i];
  }
  in.dkappa = derivative(kappa, 1);
  return in;
}

}  // namespace

MuskatTerms muskat_st_terms(const PeriodicField& f) {
  require_torus(f, "muskat");
  if (f.components() != 1) throw PreconditionError("Muskat needs a scalar graph");
  const std::size_t n = f.n();
  const double h = f.spacing();
  const auto in = muskat_inputs(f);
  auto s = f.component(0);

  std::vector<double> half_cot(n / 2 + 1), sn(n / 2 + 1), cs(n / 2 + 1), inv_sin2(n / 2 + 1);
  for (std::size_t j = 1; j <= n / 2; ++j) {
    const double alpha = static_cast<double>(j) * h;
    half_cot[j] = 0.5 * std::cos(0.5 * alpha) / std::sin(0.5 * alpha);
    sn[j] = std::sin(alpha);
    cs[j] = std::cos(alpha);
    inv_sin2[j] = 0.25 / (std::sin(0.5 * alpha) * std::sin(0.5 * alpha));
  }

  MuskatTerms t{fractional_laplacian(f, 3.0), PeriodicField(n, f.length()),
                PeriodicField(n, f.length()), PeriodicField(n, f.length())};
  const PeriodicField lam = fractional_laplacian(f, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    t.main[i] *= -in.w[i];
    const double fpi = in.fp[i];
    // periodized Δ(f' - Δ)/⟨Δ⟩² /α at ±α
    auto kern = [&](std::size_t j, int sgn) {
      const std::size_t k = wrap(i, -sgn * static_cast<std::ptrdiff_t>(j), n);
      const double delta = s[i] - s[k];
      const double kp = -sgn * half_cot[j] +
                        0.5 * (sgn * sn[j] + fpi * std::sinh(delta)) / (std::cosh(delta) - cs[j]);
      return std::pair{kp, k};
    };
    auto n1_pair = [&](std::size_t j) {
      auto [kp, k] = kern(j, 1);
      auto [km, l] = kern(j, -1);
      return kp * in.dkappa[k] + km * in.dkappa[l];
    };
    auto n3_pair = [&](std::size_t j) {
      auto [kp, k] = kern(j, 1);
      auto [km, l] = kern(j, -1);
      return kp * in.fp[k] + km * in.fp[l];
    };
    auto n2_pair = [&](std::size_t j) {
      const auto sj = static_cast<std::ptrdiff_t>(j);
      const std::size_t k = wrap(i, -sj, n), l = wrap(i, sj, n);
      return (in.fpp[k] * (in.w[k] - in.w[i]) + in.fpp[l] * (in.w[l] - in.w[i])) * inv_sin2[j];
    };
    t.n1[i] = paired_trapezoid(n, n1_pair) / pi;
    t.n2[i] = -paired_trapezoid(n, n2_pair) / pi;
    t.n3[i] = -paired_trapezoid(n, n3_pair) / pi - lam[i];
  }
  return t;
}

PeriodicField muskat_st_nonlinear(const PeriodicField& f, double rho0) {
  auto t = muskat_st_terms(f);
  PeriodicField out = t.n1 + t.n2;
  if (rho0 != 0.0) out += rho0 * t.n3;
  return out;
}

PeriodicField muskat_st_rhs(const PeriodicField& f, double rho0) {
  auto t = muskat_st_terms(f);
  PeriodicField out = t.main + t.n1 + t.n2;
  if (rho0 != 0.0) out += rho0 * t.n3;
  return out;
}

PeriodicField muskat_st_rhs_kernel_form(const PeriodicField& f, double rho0) {
  require_torus(f, "muskat");
  const std::size_t n = f.n();
  const double h = f.spacing();
  const auto in = muskat_inputs(f);
  auto s = f.component(0);
  PeriodicField omega = in.dkappa;
  if (rho0 != 0.0) omega -= rho0 * in.fp;

  PeriodicField out(n, f.length());
  for (std::size_t i = 0; i < n; ++i) {
    auto side = [&](std::size_t j, int sgn) {
      const double alpha = sgn * static_cast<double>(j) * h;
      const std::size_t k = wrap(i, -sgn * static_cast<std::ptrdiff_t>(j), n);
      const double delta = s[i] - s[k];
      return 0.5 * (std::sin(alpha) + in.fp[i] * std::sinh(delta)) /
             (std::cosh(delta) - std::cos(alpha)) * omega[k];
    };
    auto pair = [&](std::size_t j) { return side(j, 1) + side(j, -1); };
    out[i] = paired_trapezoid(n, pair) / pi;
  }
  return out;
}

}  // namespace plab
