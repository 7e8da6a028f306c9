#include "plab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "plab/quadrature.hpp"

namespace plab {

using std::numbers::pi;

PeriodicField fractional_heat_kernel(double t, double s, std::size_t n, double length) {
  if (!(t > 0.0)) throw PreconditionError("heat kernel requires t > 0");
  if (!(s > 0.0)) throw PreconditionError("heat kernel requires s > 0");
  require_power_of_two(n);
  SpectralCoeffs c;
  c.n = n;
  c.length = length;
  c.modes.resize(n);
  const double scale = static_cast<double>(n) / length;
  for (std::size_t i = 0; i < n; ++i)
    c.modes[i] = scale * std::exp(-t * std::pow(std::abs(wavenumber(i, n, length)), s));
  return to_physical(c);
}

// ---------------------------------------------------------------------------
// Frozen kernel

const Eigen::MatrixXd& FrozenKernelHat::adjoint(std::size_t tau_index, std::size_t xi_index) const {
  return forward.at(sigma.size() - 1 - tau_index).at(xi_index);
}

double FrozenKernelHat::max_bound_ratio() const {
  double worst = 0.0;
  const double root_n = std::sqrt(static_cast<double>(symbol.dim));
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    for (std::size_t m = 0; m < xi.size(); ++m) {
      const double bound =
          root_n * std::exp(-symbol.c0 * sigma[j] * std::pow(std::abs(xi[m]), symbol.s));
      const double norm = forward[j][m].norm();
      if (bound > 0.0) worst = std::max(worst, norm / bound);
    }
  }
  return worst;
}

void check_ellipticity(const FrozenSymbol& symbol, double t_final, const std::vector<double>& xi,
                       int tau_steps) {
  for (int j = 0; j <= tau_steps; ++j) {
    const double t = t_final * j / tau_steps;
    for (double k : xi) {
      const Eigen::MatrixXd a = symbol.eval(t, k);
      if (a.rows() != symbol.dim || a.cols() != symbol.dim)
        throw PreconditionError("symbol returned a matrix of the wrong size");
      const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
      const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym,
                                                                            Eigen::EigenvaluesOnly)
                                 .eigenvalues()
                                 .minCoeff();
      const double floor = symbol.c0 * std::pow(std::abs(k), symbol.s);
      if (min_eig < floor * (1.0 - 1e-12) - 1e-300) {
        std::ostringstream msg;
        msg << "symbol not elliptic at t=" << t << ", xi=" << k << ": min eigenvalue " << min_eig
            << " < c0|xi|^s = " << floor;
        throw EllipticityError(msg.str(), t, k, min_eig);
      }
    }
  }
}

namespace {

// Integrates the forward ODE for one ξ over [0, t] with `sub` RK4 steps per output interval.
std::vector<Eigen::MatrixXd> integrate_forward(const FrozenSymbol& sym, double t_final, double xi,
                                               int tau_steps, int sub) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(tau_steps) + 1);
  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(sym.dim, sym.dim);
  out.push_back(k);
  const double h = t_final / (static_cast<double>(tau_steps) * sub);
  // 𝒦̂' = -𝒦̂ A(t - σ)
  auto rhs = [&](double sigma, const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
    return -m * sym.eval(t_final - sigma, xi);
  };
  double sigma = 0.0;
  for (int j = 0; j < tau_steps; ++j) {
    for (int q = 0; q < sub; ++q) {
      const Eigen::MatrixXd k1 = rhs(sigma, k);
      const Eigen::MatrixXd k2 = rhs(sigma + 0.5 * h, k + 0.5 * h * k1);
      const Eigen::MatrixXd k3 = rhs(sigma + 0.5 * h, k + 0.5 * h * k2);
      const Eigen::MatrixXd k4 = rhs(sigma + h, k + h * k3);
      k += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      sigma += h;
    }
    out.push_back(k);
  }
  return out;
}

}  // namespace

FrozenKernelHat frozen_kernel_hat(const FrozenSymbol& symbol, double t_final,
                                  const std::vector<double>& xi_grid, int tau_steps) {
  if (tau_steps < 16) throw PreconditionError("tau_steps must be at least 16");
  if (!(t_final > 0.0)) throw PreconditionError("t_final must be positive");
  if (!(symbol.c0 > 0.0) || !(symbol.s > 0.0) || symbol.dim < 1 || !symbol.eval)
    throw PreconditionError("invalid frozen symbol");
  check_ellipticity(symbol, t_final, xi_grid, tau_steps);

  // Largest spectral radius over the probe grid sets the initial substep count.
  double lambda_max = 0.0;
  for (int j = 0; j <= tau_steps; ++j)
    for (double k : xi_grid)
      lambda_max = std::max(lambda_max, symbol.eval(t_final * j / tau_steps, k).norm());
  const double interval = t_final / tau_steps;
  int sub = std::max(1, static_cast<int>(std::ceil(lambda_max * interval / 0.01)));

  FrozenKernelHat hat;
  hat.t_final = t_final;
  hat.xi = xi_grid;
  hat.symbol = symbol;
  for (int j = 0; j <= tau_steps; ++j) hat.sigma.push_back(t_final * j / tau_steps);

  auto run = [&](int substeps) {
    std::vector<std::vector<Eigen::MatrixXd>> by_xi;
    for (double k : xi_grid) by_xi.push_back(integrate_forward(symbol, t_final, k, tau_steps, substeps));
    return by_xi;
  };
  auto coarse = run(sub);
  for (int attempt = 0; attempt < 6; ++attempt) {
    auto fine = run(2 * sub);
    double change = 0.0;
    for (std::size_t m = 0; m < xi_grid.size(); ++m)
      for (int j = 0; j <= tau_steps; ++j)
        change = std::max(change, (fine[m][static_cast<std::size_t>(j)] -
                                   coarse[m][static_cast<std::size_t>(j)]).norm());
    coarse = std::move(fine);
    sub *= 2;
    if (change < 1e-9) break;
  }
  hat.substeps = sub;
  hat.forward.assign(hat.sigma.size(), std::vector<Eigen::MatrixXd>(xi_grid.size()));
  for (std::size_t m = 0; m < xi_grid.size(); ++m)
    for (std::size_t j = 0; j < hat.sigma.size(); ++j) hat.forward[j][m] = coarse[m][j];
  return hat;
}

// ---------------------------------------------------------------------------
// Anisotropic Poisson kernel

double PoissonAnisoKernel::normalization() const {
  return std::tgamma(0.5 * (d + 1)) / std::pow(pi, 0.5 * (d + 1));
}

double PoissonAnisoKernel::eval(std::array<double, 2> x, double z) const {
  if (z == 0.0) throw PreconditionError("Poisson kernel is singular at z = 0");
  if (d != 1 && d != 2) throw PreconditionError("Poisson kernel supports d = 1, 2");
  double xb = x[0] * b[0];
  double xx = x[0] * x[0];
  if (d == 2) {
    xb += x[1] * b[1];
    xx += x[1] * x[1];
  }
  const double q = (xb + z) * (xb + z) + xx;
  return normalization() * std::abs(z) / std::pow(q, 0.5 * (d + 1));
}

double poisson_aniso_eval(const PoissonAnisoKernel& kernel, std::array<double, 2> x, double z) {
  return kernel.eval(x, z);
}

double poisson_aniso_mass(const PoissonAnisoKernel& kernel, double z, double tol) {
  if (z == 0.0) throw PreconditionError("Poisson kernel mass undefined at z = 0");
  const double cd = kernel.normalization();
  const double az = std::abs(z);
  if (kernel.d == 1) {
    const double b = kernel.b[0];
    const double center = -b * z / (1.0 + b * b);
    const double scale = az / (1.0 + b * b);
    return integrate_line([&](double x) { return kernel.eval(x, z); }, center, scale, tol).value;
  }
  if (kernel.d != 2) throw PreconditionError("Poisson kernel supports d = 1, 2");
  // polar coordinates: ∫ dθ ∫ r dr c_2 |z| / ((rβ + z)² + r²)^{3/2}, β = b·θ̂
  auto angular = [&](double theta) {
    const double beta = kernel.b[0] * std::cos(theta) + kernel.b[1] * std::sin(theta);
    auto radial = [&](double r) {
      const double q = (r * beta + z) * (r * beta + z) + r * r;
      return r * cd * az / (q * std::sqrt(q));
    };
    return integrate_half_line(radial, az / (1.0 + beta * beta), 0.1 * tol).value;
  };
  return integrate(angular, 0.0, 2.0 * pi, tol).value;
}

double halfspace_heat_kernel(double t, const std::vector<double>& x_parallel, double x_d,
                             double y_d) {
  if (!(t > 0.0)) throw PreconditionError("half-space kernel requires t > 0");
  if (x_d < 0.0 || y_d < 0.0) throw PreconditionError("half-space points need x_d, y_d >= 0");
  const double d = static_cast<double>(x_parallel.size() + 1);
  double par = 0.0;
  for (double v : x_parallel) par += v * v;
  const double pre = std::pow(4.0 * pi * t, -0.5 * d) * std::exp(-par / (4.0 * t));
  const double minus = x_d - y_d;
  const double plus = x_d + y_d;
  // e^{-a} - e^{-b} = e^{-a}(1 - e^{-(b-a)}) keeps relative accuracy near the wall
  const double a = minus * minus / (4.0 * t);
  const double gap = (plus * plus - minus * minus) / (4.0 * t);
  return pre * std::exp(-a) * -std::expm1(-gap);
}

double sd_linear_rate(double n, double hbar0) {
  return n * n * n * n - n * n / (hbar0 * hbar0);
}

PeriodicField periodic_sd_kernel(double t, double hbar0, std::size_t n) {
  if (!(hbar0 > 1.0)) throw PreconditionError("surface-diffusion kernel requires hbar0 > 1");
  if (!(t > 0.0)) throw PreconditionError("surface-diffusion kernel requires t > 0");
  require_power_of_two(n);
  SpectralCoeffs c;
  c.n = n;
  c.length = kTwoPi;
  c.modes.assign(n, 0.0);
  const double scale = static_cast<double>(n) / kTwoPi;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = frequency_index(i, n);
    if (k == 0) continue;
    double w = std::exp(-sd_linear_rate(k, hbar0) * t);
    // the Nyquist slot stands for both n = ±N/2 on the grid
    if (k == -static_cast<int>(n / 2)) w *= 2.0;
    c.modes[i] = scale * w;
  }
  return to_physical(c);
}

}  // namespace plab
