#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "plab/grid.hpp"

namespace plab {

/// Periodic kernel of e^{-tΛ^s}: samples of (1/L) Σ_n e^{-t|ξ_n|^s} e^{iξ_n x}, so ∫K dx = 1.
PeriodicField fractional_heat_kernel(double t, double s, std::size_t n, double length = kTwoPi);

/// Frequency-side symbol A(t, ξ) ∈ R^{N×N}, symmetric, with A ⪰ c0 |ξ|^s Id.
struct FrozenSymbol {
  double s = 2.0;
  double c0 = 1.0;
  int dim = 1;
  std::function<Eigen::MatrixXd(double t, double xi)> eval;
  double bound_m = 0.0;  ///< optional upper constant, 0 if unknown
};

/// Raised when a symbol fails the ellipticity probe.
class EllipticityError : public std::invalid_argument {
 public:
  EllipticityError(const std::string& what, double t, double xi, double min_eig)
      : std::invalid_argument(what), t(t), xi(xi), min_eig(min_eig) {}
  double t;
  double xi;
  double min_eig;
};

/// Frozen kernel on a (τ, ξ) grid.
///
/// forward[j][m] holds 𝒦̂(σ_j, ξ_m) solving ∂_σ𝒦̂ + 𝒦̂ A(t - σ, ξ) = 0, 𝒦̂(0) = Id,
/// with σ_j = j·t/tau_steps. The adjoint kernel is K̂(t, τ, ξ) = 𝒦̂(t - τ, ξ).
struct FrozenKernelHat {
  double t_final = 0.0;
  std::vector<double> sigma;
  std::vector<double> xi;
  std::vector<std::vector<Eigen::MatrixXd>> forward;
  int substeps = 0;  ///< RK4 substeps per output interval actually used
  FrozenSymbol symbol;

  /// K̂(t, τ_j, ξ_m) with τ_j = t - σ_j; identity at τ = t.
  const Eigen::MatrixXd& adjoint(std::size_t tau_index, std::size_t xi_index) const;
  /// max over the grid of ‖𝒦̂(σ,ξ)‖_F / (√N e^{-c0 σ |ξ|^s}).
  double max_bound_ratio() const;
};

/// Probes ellipticity on the (t, ξ) grid; throws EllipticityError at the first violation.
void check_ellipticity(const FrozenSymbol& symbol, double t_final, const std::vector<double>& xi,
                       int tau_steps);

FrozenKernelHat frozen_kernel_hat(const FrozenSymbol& symbol, double t_final,
                                  const std::vector<double>& xi_grid, int tau_steps);

/// K_b(x, z) = c_d |z| / ((x·b + z)² + |x|²)^{(d+1)/2}, c_d = Γ((d+1)/2) / π^{(d+1)/2}.
struct PoissonAnisoKernel {
  int d = 1;
  std::array<double, 2> b{0.0, 0.0};

  static PoissonAnisoKernel one_d(double b) { return {1, {b, 0.0}}; }
  static PoissonAnisoKernel two_d(double b1, double b2) { return {2, {b1, b2}}; }

  double normalization() const;
  double eval(std::array<double, 2> x, double z) const;
  double eval(double x, double z) const { return eval({x, 0.0}, z); }
};

/// Poisson kernel value; same as kernel.eval.
double poisson_aniso_eval(const PoissonAnisoKernel& kernel, std::array<double, 2> x, double z);

/// ∫_{R^d} K_b(x, z) dx by tangent-mapped adaptive quadrature (polar coordinates when d = 2).
double poisson_aniso_mass(const PoissonAnisoKernel& kernel, double z, double tol = 1e-9);

/// Dirichlet heat kernel of the half-space by images:
/// G(t, x' , x_d - y_d) - G(t, x', x_d + y_d) with the free kernel (4πt)^{-d/2} e^{-|x|²/4t}.
/// d = x_parallel.size() + 1.
double halfspace_heat_kernel(double t, const std::vector<double>& x_parallel, double x_d,
                             double y_d);

/// Linear rate of the axisymmetric surface-diffusion model, A(n) = n⁴ - n²/h̄0².
double sd_linear_rate(double n, double hbar0);

/// K_{≠0}(t, x) = (1/2π) Σ_{0<|n|≤N/2} e^{-A(n)t} e^{inx} on [0, 2π).
PeriodicField periodic_sd_kernel(double t, double hbar0, std::size_t n);

}  // namespace plab
