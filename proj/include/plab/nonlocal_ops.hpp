#pragma once

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include "plab/grid.hpp"
#include "plab/tension.hpp"

namespace plab {

/// c̃_d = (∫_{R^d} (1 - cos α₁)/|α|^{d+1} dα)^{-1}, d ∈ {1, 2}.
/// `periods` controls the radial oscillatory quadrature.
double lemz0_constant(int d, int periods = 200);

/// c̃_d ∫ (1 - cos(e·α)) / ((α·b)² + |α|²)^{(d+1)/2} dα for a unit vector e.
double lemz0_identity_lhs(int d, std::array<double, 2> b, std::array<double, 2> e,
                          int periods = 200);
/// √(⟨b⟩² - (b·e)²) / ⟨b⟩².
double lemz0_identity_rhs(int d, std::array<double, 2> b, std::array<double, 2> e);

/// λ^±(ξ, b) = (i b·ξ ± √(⟨b⟩²|ξ|² - (b·ξ)²)) / ⟨b⟩².
struct DriftedSqrtSymbol {
  int d = 1;
  std::array<double, 2> b{0.0, 0.0};
  int sign = +1;

  std::complex<double> operator()(std::array<double, 2> xi) const;
  std::complex<double> operator()(double xi) const { return (*this)({xi, 0.0}); }
};

enum class OperatorBackend { fourier, quadrature };

/// Raised when the two realizations of an operator disagree.
class BackendDisagreement : public std::runtime_error {
 public:
  BackendDisagreement(const std::string& what, PeriodicField fourier, PeriodicField quadrature,
                      double rel_gap)
      : std::runtime_error(what),
        fourier(std::move(fourier)),
        quadrature(std::move(quadrature)),
        rel_gap(rel_gap) {}
  PeriodicField fourier;
  PeriodicField quadrature;
  double rel_gap;
};

/// 𝔏_{±,b} f = b·∇f/⟨b⟩² ± c̃_d P.V.∫ δ_α f /⟨α̂·b⟩^{d+1} dα/|α|^{d+1}.
/// The Fourier backend handles 1D and 2D fields, the quadrature backend 1D fields on [0, 2π).
PeriodicField dirichlet_neumann_op(const PeriodicField& field, const DriftedSqrtSymbol& symbol,
                                   OperatorBackend backend = OperatorBackend::fourier);

/// Runs both backends; throws BackendDisagreement if the relative L∞ gap exceeds 10·tol.
/// Returns the relative gap.
double dirichlet_neumann_crosscheck(const PeriodicField& field, const DriftedSqrtSymbol& symbol,
                                    double tol = 1e-3);

/// 𝒢(ρ) = ∫_{-ρ}^{ρ} ⟨τ⟩^{-(d+a)} dτ by adaptive quadrature.
double gcal(double rho, int d, double a, double tol = 1e-13);
/// Same value via the incomplete beta function, sign(ρ) B_X(1/2, (d+a-1)/2), X = ρ²/(1+ρ²).
double gcal_fast(double rho, int d, double a);

struct FmcOptions {
  int periods = 8;          ///< truncation radius of the α-integral, in periods of the torus
  bool symmetrized = true;  ///< pair ±α and correct the origin; false = raw sum skipping α = 0
};

/// H[u](x) = P.V.∫_R 𝒢(Δ_α u(x)) / |α|^{d-1+a} dα with Δ_α u = (u(x) - u(x-α))/|α|,
/// for a 2π-periodic graph u (d = 2 means a curve in the plane).
PeriodicField fractional_mean_curvature(const PeriodicField& u, double a, int d = 2,
                                        FmcOptions options = {});

/// Same operator at a single point for a function on the whole line, using nodes jh, 1 ≤ j ≤ M.
double fractional_mean_curvature_at(const std::function<double(double)>& u, double x, double a,
                                    int d, double h, int nodes);

/// C_a such that H[ε cos] ≈ ε C_a cos for ε → 0: C_a = 2 ∫_R (1 - cos β)|β|^{-2-a} dβ.
double fmc_linear_constant(double a);

/// Periodic trapezoid for P.V.∫_{-π}^{π} with paired nodes: `pair(j)` returns the pair sum
/// p(jh) = q(jh) + q(-jh) for j = 1..N/2; the j = 0 term is extrapolated from j = 1, 2, 3.
double paired_trapezoid(std::size_t n, const std::function<double(std::size_t)>& pair);

/// Peskin right-hand side -¼𝓗(𝐓(|X'|)X') + 𝒩(X) for a closed curve (2 components).
PeriodicField peskin_rhs(const PeriodicField& x, const TensionLaw& tension = TensionLaw::hookean(),
                         double theta_cap = 1e6);
/// 𝒩(X) alone.
PeriodicField peskin_nonlinear(const PeriodicField& x,
                               const TensionLaw& tension = TensionLaw::hookean(),
                               double theta_cap = 1e6);

/// Raised when the well-stretched constant exceeds the configured cap.
class WellStretchedViolation : public std::runtime_error {
 public:
  WellStretchedViolation(const std::string& what, double theta, std::size_t i, std::size_t j)
      : std::runtime_error(what), theta(theta), i(i), j(j) {}
  double theta;
  std::size_t i;
  std::size_t j;
};

struct ThetaResult {
  double theta = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

/// Θ = max over node pairs of |x_i - x_j|_torus / |X(x_i) - X(x_j)|; +∞ for coincident points.
ThetaResult well_stretched_theta(const PeriodicField& x);

/// Split form of the Muskat equation with surface tension (k = 2, μ = 1, σ' = 1):
/// -Λ³f/⟨f'⟩³ + 𝖭₁ + 𝖭₂ + ρ₀𝖭₃.
PeriodicField muskat_st_rhs(const PeriodicField& f, double rho0);

struct MuskatTerms {
  PeriodicField main;  ///< -Λ³f/⟨f'⟩³
  PeriodicField n1;
  PeriodicField n2;
  PeriodicField n3;
};
MuskatTerms muskat_st_terms(const PeriodicField& f);

/// 𝖭[f] = 𝖭₁ + 𝖭₂ + ρ₀𝖭₃.
PeriodicField muskat_st_nonlinear(const PeriodicField& f, double rho0);

/// Unsplit contour form with the periodized kernel ½(sin α + f' sinh δ)/(cosh δ - cos α).
PeriodicField muskat_st_rhs_kernel_form(const PeriodicField& f, double rho0);

}  // namespace plab
