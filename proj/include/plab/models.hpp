#pragma once

#include <functional>
#include <memory>
#include <string>

#include "plab/grid.hpp"
#include "plab/stepper.hpp"
#include "plab/tension.hpp"

namespace plab {

enum class ModelTag {
  mcf_graph,
  nonlocal_mcf,
  peskin2d,
  muskat_st,
  surface_diffusion_axi,
  thinfilm_exp,
  heat,
  varcoef_heat,
};

ModelTag parse_model_tag(const std::string& s);
std::string to_string(ModelTag tag);

struct ModelSpec {
  ModelTag tag = ModelTag::heat;
  double a = 0.5;       ///< nonlocal MCF exponent
  double rho0 = 0.0;    ///< Muskat gravity parameter
  double hbar0 = 2.0;   ///< surface diffusion reference radius
  double s = 2.0;       ///< heat order
  double theta_cap = 1e3;
  int fmc_periods = 8;
  TensionLaw tension = TensionLaw::hookean();

  double order_s() const;
};

/// Builds the model; `phi` is the frozen reference (empty field means φ = 0).
std::unique_ptr<SplitModel> make_model(const ModelSpec& spec, const PeriodicField& phi = {});

/// Gaussian mollification with standard deviation `cells` grid spacings.
PeriodicField mollify(const PeriodicField& f, double cells);

// Right-hand sides of the individual equations (all 1D, [0, 2π)).

/// Graph MCF, f_xx/(1 + f_x²).
PeriodicField mcf_rhs(const PeriodicField& f);
/// Frozen MCF symbol |ξ|²/(1 + φ_x²) at each grid point (rows: points).
double mcf_symbol(double phi_x, double xi);

/// -√(1 + u_x²) H[u].
PeriodicField nonlocal_mcf_rhs(const PeriodicField& u, double a, int periods = 8);

/// ∂_t h = (1/h)(h/⟨h_x⟩ (𝓗(h))_x)_x with 𝓗(h) = 1/(h⟨h_x⟩) - h_xx/⟨h_x⟩³.
PeriodicField surface_diffusion_rhs(const PeriodicField& h, bool dealias_products = false);

/// ∂_x²(e^{-∂_x² u}).
PeriodicField thinfilm_rhs(const PeriodicField& u, bool dealias_products = false);

/// Θ of the contour (well-stretched constant).
double theta_monitor(const PeriodicField& x);
/// Enclosed (signed) area ½∮(x dy - y dx), spectral.
double enclosed_area(const PeriodicField& x);
/// L² distance from the contour to the stationary set a₁ + a₂e^{ix}.
double circle_distance(const PeriodicField& x);

/// Coefficient of the variable-coefficient heat model, 1.25 + 0.75 sin x ∈ [0.5, 2].
double varcoef_heat_coefficient(double x);

}  // namespace plab
