#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace plab {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Thrown when an argument violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniformly sampled real field on the 1D or 2D torus [0, L)^dims.
///
/// Samples are stored component-major: component c occupies
/// [c * points(), (c + 1) * points()). In 2D the point index is iy * n + ix.
class PeriodicField {
 public:
  PeriodicField() = default;
  PeriodicField(std::size_t n, double length = kTwoPi, int components = 1, int dims = 1);

  static PeriodicField from_function(std::size_t n, const std::function<double(double)>& f,
                                     double length = kTwoPi);
  /// Planar curve x -> (f1(x), f2(x)).
  static PeriodicField from_curve(std::size_t n, const std::function<double(double)>& f1,
                                  const std::function<double(double)>& f2, double length = kTwoPi);
  static PeriodicField from_function_2d(std::size_t n,
                                        const std::function<double(double, double)>& f,
                                        double length = kTwoPi);

  std::size_t n() const { return n_; }
  int dims() const { return dims_; }
  int components() const { return components_; }
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  std::size_t points() const { return dims_ == 1 ? n_ : n_ * n_; }
  double x(std::size_t i) const { return spacing() * static_cast<double>(i); }

  std::span<double> component(int c);
  std::span<const double> component(int c) const;
  std::span<double> samples() { return samples_; }
  std::span<const double> samples() const { return samples_; }

  double& operator[](std::size_t i) { return samples_[i]; }
  double operator[](std::size_t i) const { return samples_[i]; }

  /// Same grid metadata (n, L, dims, components).
  bool same_layout(const PeriodicField& other) const;
  bool all_finite() const;

  PeriodicField& operator+=(const PeriodicField& o);
  PeriodicField& operator-=(const PeriodicField& o);
  PeriodicField& operator*=(double s);

 private:
  std::size_t n_ = 0;
  double length_ = kTwoPi;
  int components_ = 1;
  int dims_ = 1;
  std::vector<double> samples_;
};

PeriodicField operator+(PeriodicField a, const PeriodicField& b);
PeriodicField operator-(PeriodicField a, const PeriodicField& b);
PeriodicField operator*(double s, PeriodicField a);

/// Single-component view of a field (copy).
PeriodicField extract_component(const PeriodicField& f, int c);

/// Fourier modes of a real field, FFT ordering (0, 1, ..., N/2-1, -N/2, ..., -1),
/// per component. Forward transform is unnormalized, the inverse carries 1/N^dims.
struct SpectralCoeffs {
  std::size_t n = 0;
  int dims = 1;
  int components = 1;
  double length = kTwoPi;
  std::vector<cplx> modes;

  /// Mode with signed integer frequency k in [-N/2, N/2).
  cplx& mode(int k, int c = 0);
  cplx mode(int k, int c = 0) const;
  cplx& mode2(int kx, int ky, int c = 0);
  cplx mode2(int kx, int ky, int c = 0) const;
  std::size_t points() const { return dims == 1 ? n : n * n; }
};

/// Signed integer frequency stored at FFT slot i.
int frequency_index(std::size_t i, std::size_t n);
/// Physical wavenumber of FFT slot i: frequency * 2π / L.
double wavenumber(std::size_t i, std::size_t n, double length);

void require_power_of_two(std::size_t n);

SpectralCoeffs to_spectral(const PeriodicField& field);
PeriodicField to_physical(const SpectralCoeffs& coeffs);

/// Applies a Fourier multiplier m(ξ) (ξ physical wavenumber) to every component of a 1D field.
PeriodicField apply_multiplier(const PeriodicField& field, const std::function<cplx(double)>& m);
/// 2D variant, m(ξx, ξy).
PeriodicField apply_multiplier_2d(const PeriodicField& field,
                                  const std::function<cplx(double, double)>& m);

/// Λ^a = (-Δ)^{a/2}: multiplies each mode by |ξ|^a, annihilates the mean.
PeriodicField fractional_laplacian(const PeriodicField& field, double a);

/// Hilbert transform on the torus, Hf(x) = (1/2π) P.V.∫ f(x-α) cot(α/2) dα.
/// Realized as the multiplier -i·sign(n); the Nyquist mode is dropped.
PeriodicField hilbert_transform(const PeriodicField& field);

/// Spectral derivative of the given order (1D). Odd orders drop the Nyquist mode.
PeriodicField derivative(const PeriodicField& field, int order = 1);

/// Zeroes modes with |n| > N/3 (2/3 rule).
PeriodicField dealias(const PeriodicField& field);

enum class DifferenceKind {
  plain,      ///< δ_α f(x) = f(x) - f(x-α)
  quotient,   ///< Δ_α f(x) = δ_α f(x) / α
  symmetric,  ///< 𝒪_α f(x) = δ_α δ_{-α} f(x) / |α| = (2f(x) - f(x-α) - f(x+α)) / |α|
};

/// Finite difference with a shift of `shift_cells` grid spacings (may be negative).
PeriodicField finite_difference(const PeriodicField& field, int shift_cells, DifferenceKind kind);
/// Same, with the shift given as a distance; it must be a multiple of the grid spacing.
PeriodicField finite_difference(const PeriodicField& field, double alpha, DifferenceKind kind);

struct HolderEstimate {
  int k = 0;
  double kappa = 0.5;
  double value = 0.0;
  std::vector<double> scales_used;
  std::vector<double> per_scale;  ///< ‖δ_h ∇^k u‖∞ / h^κ for each scale
  bool under_resolved = false;    ///< spectral tail of ∇^k u above threshold
  double tail_fraction = 0.0;
};

/// Dyadic-shift surrogate of the Ċ^{k+κ} seminorm:
/// max over h ∈ {L/N, 2L/N, ..., L/4} of ‖δ_h ∇^k u‖∞ / h^κ. 1D, all components.
HolderEstimate holder_seminorm(const PeriodicField& field, int k, double kappa);

struct FieldNorms {
  double l2 = 0.0;
  double linf = 0.0;
  double mean = 0.0;
};

/// Trapezoidal L² (summed over components), max |sample|, and grid mean (component 0).
FieldNorms norms(const PeriodicField& field);

/// ∫ |f| dx by the periodic trapezoidal rule (component 0).
double l1_norm(const PeriodicField& field);

}  // namespace plab
