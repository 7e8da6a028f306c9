#include "plab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace plab {

namespace {

struct FftPlans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
const FftPlans& plans_for(std::size_t n, int dims) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, int>, FftPlans> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(n, dims);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const std::size_t total = dims == 1 ? n : n * n;
  auto* in = fftw_alloc_complex(total);
  auto* out = fftw_alloc_complex(total);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  FftPlans p;
  if (dims == 1) {
    p.forward = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, flags);
  } else {
    p.forward = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), in, out, FFTW_FORWARD,
                                 flags);
    p.backward = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), in, out,
                                  FFTW_BACKWARD, flags);
  }
  fftw_free(in);
  fftw_free(out);
  return cache.emplace(key, p).first->second;
}

void execute(fftw_plan plan, const cplx* in, cplx* out) {
  // fftw_execute_dft does not modify `in` for out-of-place plans.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

std::size_t slot_of(int k, std::size_t n) {
  const auto half = static_cast<int>(n / 2);
  if (k < -half || k >= half) throw PreconditionError("frequency outside [-N/2, N/2)");
  return k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + static_cast<int>(n));
}

}  // namespace

// ---------------------------------------------------------------------------
// PeriodicField

PeriodicField::PeriodicField(std::size_t n, double length, int components, int dims)
    : n_(n), length_(length), components_(components), dims_(dims) {
  require_power_of_two(n);
  if (n < 16) throw PreconditionError("grid size must be at least 16");
  if (!(length > 0.0) || !std::isfinite(length))
    throw PreconditionError("domain length must be positive");
  if (components < 1 || components > 3) throw PreconditionError("components must be 1..3");
  if (dims != 1 && dims != 2) throw PreconditionError("dims must be 1 or 2");
  samples_.assign(points() * static_cast<std::size_t>(components), 0.0);
}

PeriodicField PeriodicField::from_function(std::size_t n, const std::function<double(double)>& f,
                                           double length) {
  PeriodicField out(n, length);
  for (std::size_t i = 0; i < n; ++i) out.samples_[i] = f(out.x(i));
  return out;
}

PeriodicField PeriodicField::from_curve(std::size_t n, const std::function<double(double)>& f1,
                                        const std::function<double(double)>& f2, double length) {
  PeriodicField out(n, length, 2);
  for (std::size_t i = 0; i < n; ++i) {
    out.samples_[i] = f1(out.x(i));
    out.samples_[n + i] = f2(out.x(i));
  }
  return out;
}

PeriodicField PeriodicField::from_function_2d(std::size_t n,
                                              const std::function<double(double, double)>& f,
                                              double length) {
  PeriodicField out(n, length, 1, 2);
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) out.samples_[iy * n + ix] = f(out.x(ix), out.x(iy));
  return out;
}

std::span<double> PeriodicField::component(int c) {
  return std::span<double>(samples_).subspan(static_cast<std::size_t>(c) * points(), points());
}

std::span<const double> PeriodicField::component(int c) const {
  return std::span<const double>(samples_).subspan(static_cast<std::size_t>(c) * points(),
                                                   points());
}

bool PeriodicField::same_layout(const PeriodicField& other) const {
  return n_ == other.n_ && dims_ == other.dims_ && components_ == other.components_ &&
         length_ == other.length_;
}

bool PeriodicField::all_finite() const {
  return std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); });
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& o) {
  if (!same_layout(o)) throw PreconditionError("field layout mismatch");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += o.samples_[i];
  return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& o) {
  if (!same_layout(o)) throw PreconditionError("field layout mismatch");
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= o.samples_[i];
  return *this;
}

PeriodicField& PeriodicField::operator*=(double s) {
  for (double& v : samples_) v *= s;
  return *this;
}

PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
PeriodicField operator*(double s, PeriodicField a) { return a *= s; }

PeriodicField extract_component(const PeriodicField& f, int c) {
  PeriodicField out(f.n(), f.length(), 1, f.dims());
  auto src = f.component(c);
  std::copy(src.begin(), src.end(), out.samples().begin());
  return out;
}

// ---------------------------------------------------------------------------
// Spectral machinery

cplx& SpectralCoeffs::mode(int k, int c) {
  return modes[static_cast<std::size_t>(c) * points() + slot_of(k, n)];
}

cplx SpectralCoeffs::mode(int k, int c) const {
  return modes[static_cast<std::size_t>(c) * points() + slot_of(k, n)];
}

cplx& SpectralCoeffs::mode2(int kx, int ky, int c) {
  return modes[static_cast<std::size_t>(c) * points() + slot_of(ky, n) * n + slot_of(kx, n)];
}

cplx SpectralCoeffs::mode2(int kx, int ky, int c) const {
  return modes[static_cast<std::size_t>(c) * points() + slot_of(ky, n) * n + slot_of(kx, n)];
}

int frequency_index(std::size_t i, std::size_t n) {
  return i < n / 2 ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(n);
}

double wavenumber(std::size_t i, std::size_t n, double length) {
  return frequency_index(i, n) * kTwoPi / length;
}

void require_power_of_two(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw PreconditionError("grid size " + std::to_string(n) + " is not a power of two");
}

SpectralCoeffs to_spectral(const PeriodicField& field) {
  require_power_of_two(field.n());
  SpectralCoeffs out;
  out.n = field.n();
  out.dims = field.dims();
  out.components = field.components();
  out.length = field.length();
  const std::size_t p = field.points();
  out.modes.resize(p * static_cast<std::size_t>(field.components()));
  std::vector<cplx> in(p);
  const auto& plans = plans_for(field.n(), field.dims());
  for (int c = 0; c < field.components(); ++c) {
    auto src = field.component(c);
    std::copy(src.begin(), src.end(), in.begin());
    execute(plans.forward, in.data(), out.modes.data() + static_cast<std::size_t>(c) * p);
  }
  return out;
}

PeriodicField to_physical(const SpectralCoeffs& coeffs) {
  PeriodicField out(coeffs.n, coeffs.length, coeffs.components, coeffs.dims);
  const std::size_t p = coeffs.points();
  std::vector<cplx> buf(p);
  const auto& plans = plans_for(coeffs.n, coeffs.dims);
  const double scale = 1.0 / static_cast<double>(p);
  for (int c = 0; c < coeffs.components; ++c) {
    execute(plans.backward, coeffs.modes.data() + static_cast<std::size_t>(c) * p, buf.data());
    auto dst = out.component(c);
    for (std::size_t i = 0; i < p; ++i) dst[i] = buf[i].real() * scale;
  }
  return out;
}

PeriodicField apply_multiplier(const PeriodicField& field, const std::function<cplx(double)>& m) {
  if (field.dims() != 1) throw PreconditionError("apply_multiplier expects a 1D field");
  auto coeffs = to_spectral(field);
  const std::size_t n = field.n();
  std::vector<cplx> symbol(n);
  for (std::size_t i = 0; i < n; ++i) symbol[i] = m(wavenumber(i, n, field.length()));
  for (int c = 0; c < field.components(); ++c)
    for (std::size_t i = 0; i < n; ++i) coeffs.modes[static_cast<std::size_t>(c) * n + i] *= symbol[i];
  return to_physical(coeffs);
}

PeriodicField apply_multiplier_2d(const PeriodicField& field,
                                  const std::function<cplx(double, double)>& m) {
  if (field.dims() != 2) throw PreconditionError("apply_multiplier_2d expects a 2D field");
  auto coeffs = to_spectral(field);
  const std::size_t n = field.n();
  const std::size_t p = field.points();
  for (std::size_t iy = 0; iy < n; ++iy) {
    const double ky = wavenumber(iy, n, field.length());
    for (std::size_t ix = 0; ix < n; ++ix) {
      const cplx s = m(wavenumber(ix, n, field.length()), ky);
      for (int c = 0; c < field.components(); ++c)
        coeffs.modes[static_cast<std::size_t>(c) * p + iy * n + ix] *= s;
    }
  }
  return to_physical(coeffs);
}

PeriodicField fractional_laplacian(const PeriodicField& field, double a) {
  if (!(a > 0.0)) throw PreconditionError("fractional_laplacian requires a > 0");
  if (field.dims() == 1)
    return apply_multiplier(field, [a](double k) { return cplx(std::pow(std::abs(k), a), 0.0); });
  return apply_multiplier_2d(field, [a](double kx, double ky) {
    return cplx(std::pow(std::hypot(kx, ky), a), 0.0);
  });
}

PeriodicField hilbert_transform(const PeriodicField& field) {
  if (field.dims() != 1) throw PreconditionError("hilbert_transform is defined for 1D fields");
  auto coeffs = to_spectral(field);
  const std::size_t n = field.n();
  for (int c = 0; c < field.components(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      const int k = frequency_index(i, n);
      cplx& v = coeffs.modes[static_cast<std::size_t>(c) * n + i];
      if (k == 0 || k == -static_cast<int>(n / 2))
        v = 0.0;
      else
        v *= cplx(0.0, k > 0 ? -1.0 : 1.0);
    }
  }
  return to_physical(coeffs);
}

PeriodicField derivative(const PeriodicField& field, int order) {
  if (field.dims() != 1) throw PreconditionError("derivative expects a 1D field");
  if (order < 0) throw PreconditionError("derivative order must be nonnegative");
  if (order == 0) return field;
  auto coeffs = to_spectral(field);
  const std::size_t n = field.n();
  for (int c = 0; c < field.components(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx& v = coeffs.modes[static_cast<std::size_t>(c) * n + i];
      if (frequency_index(i, n) == -static_cast<int>(n / 2) && order % 2 == 1) {
        v = 0.0;
        continue;
      }
      const cplx ik(0.0, wavenumber(i, n, field.length()));
      cplx factor = 1.0;
      for (int p = 0; p < order; ++p) factor *= ik;
      v *= factor;
    }
  }
  return to_physical(coeffs);
}

PeriodicField dealias(const PeriodicField& field) {
  auto coeffs = to_spectral(field);
  const std::size_t n = field.n();
  const int cutoff = static_cast<int>(n / 3);
  const std::size_t p = field.points();
  for (int c = 0; c < field.components(); ++c) {
    for (std::size_t j = 0; j < p; ++j) {
      const std::size_t ix = j % n;
      const std::size_t iy = j / n;
      const bool drop = std::abs(frequency_index(ix, n)) > cutoff ||
                        (field.dims() == 2 && std::abs(frequency_index(iy, n)) > cutoff);
      if (drop) coeffs.modes[static_cast<std::size_t>(c) * p + j] = 0.0;
    }
  }
  return to_physical(coeffs);
}

// ---------------------------------------------------------------------------
// Finite differences and norms

PeriodicField finite_difference(const PeriodicField& field, int shift_cells, DifferenceKind kind) {
  if (field.dims() != 1) throw PreconditionError("finite_difference expects a 1D field");
  const double alpha = shift_cells * field.spacing();
  if (shift_cells == 0 && kind != DifferenceKind::plain)
    throw PreconditionError("zero shift divides by |α|");
  const auto n = static_cast<long>(field.n());
  PeriodicField out(field.n(), field.length(), field.components());
  for (int c = 0; c < field.components(); ++c) {
    auto f = field.component(c);
    auto o = out.component(c);
    auto at = [&](long i) { return f[static_cast<std::size_t>(((i % n) + n) % n)]; };
    for (long i = 0; i < n; ++i) {
      switch (kind) {
        case DifferenceKind::plain:
          o[static_cast<std::size_t>(i)] = at(i) - at(i - shift_cells);
          break;
        case DifferenceKind::quotient:
          o[static_cast<std::size_t>(i)] = (at(i) - at(i - shift_cells)) / alpha;
          break;
        case DifferenceKind::symmetric:
          o[static_cast<std::size_t>(i)] =
              (2.0 * at(i) - at(i - shift_cells) - at(i + shift_cells)) / std::abs(alpha);
          break;
      }
    }
  }
  return out;
}

PeriodicField finite_difference(const PeriodicField& field, double alpha, DifferenceKind kind) {
  const double cells = alpha / field.spacing();
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, std::abs(cells)))
    throw PreconditionError("shift is not a multiple of the grid spacing");
  return finite_difference(field, static_cast<int>(rounded), kind);
}

HolderEstimate holder_seminorm(const PeriodicField& field, int k, double kappa) {
  if (field.dims() != 1) throw PreconditionError("holder_seminorm expects a 1D field");
  if (k < 0) throw PreconditionError("derivative order must be nonnegative");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw PreconditionError("kappa must lie in (0, 1]");
  HolderEstimate est;
  est.k = k;
  est.kappa = kappa;
  const PeriodicField dk = derivative(field, k);

  // Resolution diagnostic: fraction of spectral energy of ∇^k u in the top quarter of modes.
  {
    const auto coeffs = to_spectral(dk);
    double total = 0.0;
    double tail = 0.0;
    const std::size_t n = field.n();
    for (std::size_t j = 0; j < coeffs.modes.size(); ++j) {
      const double e = std::norm(coeffs.modes[j]);
      total += e;
      if (std::abs(frequency_index(j % n, n)) > static_cast<int>(3 * n / 8)) tail += e;
    }
    est.tail_fraction = total > 0.0 ? tail / total : 0.0;
    est.under_resolved = est.tail_fraction > 1e-6;
  }

  for (std::size_t cells = 1; cells <= field.n() / 4; cells *= 2) {
    const double h = static_cast<double>(cells) * field.spacing();
    const auto diff = finite_difference(dk, static_cast<int>(cells), DifferenceKind::plain);
    double sup = 0.0;
    for (double v : diff.samples()) sup = std::max(sup, std::abs(v));
    const double ratio = sup / std::pow(h, kappa);
    est.scales_used.push_back(h);
    est.per_scale.push_back(ratio);
    est.value = std::max(est.value, ratio);
  }
  return est;
}

FieldNorms norms(const PeriodicField& field) {
  FieldNorms out;
  const double cell = field.dims() == 1 ? field.spacing() : field.spacing() * field.spacing();
  double sq = 0.0;
  for (double v : field.samples()) {
    sq += v * v;
    out.linf = std::max(out.linf, std::abs(v));
  }
  out.l2 = std::sqrt(sq * cell);
  double sum = 0.0;
  for (double v : field.component(0)) sum += v;
  out.mean = sum / static_cast<double>(field.points());
  return out;
}

double l1_norm(const PeriodicField& field) {
  const double cell = field.dims() == 1 ? field.spacing() : field.spacing() * field.spacing();
  double sum = 0.0;
  for (double v : field.component(0)) sum += std::abs(v);
  return sum * cell;
}

}  // namespace plab
