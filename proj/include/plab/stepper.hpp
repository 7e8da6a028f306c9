#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plab/grid.hpp"

namespace plab {

/// Evolution u_t = -L u + R(u), where L is a Fourier multiplier with rate L̂(ξ) (frozen linear
/// part) and R the explicit remainder.
class SplitModel {
 public:
  virtual ~SplitModel() = default;

  virtual std::string name() const = 0;
  /// Order s of the linear symbol.
  virtual double order() const = 0;
  virtual int components() const { return 1; }
  virtual bool is_contour() const { return false; }

  /// L̂(ξ) for the physical wavenumber ξ.
  virtual double linear_rate(double xi) const = 0;
  virtual PeriodicField remainder(const PeriodicField& u) const = 0;
  /// Full right-hand side -L u + R(u).
  virtual PeriodicField rhs(const PeriodicField& u) const;

  /// Space-dependent symbol A(x, ξ) used by the pointwise frozen step; defaults to L̂.
  virtual double pointwise_rate(double x, double xi) const;
  /// Remainder matching pointwise_rate; defaults to remainder().
  virtual PeriodicField pointwise_remainder(const PeriodicField& u) const;

  /// Throws NumericalAbort when the state leaves the model's domain (e.g. h ≤ 0).
  virtual void check_state(const PeriodicField& u) const;

  /// -L u.
  PeriodicField apply_linear(const PeriodicField& u) const;
};

enum class Scheme { imex_frozen_phi, frozen_pointwise, etd_rk2 };

Scheme parse_scheme(const std::string& s);
std::string to_string(Scheme s);

struct StepperConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::etd_rk2;
  bool dealias = false;
  int max_picard_iters = 50;
  double picard_tol = 1e-10;
  bool dt_guard = true;
  double theta_cap = 1e3;

  void validate() const;
};

/// Raised when an evolution produces NaN/Inf or leaves the model's admissible set.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, double t = 0.0,
                 std::optional<PeriodicField> last_healthy = std::nullopt)
      : std::runtime_error(what), t(t), last_healthy(std::move(last_healthy)) {}
  double t;
  std::optional<PeriodicField> last_healthy;
};

/// Quantity recorded per ledger row in addition to t, l2, linf, mean.
struct LedgerQuantity {
  enum class Kind { dsup, holder, dev, sq_integral, area, circle_dist };
  Kind kind = Kind::dsup;
  int k = 0;
  double kappa = 0.5;

  /// Parses "dsup:2", "holder:1:0.5", "dev", "sq_integral", "area", "circle_dist".
  static LedgerQuantity parse(const std::string& token);
  std::string column() const;
  double measure(const PeriodicField& u) const;
};

struct LedgerRow {
  double t = 0.0;
  FieldNorms norms;
  std::vector<double> extra;
  double theta = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PeriodicField> snapshots;
  std::vector<LedgerQuantity> quantities;
  std::vector<LedgerRow> ledger;
  bool has_theta = false;

  std::vector<std::string> columns() const;
  /// Column by name ("t", "l2", "linf", "mean", quantity columns, "theta").
  std::vector<double> column(const std::string& name) const;
  void record(double t, const PeriodicField& u, bool keep_snapshot);
};

LedgerRow make_ledger_row(double t, const PeriodicField& u,
                          const std::vector<LedgerQuantity>& quantities, bool with_theta);

/// φ1(z) = (e^z - 1)/z and φ2(z) = (e^z - 1 - z)/z², accurate near z = 0.
double phi1(double z);
double phi2(double z);

/// One exponential-integrator step with the constant frozen symbol: exponential Euler, or
/// Cox–Matthews ETD-RK2 when `second_order` is set.
PeriodicField imex_frozen_phi_step(const PeriodicField& u, const SplitModel& model, double dt,
                                   bool second_order = false, bool dealias = false);

/// Per-point frozen exponential Euler step with symbol A(x_i, ·), evaluated at x_i. 1D, O(N²).
PeriodicField frozen_pointwise_step(const PeriodicField& u, const SplitModel& model, double dt,
                                    bool dealias = false);

PeriodicField step(const PeriodicField& u, const SplitModel& model, const StepperConfig& config);

/// Lipschitz surrogate of the remainder, probed with a small cos x perturbation.
double remainder_lipschitz(const SplitModel& model, const PeriodicField& u);

struct EvolveOptions {
  int ledger_stride = 1;
  bool keep_snapshots = false;
  std::vector<LedgerQuantity> quantities;
};

/// Uniform-dt march from t = 0 to T.
Trajectory evolve(const SplitModel& model, const PeriodicField& u0, double t_final,
                  const StepperConfig& config, const EvolveOptions& options = {});

struct ContractionLog {
  std::vector<double> distances;  ///< d_i = max_t ‖g^{i+1}(t) - g^i(t)‖∞
  std::vector<double> ratios;     ///< 1 for the first iterate, then d_i / d_{i-1}
  int converged_iterate = -1;     ///< i with d_i < tol, or -1
};

class NonContraction : public std::runtime_error {
 public:
  NonContraction(const std::string& what, ContractionLog log)
      : std::runtime_error(what), log(std::move(log)) {}
  ContractionLog log;
};

struct PicardResult {
  Trajectory trajectory;
  ContractionLog log;
};

/// One Picard sweep on the whole window: f^{m+1} = e^{-L dt} f^m + dt φ1(-L dt) R(g^m), f^0 = u0.
std::vector<PeriodicField> picard_map(const SplitModel& model, const PeriodicField& u0,
                                      const std::vector<PeriodicField>& g, double dt,
                                      bool dealias = false);

/// Iterates picard_map from g⁰ ≡ u0 until the successive distance drops below picard_tol.
PicardResult picard_solve(const SplitModel& model, const PeriodicField& u0, double t_final,
                          const StepperConfig& config);

}  // namespace plab
