#include "plab/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plab/nonlocal_ops.hpp"

namespace plab {

// ---------------------------------------------------------------------------
// SplitModel defaults

PeriodicField SplitModel::rhs(const PeriodicField& u) const {
  return apply_linear(u) + remainder(u);
}

double SplitModel::pointwise_rate(double, double xi) const { return linear_rate(xi); }

PeriodicField SplitModel::pointwise_remainder(const PeriodicField& u) const {
  return remainder(u);
}

void SplitModel::check_state(const PeriodicField&) const {}

PeriodicField SplitModel::apply_linear(const PeriodicField& u) const {
  return apply_multiplier(u, [this](double k) { return cplx(-linear_rate(k), 0.0); });
}

Scheme parse_scheme(const std::string& s) {
  if (s == "imex_frozen_phi" || s == "etd1") return Scheme::imex_frozen_phi;
  if (s == "frozen_pointwise") return Scheme::frozen_pointwise;
  if (s == "etd_rk2") return Scheme::etd_rk2;
  throw PreconditionError("unknown scheme '" + s + "'");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::imex_frozen_phi: return "imex_frozen_phi";
    case Scheme::frozen_pointwise: return "frozen_pointwise";
    case Scheme::etd_rk2: return "etd_rk2";
  }
  return "?";
}

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("dt must be positive");
  if (!(picard_tol > 0.0)) throw PreconditionError("picard_tol must be positive");
  if (max_picard_iters < 1) throw PreconditionError("max_picard_iters must be at least 1");
  if (!(theta_cap > 0.0)) throw PreconditionError("theta_cap must be positive");
}

// ---------------------------------------------------------------------------
// Exponential integrators

double phi1(double z) {
  if (std::abs(z) < 1e-5) return 1.0 + z / 2.0 + z * z / 6.0;
  return std::expm1(z) / z;
}

double phi2(double z) {
  if (std::abs(z) < 1e-3) return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
  return (std::expm1(z) - z) / (z * z);
}

namespace {

PeriodicField remainder_of(const SplitModel& model, const PeriodicField& u, bool dealias_out,
                           bool pointwise = false) {
  PeriodicField r = pointwise ? model.pointwise_remainder(u) : model.remainder(u);
  return dealias_out ? dealias(r) : r;
}

struct Propagator {
  std::vector<double> decay;  // e^{-L dt}
  std::vector<double> w1;     // dt φ1(-L dt)
  std::vector<double> w2;     // dt φ2(-L dt)
};

Propagator propagator(const SplitModel& model, std::size_t n, double length, double dt) {
  Propagator p;
  p.decay.resize(n);
  p.w1.resize(n);
  p.w2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = -model.linear_rate(wavenumber(i, n, length)) * dt;
    p.decay[i] = std::exp(z);
    p.w1[i] = dt * phi1(z);
    p.w2[i] = dt * phi2(z);
  }
  return p;
}

}  // namespace

PeriodicField imex_frozen_phi_step(const PeriodicField& u, const SplitModel& model, double dt,
                                   bool second_order, bool dealias_out) {
  if (u.dims() != 1) throw PreconditionError("exponential step expects a 1D field");
  const std::size_t n = u.n();
  const auto p = propagator(model, n, u.length(), dt);
  auto uh = to_spectral(u);
  auto rh = to_spectral(remainder_of(model, u, dealias_out));
  SpectralCoeffs ah = uh;
  for (std::size_t j = 0; j < ah.modes.size(); ++j) {
    const std::size_t i = j % n;
    ah.modes[j] = p.decay[i] * uh.modes[j] + p.w1[i] * rh.modes[j];
  }
  if (!second_order) return to_physical(ah);
  const PeriodicField a = to_physical(ah);
  auto rah = to_spectral(remainder_of(model, a, dealias_out));
  for (std::size_t j = 0; j < ah.modes.size(); ++j) {
    const std::size_t i = j % n;
    ah.modes[j] += p.w2[i] * (rah.modes[j] - rh.modes[j]);
  }
  return to_physical(ah);
}

PeriodicField frozen_pointwise_step(const PeriodicField& u, const SplitModel& model, double dt,
                                    bool dealias_out) {
  if (u.dims() != 1) throw PreconditionError("frozen_pointwise_step is 1D only");
  const std::size_t n = u.n();
  if (n > 1024) throw PreconditionError("frozen_pointwise_step is limited to N <= 1024");
  auto uh = to_spectral(u);
  auto rh = to_spectral(remainder_of(model, u, dealias_out, true));
  std::vector<cplx> twiddle(n);
  for (std::size_t m = 0; m < n; ++m)
    twiddle[m] = std::polar(1.0, kTwoPi * static_cast<double>(m) / static_cast<double>(n));
  std::vector<double> xi(n);
  for (std::size_t k = 0; k < n; ++k) xi[k] = wavenumber(k, n, u.length());

  PeriodicField out(n, u.length(), u.components());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u.x(i);
    for (int c = 0; c < u.components(); ++c) {
      const std::size_t off = static_cast<std::size_t>(c) * n;
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double z = -model.pointwise_rate(x, xi[k]) * dt;
        const cplx v = std::exp(z) * uh.modes[off + k] + dt * phi1(z) * rh.modes[off + k];
        acc += v * twiddle[(k * i) % n];
      }
      out[off + i] = acc.real() * inv_n;
    }
  }
  return out;
}

PeriodicField step(const PeriodicField& u, const SplitModel& model, const StepperConfig& config) {
  switch (config.scheme) {
    case Scheme::imex_frozen_phi:
      return imex_frozen_phi_step(u, model, config.dt, false, config.dealias);
    case Scheme::etd_rk2:
      return imex_frozen_phi_step(u, model, config.dt, true, config.dealias);
    case Scheme::frozen_pointwise:
      return frozen_pointwise_step(u, model, config.dt, config.dealias);
  }
  throw PreconditionError("unknown scheme");
}

double remainder_lipschitz(const SplitModel& model, const PeriodicField& u) {
  double scale = 0.0;
  for (double v : u.samples()) scale = std::max(scale, std::abs(v));
  const double eps = 1e-6 * std::max(1.0, scale);
  PeriodicField pert = u;
  for (int c = 0; c < u.components(); ++c) {
    auto s = pert.component(c);
    for (std::size_t i = 0; i < u.points(); ++i) s[i] += eps * std::cos(u.x(i));
  }
  const PeriodicField r0 = model.remainder(u);
  const PeriodicField r1 = model.remainder(pert);
  double gap = 0.0;
  for (std::size_t i = 0; i < r0.samples().size(); ++i) gap = std::max(gap, std::abs(r1[i] - r0[i]));
  return gap / eps;
}

// ---------------------------------------------------------------------------
// Drivers

namespace {

std::size_t step_count(double t_final, double dt) {
  if (!(t_final > 0.0)) throw PreconditionError("horizon T must be positive");
  const double steps = std::round(t_final / dt);
  if (steps < 1.0 || std::abs(steps * dt - t_final) > 1e-9 * t_final)
    throw PreconditionError("T must be a multiple of dt");
  return static_cast<std::size_t>(steps);
}

void check_layout(const SplitModel& model, const PeriodicField& u0) {
  if (u0.components() != model.components())
    throw PreconditionError("initial data has " + std::to_string(u0.components()) +
                            " components, model " + model.name() + " expects " +
                            std::to_string(model.components()));
}

}  // namespace

Trajectory evolve(const SplitModel& model, const PeriodicField& u0, double t_final,
                  const StepperConfig& config, const EvolveOptions& options) {
  config.validate();
  check_layout(model, u0);
  if (options.ledger_stride < 1) throw PreconditionError("ledger stride must be positive");
  const std::size_t steps = step_count(t_final, config.dt);
  model.check_state(u0);
  if (config.dt_guard) {
    const double lip = remainder_lipschitz(model, u0);
    if (lip > 0.0 && config.dt > 0.5 / lip) {
      std::ostringstream msg;
      msg << "dt = " << config.dt << " exceeds the explicit-remainder guard 0.5/Lip = " << 0.5 / lip;
      throw PreconditionError(msg.str());
    }
  }

  Trajectory traj;
  traj.quantities = options.quantities;
  traj.has_theta = model.is_contour();
  auto record = [&](double t, const PeriodicField& u) {
    traj.record(t, u, options.keep_snapshots);
    if (traj.has_theta && traj.ledger.back().theta > config.theta_cap) {
      std::ostringstream msg;
      msg << "well-stretched cap exceeded at t = " << t << ": Θ = " << traj.ledger.back().theta;
      throw NumericalAbort(msg.str(), t, u);
    }
  };
  record(0.0, u0);

  PeriodicField u = u0;
  for (std::size_t m = 1; m <= steps; ++m) {
    const double t = static_cast<double>(m) * config.dt;
    PeriodicField next;
    try {
      next = step(u, model, config);
    } catch (const WellStretchedViolation& e) {
      throw NumericalAbort(e.what(), t - config.dt, u);
    } catch (const NumericalAbort& e) {
      throw NumericalAbort(e.what(), t - config.dt, u);
    }
    if (!next.all_finite()) {
      std::ostringstream msg;
      msg << "non-finite values after step " << m << " (t = " << t << ")";
      throw NumericalAbort(msg.str(), t - config.dt, u);
    }
    try {
      model.check_state(next);
    } catch (const NumericalAbort& e) {
      throw NumericalAbort(e.what(), t - config.dt, u);
    }
    u = std::move(next);
    if (m % static_cast<std::size_t>(options.ledger_stride) == 0 || m == steps) record(t, u);
  }
  return traj;
}

std::vector<PeriodicField> picard_map(const SplitModel& model, const PeriodicField& u0,
                                      const std::vector<PeriodicField>& g, double dt,
                                      bool dealias_out) {
  const std::size_t n = u0.n();
  const auto p = propagator(model, n, u0.length(), dt);
  std::vector<PeriodicField> f;
  f.reserve(g.size());
  f.push_back(u0);
  auto fh = to_spectral(u0);
  for (std::size_t m = 0; m + 1 < g.size(); ++m) {
    auto rh = to_spectral(remainder_of(model, g[m], dealias_out));
    for (std::size_t j = 0; j < fh.modes.size(); ++j) {
      const std::size_t i = j % n;
      fh.modes[j] = p.decay[i] * fh.modes[j] + p.w1[i] * rh.modes[j];
    }
    f.push_back(to_physical(fh));
  }
  return f;
}

PicardResult picard_solve(const SplitModel& model, const PeriodicField& u0, double t_final,
                          const StepperConfig& config) {
  config.validate();
  check_layout(model, u0);
  const std::size_t steps = step_count(t_final, config.dt);
  std::vector<PeriodicField> g(steps + 1, u0);
  ContractionLog log;
  int streak = 0;
  for (int it = 0; it < config.max_picard_iters; ++it) {
    auto f = picard_map(model, u0, g, config.dt, config.dealias);
    double d = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) {
      if (!f[m].all_finite()) throw NonContraction("Picard iterate became non-finite", log);
      for (std::size_t j = 0; j < f[m].samples().size(); ++j)
        d = std::max(d, std::abs(f[m][j] - g[m][j]));
    }
    if (log.distances.empty()) {
      log.ratios.push_back(1.0);
    } else {
      const double prev = log.distances.back();
      const double ratio = prev > 0.0 ? d / prev : 0.0;
      log.ratios.push_back(ratio);
      streak = ratio >= 1.0 ? streak + 1 : 0;
    }
    log.distances.push_back(d);
    g = std::move(f);
    if (d < config.picard_tol) {
      log.converged_iterate = it;
      break;
    }
    if (streak >= 3) throw NonContraction("Picard iteration is not contracting", log);
  }
  if (log.converged_iterate < 0) throw NonContraction("Picard iteration did not converge", log);

  PicardResult result;
  result.log = log;
  result.trajectory.has_theta = model.is_contour();
  for (std::size_t m = 0; m < g.size(); ++m)
    result.trajectory.record(static_cast<double>(m) * config.dt, g[m], true);
  return result;
}

}  // namespace plab
