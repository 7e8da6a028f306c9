#include <algorithm>
#include <cmath>
#include <functional>

#include "plab/cli.hpp"
#include "plab/kernels.hpp"
#include "plab/nonlocal_ops.hpp"

namespace plab::cli {

namespace {

using std::numbers::pi;

CheckResult check_abs(std::string name, double measured, double expected, double tol) {
  return {std::move(name), std::abs(measured - expected) <= tol, measured, expected, tol};
}

CheckResult check_le(std::string name, double measured, double bound) {
  return {std::move(name), measured <= bound, measured, 0.0, bound};
}

double linf(const PeriodicField& f) {
  double m = 0.0;
  for (double v : f.samples()) m = std::max(m, std::abs(v));
  return m;
}

double sum_h(const PeriodicField& f) {
  double s = 0.0;
  for (double v : f.component(0)) s += v;
  return s * f.spacing();
}

// guards a single check so one failing routine does not hide the rest
CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    return body();
  } catch (const std::exception&) {
    return {name, false, std::nan(""), 0.0, 0.0};
  }
}

std::vector<CheckResult> kernels_suite() {
  std::vector<CheckResult> r;
  r.push_back(guarded("heat_kernel_mass", [] {
    return check_abs("heat_kernel_mass", sum_h(fractional_heat_kernel(0.1, 1.5, 256)), 1.0, 1e-12);
  }));
  r.push_back(guarded("heat_kernel_gaussian_images", [] {
    const double t = 0.05;
    const auto k = fractional_heat_kernel(t, 2.0, 256);
    double gap = 0.0;
    for (std::size_t i = 0; i < k.n(); ++i) {
      double g = 0.0;
      for (int m = -3; m <= 3; ++m) {
        const double y = k.x(i) - kTwoPi * m;
        g += std::exp(-y * y / (4.0 * t)) / std::sqrt(4.0 * pi * t);
      }
      gap = std::max(gap, std::abs(k[i] - g));
    }
    return check_le("heat_kernel_gaussian_images", gap, 1e-10);
  }));
  r.push_back(guarded("poisson_mass_1d", [] {
    return check_abs("poisson_mass_1d",
                     poisson_aniso_mass(PoissonAnisoKernel::one_d(1.0), -1.0), 1.0, 1e-8);
  }));
  r.push_back(guarded("poisson_mass_2d", [] {
    return check_abs("poisson_mass_2d",
                     poisson_aniso_mass(PoissonAnisoKernel::two_d(1.0, 0.0), -0.5), 1.0, 1e-8);
  }));
  r.push_back(guarded("frozen_kernel_bound", [] {
    FrozenSymbol sym;
    sym.s = 2.0;
    sym.dim = 2;
    sym.c0 = 0.39;
    sym.eval = [](double t, double xi) {
      Eigen::MatrixXd a(2, 2);
      a << 2.0, 0.5, 0.5, 1.0;
      return Eigen::MatrixXd((1.0 + 0.5 * std::sin(t)) * xi * xi * a);
    };
    const auto k = frozen_kernel_hat(sym, 1.0, {0.5, 1.0, 2.0, 4.0}, 32);
    return check_le("frozen_kernel_bound", k.max_bound_ratio(), 1.0);
  }));
  r.push_back(guarded("halfspace_wall", [] {
    return check_abs("halfspace_wall", halfspace_heat_kernel(0.3, {0.2}, 0.0, 0.7), 0.0, 1e-15);
  }));
  r.push_back(guarded("sd_kernel_mean_free", [] {
    return check_abs("sd_kernel_mean_free", sum_h(periodic_sd_kernel(0.5, 2.0, 128)), 0.0, 1e-12);
  }));
  return r;
}

std::vector<CheckResult> operators_suite() {
  std::vector<CheckResult> r;
  r.push_back(guarded("lemz0_c1", [] { return check_abs("lemz0_c1", lemz0_constant(1), 1.0 / pi, 1e-8); }));
  r.push_back(guarded("lemz0_c2", [] {
    return check_abs("lemz0_c2", lemz0_constant(2), 0.5 / pi, 1e-6);
  }));
  r.push_back(guarded("lemz0_identity_1d", [] {
    return check_abs("lemz0_identity_1d", lemz0_identity_lhs(1, {0.7, 0.0}, {1.0, 0.0}),
                     lemz0_identity_rhs(1, {0.7, 0.0}, {1.0, 0.0}), 1e-6);
  }));
  r.push_back(guarded("dirichlet_neumann_backends", [] {
    const auto f = PeriodicField::from_function(128, [](double x) { return std::exp(std::sin(x)); });
    const double gap = dirichlet_neumann_crosscheck(f, DriftedSqrtSymbol{1, {0.5, 0.0}, +1});
    return check_le("dirichlet_neumann_backends", gap, 1e-3);
  }));
  r.push_back(guarded("hilbert_sin", [] {
    const auto s = PeriodicField::from_function(64, [](double x) { return std::sin(x); });
    const auto c = PeriodicField::from_function(64, [](double x) { return std::cos(x); });
    return check_le("hilbert_sin", linf(hilbert_transform(s) + c), 1e-12);
  }));
  r.push_back(guarded("gcal_fast", [] {
    return check_abs("gcal_fast", gcal_fast(0.7, 2, 0.5), gcal(0.7, 2, 0.5), 1e-10);
  }));
  r.push_back(guarded("fmc_linearization", [] {
    const double eps = 1e-4, a = 0.5;
    const auto u = PeriodicField::from_function(128, [&](double x) { return eps * std::cos(x); });
    const double measured = fractional_mean_curvature(u, a)[0] / eps;
    const double c = fmc_linear_constant(a);
    return check_abs("fmc_linearization", measured, c, 1e-3 * c);
  }));
  r.push_back(guarded("peskin_circle", [] {
    const auto x = PeriodicField::from_curve(
        64, [](double s) { return std::cos(s); }, [](double s) { return std::sin(s); });
    return check_le("peskin_circle", linf(peskin_rhs(x)), 1e-8);
  }));
  r.push_back(guarded("muskat_forms", [] {
    const auto f = PeriodicField::from_function(
        128, [](double x) { return 0.1 * std::sin(x) + 0.05 * std::cos(2.0 * x); });
    const auto a = muskat_st_rhs(f, 1.0);
    const auto b = muskat_st_rhs_kernel_form(f, 1.0);
    return check_le("muskat_forms", linf(a - b) / linf(b), 1e-6);
  }));
  return r;
}

std::vector<CheckResult> models_suite() {
  std::vector<CheckResult> r;
  const std::vector<std::pair<ModelTag, double>> constants = {
      {ModelTag::heat, 0.3},        {ModelTag::varcoef_heat, 0.3},
      {ModelTag::mcf_graph, 0.3},   {ModelTag::nonlocal_mcf, 0.3},
      {ModelTag::muskat_st, 0.3},   {ModelTag::thinfilm_exp, 0.3},
      {ModelTag::surface_diffusion_axi, 2.0},
  };
  for (const auto& [tag, c] : constants) {
    const std::string name = "stationary_" + to_string(tag);
    r.push_back(guarded(name, [&, tag = tag, c = c] {
      ModelSpec spec;
      spec.tag = tag;
      spec.rho0 = 1.0;
      const auto model = make_model(spec);
      const auto u = PeriodicField::from_function(64, [&](double) { return c; });
      return check_le(name, linf(model->rhs(u)), 1e-12);
    }));
  }
  r.push_back(guarded("stationary_peskin2d", [] {
    ModelSpec spec;
    spec.tag = ModelTag::peskin2d;
    const auto model = make_model(spec);
    const auto x = PeriodicField::from_curve(
        64, [](double s) { return 0.8 * std::cos(s); }, [](double s) { return 0.8 * std::sin(s); });
    return check_le("stationary_peskin2d", linf(model->rhs(x)), 1e-8);
  }));
  auto drift = [](ModelTag tag, double dt, double t_final,
                  const std::function<double(double)>& init,
                  const std::function<double(const PeriodicField&)>& invariant) {
    ModelSpec spec;
    spec.tag = tag;
    const auto model = make_model(spec);
    const auto u0 = PeriodicField::from_function(64, init);
    StepperConfig cfg;
    cfg.dt = dt;
    EvolveOptions opt;
    opt.keep_snapshots = true;
    opt.ledger_stride = static_cast<int>(std::lround(t_final / dt));
    const auto traj = evolve(*model, u0, t_final, cfg, opt);
    return std::abs(invariant(traj.snapshots.back()) - invariant(traj.snapshots.front()));
  };
  r.push_back(guarded("thinfilm_mass", [&] {
    const double d = drift(ModelTag::thinfilm_exp, 1e-4, 0.01,
                           [](double x) { return 0.1 * std::cos(x); }, sum_h);
    return check_le("thinfilm_mass", d, 1e-12);
  }));
  r.push_back(guarded("muskat_mass", [&] {
    const double d = drift(ModelTag::muskat_st, 1e-4, 0.01,
                           [](double x) { return 0.1 * std::sin(x); }, sum_h);
    return check_le("muskat_mass", d, 1e-12);
  }));
  r.push_back(guarded("surface_diffusion_volume", [&] {
    auto sq = [](const PeriodicField& h) {
      double s = 0.0;
      for (double v : h.component(0)) s += v * v;
      return s * h.spacing();
    };
    const double d = drift(ModelTag::surface_diffusion_axi, 1e-3, 0.1,
                           [](double x) { return 2.0 + 0.05 * std::cos(x); }, sq);
    return check_le("surface_diffusion_volume", d, 1e-6);
  }));
  return r;
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite) {
  if (suite == "kernels") return kernels_suite();
  if (suite == "operators") return operators_suite();
  if (suite == "models") return models_suite();
  throw ConfigError("unknown verify suite '" + suite + "' (kernels, operators, models)");
}

}  // namespace plab::cli
