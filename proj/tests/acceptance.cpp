// Acceptance suite: prints one PASS/FAIL line per criterion, exits 1 if any fails.
// `plab_acceptance 5 7` runs only the listed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "plab/kernels.hpp"
#include "plab/models.hpp"
#include "plab/nonlocal_ops.hpp"
#include "plab/ratefit.hpp"
#include "plab/stepper.hpp"

using namespace plab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double linf(const PeriodicField& f) {
  double m = 0.0;
  for (double v : f.samples()) m = std::max(m, std::abs(v));
  return m;
}

// peak a at x = 0, kinks at 0 and π, slope 4a/L
PeriodicField triangle(std::size_t n, double a) {
  return PeriodicField::from_function(
      n, [a](double x) { return a * (4.0 * std::abs(x / kTwoPi - 0.5) - 1.0); });
}

Trajectory run(const SplitModel& model, const PeriodicField& u0, double dt, double t_final,
               std::vector<std::string> quantities, int stride = 1, bool keep = false,
               Scheme scheme = Scheme::etd_rk2) {
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.scheme = scheme;
  EvolveOptions opt;
  opt.ledger_stride = stride;
  opt.keep_snapshots = keep;
  for (const auto& q : quantities) opt.quantities.push_back(LedgerQuantity::parse(q));
  return evolve(model, u0, t_final, cfg, opt);
}

Outcome ac1() {
  double worst = 0.0;
  std::string where;
  auto probe = [&](PoissonAnisoKernel k, const std::string& label) {
    for (double z : {0.1, 1.0, 10.0}) {
      const double err = std::abs(poisson_aniso_mass(k, z) - 1.0);
      if (err > worst) {
        worst = err;
        where = label + fmt(" z=%g", z);
      }
    }
  };
  for (double b : {0.0, 0.5, 2.0}) probe(PoissonAnisoKernel::one_d(b), fmt("d=1 b=%g", b));
  for (double b : {0.0, 0.5, 2.0}) probe(PoissonAnisoKernel::two_d(b, b), fmt("d=2 b=(%g,%g)", b, b));
  probe(PoissonAnisoKernel::two_d(1.0, 0.0), "d=2 b=(1,0)");
  return {worst <= 1e-5, fmt("max |mass-1| = %.3e (%s), 21 cases", worst, where.c_str())};
}

Outcome ac2() {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const int d = 1 + s % 2;
    std::array<double, 2> b{uni(rng), d == 2 ? uni(rng) : 0.0};
    std::array<double, 2> e{1.0, 0.0};
    if (d == 1) {
      e[0] = uni(rng) < 0.0 ? -1.0 : 1.0;
    } else {
      const double th = std::acos(-1.0) * uni(rng);
      e = {std::cos(th), std::sin(th)};
    }
    worst = std::max(worst, std::abs(lemz0_identity_lhs(d, b, e) - lemz0_identity_rhs(d, b, e)));
  }
  const double c1 = lemz0_constant(1);
  const double c1_err = std::abs(c1 - 1.0 / std::numbers::pi);
  return {worst <= 1e-4 && c1_err <= 1e-6,
          fmt("max identity error %.3e over 20 samples; |c1 - 1/pi| = %.3e", worst, c1_err)};
}

Outcome ac3() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0;
  int runs = 0;
  for (int f = 0; f < 50; ++f) {
    std::vector<double> ca(17), cb(17);
    for (int k = 1; k <= 16; ++k) {
      ca[k] = uni(rng) / k;
      cb[k] = uni(rng) / k;
    }
    const auto field = PeriodicField::from_function(128, [&](double x) {
      double v = 0.0;
      for (int k = 1; k <= 16; ++k) v += ca[k] * std::cos(k * x) + cb[k] * std::sin(k * x);
      return v;
    });
    for (double b : {0.0, 0.5, 1.0, 3.0}) {
      for (int sign : {+1, -1}) {
        try {
          worst = std::max(worst, dirichlet_neumann_crosscheck(field, {1, {b, 0.0}, sign}));
        } catch (const BackendDisagreement& e) {
          worst = std::max(worst, e.rel_gap);
        }
        ++runs;
      }
    }
  }
  return {worst <= 1e-3, fmt("max rel Linf gap %.3e over %d operator applications", worst, runs)};
}

Outcome ac4() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 3;
    const double s = 0.5 + 1.25 * (uni(rng) + 1.0);
    const double c0 = 0.2 + 0.4 * (uni(rng) + 1.0);
    Eigen::MatrixXd p0(n, n), p1(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        p0(i, j) = uni(rng);
        p1(i, j) = 0.5 * uni(rng);
      }
    const double omega = 1.0 + 5.0 * (uni(rng) + 1.0);
    FrozenSymbol sym;
    sym.s = s;
    sym.c0 = c0;
    sym.dim = n;
    sym.eval = [=](double t, double xi) {
      const Eigen::MatrixXd p = p0 + std::sin(omega * t) * p1;
      const Eigen::MatrixXd a =
          c0 * Eigen::MatrixXd::Identity(n, n) + p.transpose() * p;
      return Eigen::MatrixXd(std::pow(std::abs(xi), s) * a);
    };
    const auto kh = frozen_kernel_hat(sym, 1.0, {0.25, 0.5, 1.0, 2.0, 4.0}, 16);
    worst = std::max(worst, kh.max_bound_ratio());
  }
  return {worst <= 1.0 + 1e-6, fmt("max ||K||_F / (sqrt(N) e^{-c0 tau |xi|^s}) = %.9f over 200 symbols", worst)};
}

Outcome smoothing(const SplitModel& model, const PeriodicField& u0, double dt, double t_final,
                  const std::string& q, double order, double r, double s,
                  std::pair<double, double> window, double tol, Trajectory* keep = nullptr) {
  const Trajectory traj = run(model, u0, dt, t_final, {q});
  const auto rep = smoothing_report(traj, s, {{LedgerQuantity::parse(q).column(), order, r}}, window);
  const auto& f = rep[0];
  if (keep) *keep = traj;
  return {std::abs(f.fit.estimate - f.expected) <= tol,
          fmt("exponent %.4f (expected %.4f +- %.2f), R2 %.4f, %d points", f.fit.estimate,
              f.expected, tol, f.fit.r_squared, f.fit.n_points)};
}

Outcome ac5() {
  ModelSpec spec;
  spec.tag = ModelTag::heat;
  const auto model = make_model(spec);
  return smoothing(*model, triangle(1024, 1.0), 1e-5, 1e-2, "dsup:2", 2, 1, 2, {1e-4, 1e-2}, 0.05);
}

Outcome ac6() {
  ModelSpec spec;
  spec.tag = ModelTag::mcf_graph;
  const auto model = make_model(spec);
  // slope 4a/2π = 0.3
  const double a = 0.3 * kTwoPi / 4.0;
  return smoothing(*model, triangle(1024, a), 1e-5, 1e-2, "dsup:2", 2, 1, 2, {1e-4, 1e-2}, 0.1);
}

Outcome ac7() {
  ModelSpec spec;
  spec.tag = ModelTag::muskat_st;
  spec.rho0 = 0.0;
  const auto model = make_model(spec);
  Trajectory traj;
  Outcome o = smoothing(*model, triangle(512, 0.05), 1e-7, 1e-4, "dsup:2", 2, 1, 3,
                        {1e-6, 1e-4}, 0.1, &traj);
  const auto mean = traj.column("mean");
  double drift = 0.0;
  for (double m : mean) drift = std::max(drift, std::abs(m - mean.front()));
  o.pass = o.pass && drift <= 1e-10;
  o.detail += fmt("; mean drift %.3e", drift);
  return o;
}

Outcome ac8() {
  ModelSpec spec;
  spec.tag = ModelTag::surface_diffusion_axi;
  spec.hbar0 = 2.0;
  const auto model = make_model(spec);
  const auto h0 = PeriodicField::from_function(128, [](double x) { return 2.0 + 0.01 * std::cos(x); });
  const Trajectory traj = run(*model, h0, 1e-3, 1.0, {"dev", "sq_integral"}, 10);
  const auto fit = fit_exponential(traj.column("t"), traj.column("dev"), {0.1, 1.0});
  const auto sq = traj.column("sq_integral");
  double drift = 0.0;
  for (double v : sq) drift = std::max(drift, std::abs(v - sq.front()) / sq.front());
  const double rate_err = std::abs(fit.estimate - 0.75) / 0.75;
  return {rate_err <= 0.05 && drift <= 1e-6,
          fmt("decay rate %.5f (expected 0.75 +- 5%%), R2 %.6f; int h^2 rel drift %.3e",
              fit.estimate, fit.r_squared, drift)};
}

Outcome ac9() {
  std::vector<double> t, v;
  for (int i = 0; i <= 49; ++i) {
    const double ti = 0.1 + (5.0 - 0.1) * i / 49.0;
    t.push_back(ti);
    v.push_back(l1_norm(periodic_sd_kernel(ti, 2.0, 256)));
  }
  const auto fit = fit_exponential(t, v, {0.1, 5.0});
  return {fit.estimate >= 0.1875,
          fmt("L1 decay rate %.5f (bound 0.1875), R2 %.6f", fit.estimate, fit.r_squared)};
}

Outcome ac10() {
  const auto circle = PeriodicField::from_curve(
      128, [](double s) { return std::cos(s); }, [](double s) { return std::sin(s); });
  const double circle_res = linf(peskin_rhs(circle));

  ModelSpec spec;
  spec.tag = ModelTag::peskin2d;
  spec.theta_cap = 1e3;
  const auto model = make_model(spec);
  const auto x0 = PeriodicField::from_curve(
      128, [](double s) { return 1.1 * std::cos(s); }, [](double s) { return 0.9 * std::sin(s); });
  const Trajectory traj = run(*model, x0, 0.01, 5.0, {"circle_dist", "area"}, 5);
  const auto theta = traj.column("theta");
  double theta_max = 0.0;
  for (double th : theta) theta_max = std::max(theta_max, th);
  const auto fit = fit_exponential(traj.column("t"), traj.column("circle_dist"), {0.0, 5.0});
  const auto area = traj.column("area");
  double drift = 0.0;
  for (double a : area) drift = std::max(drift, std::abs(a - area.front()) / std::abs(area.front()));
  const bool ok = circle_res <= 1e-6 && theta_max <= 2.0 * theta.front() && fit.r_squared >= 0.98 &&
                  drift <= 5e-3;
  return {ok, fmt("circle residual %.3e; max theta %.4f (theta0 %.4f); distance decay rate %.4f "
                  "R2 %.5f; area drift %.3e",
                  circle_res, theta_max, theta.front(), fit.estimate, fit.r_squared, drift)};
}

Outcome ac11() {
  ModelSpec spec;
  spec.tag = ModelTag::thinfilm_exp;
  const auto model = make_model(spec);
  Trajectory traj;
  Outcome o = smoothing(*model, triangle(512, 1e-3), 1e-6, 1e-3, "dsup:3", 3, 1, 4,
                        {1e-5, 1e-3}, 0.1, &traj);
  const auto mean = traj.column("mean");
  double drift = 0.0;
  for (double m : mean) drift = std::max(drift, std::abs(m - mean.front()));
  o.pass = o.pass && drift <= 1e-10;
  o.detail += fmt("; mean drift %.3e", drift);
  return o;
}

Outcome ac12() {
  ModelSpec spec;
  spec.tag = ModelTag::mcf_graph;
  const auto model = make_model(spec);
  const auto u0 = PeriodicField::from_function(128, [](double x) { return 0.05 * std::sin(x); });
  StepperConfig cfg;
  cfg.dt = 1e-3;
  cfg.picard_tol = 1e-12;
  try {
    const auto res = picard_solve(*model, u0, 0.1, cfg);
    const auto rep = contraction_report(res.log);
    return {rep.max_ratio < 1.0 && rep.geometric_fit.r_squared >= 0.95,
            fmt("max ratio %.4f, geometric fit R2 %.4f, converged at iterate %d", rep.max_ratio,
                rep.geometric_fit.r_squared, res.log.converged_iterate)};
  } catch (const NonContraction& e) {
    return {false, std::string("non-contraction: ") + e.what()};
  }
}

Outcome ac13() {
  ModelSpec spec;
  spec.tag = ModelTag::varcoef_heat;
  const auto model = make_model(spec);
  const auto u0 = PeriodicField::from_function(
      128, [](double x) { return std::sin(x) + 0.5 * std::cos(2.0 * x); });
  const double t_final = 0.1;
  std::vector<double> gaps;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const auto a = run(*model, u0, dt, t_final, {}, 1000, true, Scheme::frozen_pointwise);
    const auto b = run(*model, u0, dt, t_final, {}, 1000, true, Scheme::imex_frozen_phi);
    gaps.push_back(linf(a.snapshots.back() - b.snapshots.back()));
  }
  const double p1 = std::log2(gaps[0] / gaps[1]);
  const double p2 = std::log2(gaps[1] / gaps[2]);
  const double order = std::log2(gaps[0] / gaps[2]) / 2.0;
  return {std::abs(order - 1.0) <= 0.2 && std::abs(p1 - 1.0) <= 0.2 && std::abs(p2 - 1.0) <= 0.2,
          fmt("gaps %.3e %.3e %.3e; observed order %.3f (%.3f, %.3f)", gaps[0], gaps[1], gaps[2],
              order, p1, p2)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"kernel mass identity", ac1},
      {"lemz0 identity", ac2},
      {"dual-backend Dirichlet-Neumann operator", ac3},
      {"frozen-kernel bound", ac4},
      {"heat smoothing rate", ac5},
      {"MCF smoothing rate", ac6},
      {"Muskat smoothing rate and mean", ac7},
      {"surface diffusion decay", ac8},
      {"periodic SD kernel decay", ac9},
      {"Peskin stationarity and convergence", ac10},
      {"thin film mean and smoothing", ac11},
      {"Picard contraction", ac12},
      {"freezing consistency", ac13},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("AC%02d %s %s: %s [%.1fs]\n", id, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
