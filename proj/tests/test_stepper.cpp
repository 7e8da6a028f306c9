#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "plab/models.hpp"
#include "plab/stepper.hpp"

using namespace plab;

namespace {

double max_abs_diff(const PeriodicField& a, const PeriodicField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> to_vec(const PeriodicField& f) { return {f.samples().begin(), f.samples().end()}; }

// u_t = -c|ξ|^s u + λ u, optionally poisoned once max|u| passes `nan_above`
class LinearModel final : public SplitModel {
 public:
  LinearModel(double c, double lambda, double nan_above = std::numeric_limits<double>::infinity())
      : c_(c), lambda_(lambda), nan_above_(nan_above) {}
  std::string name() const override { return "linear_test"; }
  double order() const override { return 2.0; }
  double linear_rate(double xi) const override { return c_ * xi * xi; }
  PeriodicField remainder(const PeriodicField& u) const override {
    PeriodicField r = u;
    r *= lambda_;
    double m = 0.0;
    for (double v : u.samples()) m = std::max(m, std::abs(v));
    if (m > nan_above_) r[0] = std::numeric_limits<double>::quiet_NaN();
    return r;
  }

 private:
  double c_, lambda_, nan_above_;
};

PeriodicField triangle(std::size_t n, double a) {
  return PeriodicField::from_function(n, [a](double x) {
    return a * (4.0 * std::abs(x / kTwoPi - 0.5) - 1.0);
  });
}

PeriodicField run_to(const SplitModel& m, const PeriodicField& u0, double T, double dt,
                     Scheme scheme) {
  StepperConfig c;
  c.dt = dt;
  c.scheme = scheme;
  c.dt_guard = false;
  EvolveOptions o;
  o.keep_snapshots = true;
  return evolve(m, u0, T, c, o).snapshots.back();
}

double observed_order(const SplitModel& m, const PeriodicField& u0, double T, double dt,
                      Scheme scheme) {
  const auto a = run_to(m, u0, T, dt, scheme);
  const auto b = run_to(m, u0, T, dt / 2, scheme);
  const auto c = run_to(m, u0, T, dt / 4, scheme);
  return std::log2(max_abs_diff(a, b) / max_abs_diff(b, c));
}

}  // namespace

TEST_CASE("phi functions") {
  CHECK(phi1(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi2(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phi1(-1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(phi2(-1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  // Σ z^k/(k+1)! and Σ z^k/(k+2)!
  auto series = [](double z, int shift) {
    double s = 0.0, term = 1.0;
    for (int j = 1; j <= shift; ++j) term /= j;
    for (int k = 0; k < 25; ++k) {
      s += term;
      term *= z / (k + 1 + shift);
    }
    return s;
  };
  for (double z : {1e-9, -1e-7, 3e-5, -2e-3, 0.3, -0.7}) {
    CHECK(phi1(z) == doctest::Approx(series(z, 1)).epsilon(1e-13));
    CHECK(phi2(z) == doctest::Approx(series(z, 2)).epsilon(1e-13));
  }
  CHECK(phi1(-1e4) == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("config validation") {
  StepperConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = {};
  c.picard_tol = -1.0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = {};
  c.max_picard_iters = 0;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  CHECK(parse_scheme("etd_rk2") == Scheme::etd_rk2);
  CHECK(to_string(parse_scheme("frozen_pointwise")) == "frozen_pointwise");
  CHECK_THROWS_AS(parse_scheme("rk4"), PreconditionError);
}

TEST_CASE("pure heat step is the exact multiplier") {
  const auto heat = make_model(ModelSpec{});
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  PeriodicField u(64);
  for (auto& v : u.samples()) v = nd(rng);
  const double dt = 0.013;
  const auto exact = oracle::dense_multiplier(to_vec(u), [dt](int k) { return std::exp(-dt * k * k); });
  for (bool rk2 : {false, true}) {
    const auto s = imex_frozen_phi_step(u, *heat, dt, rk2);
    for (std::size_t i = 0; i < 64; ++i) CHECK(std::abs(s[i] - exact[i]) < 1e-13);
  }
}

TEST_CASE("linearized exact solutions e^{-t|n|^s}") {
  for (double s : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    ModelSpec spec;
    spec.s = s;
    const auto m = make_model(spec);
    const auto u0 = PeriodicField::from_function(32, [](double x) { return std::cos(2 * x) + 0.5 * std::sin(3 * x); });
    for (Scheme sc : {Scheme::imex_frozen_phi, Scheme::etd_rk2, Scheme::frozen_pointwise}) {
      const auto u = run_to(*m, u0, 0.1, 0.01, sc);
      const double d2 = std::exp(-0.1 * std::pow(2.0, s)), d3 = std::exp(-0.1 * std::pow(3.0, s));
      const auto ex = PeriodicField::from_function(32, [=](double x) { return d2 * std::cos(2 * x) + 0.5 * d3 * std::sin(3 * x); });
      CHECK(max_abs_diff(u, ex) < 1e-13);
    }
  }
}

TEST_CASE("evolve: heat from cos x") {
  const auto heat = make_model(ModelSpec{});
  const auto u0 = PeriodicField::from_function(32, [](double x) { return std::cos(x); });
  StepperConfig c;
  c.dt = 0.01;
  EvolveOptions o;
  o.keep_snapshots = true;
  const auto tr = evolve(*heat, u0, 1.0, c, o);
  REQUIRE(tr.snapshots.size() == 101);
  const auto ex = PeriodicField::from_function(32, [](double x) { return std::exp(-1.0) * std::cos(x); });
  CHECK(max_abs_diff(tr.snapshots.back(), ex) < 1e-10);
  CHECK(tr.times.back() == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("times increasing, l2 strictly decreasing") {
    const auto l2 = tr.column("l2");
    for (std::size_t i = 1; i < l2.size(); ++i) {
      CHECK(tr.times[i] > tr.times[i - 1]);
      CHECK(l2[i] < l2[i - 1]);
    }
  }
  SUBCASE("ledger recomputable from snapshots") {
    for (std::size_t i = 0; i < tr.snapshots.size(); i += 17) {
      const auto row = make_ledger_row(tr.times[i], tr.snapshots[i], tr.quantities, false);
      CHECK(row.norms.l2 == tr.ledger[i].norms.l2);
      CHECK(row.norms.linf == tr.ledger[i].norms.linf);
      CHECK(row.norms.mean == tr.ledger[i].norms.mean);
    }
  }
  SUBCASE("deterministic") {
    const auto again = evolve(*heat, u0, 1.0, c, o);
    CHECK(to_vec(again.snapshots.back()) == to_vec(tr.snapshots.back()));
    CHECK(again.column("l2") == tr.column("l2"));
  }
  SUBCASE("stride") {
    EvolveOptions s;
    s.ledger_stride = 30;
    const auto sparse = evolve(*heat, u0, 1.0, c, s);
    // 0, 30, 60, 90, and the final step
    CHECK(sparse.ledger.size() == 5);
    CHECK(sparse.ledger.back().t == doctest::Approx(1.0));
  }
  SUBCASE("horizon must be a multiple of dt") {
    CHECK_THROWS_AS(evolve(*heat, u0, 1.005, StepperConfig{.dt = 0.01}, o), PreconditionError);
  }
}

TEST_CASE("MCF self-convergence under dt halving") {
  const auto mcf = make_model(ModelSpec{.tag = ModelTag::mcf_graph});
  const auto u0 = triangle(64, 0.3);
  const double o1 = observed_order(*mcf, u0, 0.01, 1e-3, Scheme::imex_frozen_phi);
  const double o2 = observed_order(*mcf, u0, 0.01, 1e-3, Scheme::etd_rk2);
  MESSAGE("ETD1 order " << o1 << ", ETD-RK2 order " << o2);
  CHECK(o1 > 0.8);
  CHECK(o1 < 1.3);
  CHECK(o2 > 1.8);
}

TEST_CASE("frozen pointwise step") {
  SUBCASE("space-independent symbol reproduces the exponential Euler step") {
    const auto mcf = make_model(ModelSpec{.tag = ModelTag::mcf_graph});
    const auto u = PeriodicField::from_function(64, [](double x) { return 0.2 * std::sin(x) + 0.05 * std::cos(3 * x); });
    const auto a = frozen_pointwise_step(u, *mcf, 1e-3);
    const auto b = imex_frozen_phi_step(u, *mcf, 1e-3);
    CHECK(max_abs_diff(a, b) < 1e-10);
  }
  const auto vc = make_model(ModelSpec{.tag = ModelTag::varcoef_heat});
  const auto u0 = PeriodicField::from_function(64, [](double x) { return std::cos(x) + 0.3 * std::sin(2 * x); });
  SUBCASE("variable-coefficient heat self-converges") {
    const double o = observed_order(*vc, u0, 0.05, 2.5e-3, Scheme::frozen_pointwise);
    MESSAGE("pointwise order " << o);
    CHECK(o > 0.8);
  }
  SUBCASE("gap to the constant-frozen scheme shrinks linearly in dt") {
    double prev = 0.0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      const double gap = max_abs_diff(run_to(*vc, u0, 0.04, dt, Scheme::frozen_pointwise),
                                      run_to(*vc, u0, 0.04, dt, Scheme::imex_frozen_phi));
      if (prev > 0.0) CHECK(prev / gap == doctest::Approx(2.0).epsilon(0.25));
      prev = gap;
    }
  }
  SUBCASE("guards") {
    CHECK_THROWS_AS(frozen_pointwise_step(PeriodicField(2048), *vc, 1e-3), PreconditionError);
    CHECK_THROWS_AS(frozen_pointwise_step(PeriodicField(16, kTwoPi, 1, 2), *vc, 1e-3), PreconditionError);
  }
}

TEST_CASE("abort and guards") {
  SUBCASE("NaN aborts with the last healthy state") {
    LinearModel blow(0.0, 1.0, 2.0);
    const auto u0 = PeriodicField::from_function(16, [](double) { return 1.0; });
    try {
      evolve(blow, u0, 2.0, StepperConfig{.dt = 0.1});
      FAIL("expected NumericalAbort");
    } catch (const NumericalAbort& e) {
      REQUIRE(e.last_healthy.has_value());
      CHECK(e.last_healthy->all_finite());
      CHECK(e.t > 0.5);
      CHECK(e.t < 1.0);
      double m = 0.0;
      for (double v : e.last_healthy->samples()) m = std::max(m, v);
      // the RK2 stage trips the poison one step before the state itself crosses 2
      CHECK(m > 1.5);
    }
  }
  SUBCASE("dt guard from the remainder Lipschitz surrogate") {
    LinearModel stiff(0.0, 100.0);
    const auto u0 = PeriodicField::from_function(16, [](double x) { return std::sin(x); });
    CHECK(remainder_lipschitz(stiff, u0) == doctest::Approx(100.0).epsilon(1e-8));
    CHECK_THROWS_AS(evolve(stiff, u0, 0.02, StepperConfig{.dt = 0.01}), PreconditionError);
    CHECK_NOTHROW(evolve(stiff, u0, 0.02, StepperConfig{.dt = 0.004}));
    CHECK_NOTHROW(evolve(stiff, u0, 0.02, StepperConfig{.dt = 0.01, .dt_guard = false}));
  }
  SUBCASE("component mismatch") {
    const auto heat = make_model(ModelSpec{});
    CHECK_THROWS_AS(evolve(*heat, PeriodicField(16, kTwoPi, 2), 0.1, StepperConfig{.dt = 0.01}),
                    PreconditionError);
  }
}

TEST_CASE("Picard solve") {
  SUBCASE("zero nonlinearity converges at once") {
    const auto heat = make_model(ModelSpec{});
    const auto u0 = PeriodicField::from_function(32, [](double x) { return std::cos(x); });
    const auto r = picard_solve(*heat, u0, 0.1, StepperConfig{.dt = 0.01});
    CHECK(r.log.converged_iterate == 1);
    CHECK(r.log.distances[1] == 0.0);
    const auto ex = PeriodicField::from_function(32, [](double x) { return std::exp(-0.1) * std::cos(x); });
    CHECK(max_abs_diff(r.trajectory.snapshots.back(), ex) < 1e-13);
  }
  SUBCASE("MCF small data contracts to the exponential Euler trajectory") {
    const auto mcf = make_model(ModelSpec{.tag = ModelTag::mcf_graph});
    const auto u0 = PeriodicField::from_function(64, [](double x) { return 0.05 * std::sin(x); });
    StepperConfig c{.dt = 1e-3, .scheme = Scheme::imex_frozen_phi, .picard_tol = 1e-12};
    const auto r = picard_solve(*mcf, u0, 0.1, c);
    REQUIRE(r.log.converged_iterate > 0);
    CHECK(r.log.ratios.front() == 1.0);
    for (std::size_t i = 1; i < r.log.ratios.size(); ++i) CHECK(r.log.ratios[i] < 0.5);

    c.dt_guard = false;
    const auto direct = evolve(*mcf, u0, 0.1, c, EvolveOptions{.keep_snapshots = true});
    CHECK(max_abs_diff(direct.snapshots.back(), r.trajectory.snapshots.back()) < 10 * c.picard_tol);

    const auto again = picard_map(*mcf, u0, r.trajectory.snapshots, c.dt);
    double moved = 0.0;
    for (std::size_t m = 0; m < again.size(); ++m)
      moved = std::max(moved, max_abs_diff(again[m], r.trajectory.snapshots[m]));
    CHECK(moved <= 2 * c.picard_tol);
  }
  SUBCASE("strong growth is reported as non-contraction") {
    LinearModel grow(0.0, 50.0);
    const auto u0 = PeriodicField::from_function(16, [](double x) { return 1.0 + std::cos(x); });
    try {
      picard_solve(grow, u0, 1.0, StepperConfig{.dt = 0.01});
      FAIL("expected NonContraction");
    } catch (const NonContraction& e) {
      REQUIRE(e.log.ratios.size() >= 4);
      const auto n = e.log.ratios.size();
      for (std::size_t i = n - 3; i < n; ++i) CHECK(e.log.ratios[i] >= 1.0);
    }
  }
}

TEST_CASE("ledger quantities") {
  CHECK(LedgerQuantity::parse("dsup:2").column() == "dsup2");
  CHECK(LedgerQuantity::parse("holder:1:0.5").column() == "holder1_0.5");
  CHECK(LedgerQuantity::parse("area").column() == "area");
  CHECK_THROWS(LedgerQuantity::parse("bogus"));
  const auto u = PeriodicField::from_function(64, [](double x) { return std::sin(x); });
  CHECK(LedgerQuantity::parse("dsup:2").measure(u) == doctest::Approx(1.0).epsilon(1e-12));
}
