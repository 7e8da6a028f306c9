#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "plab/grid.hpp"

using namespace plab;

namespace {

PeriodicField random_field(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  PeriodicField f(n);
  for (auto& v : f.samples()) v = uni(rng);
  return f;
}

// band-limited to |k| <= kmax
PeriodicField random_band(std::size_t n, int kmax, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int k = 1; k <= kmax; ++k) {
    a[k] = uni(rng);
    b[k] = uni(rng);
  }
  const double c = uni(rng);
  return PeriodicField::from_function(n, [&](double x) {
    double v = c;
    for (int k = 1; k <= kmax; ++k) v += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
    return v;
  });
}

double max_abs_diff(const PeriodicField& a, const PeriodicField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.samples().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double linf(const PeriodicField& a) {
  double m = 0.0;
  for (double v : a.samples()) m = std::max(m, std::abs(v));
  return m;
}

PeriodicField shifted(const PeriodicField& f, std::size_t s) {
  PeriodicField g(f.n(), f.length());
  for (std::size_t i = 0; i < f.n(); ++i) g[i] = f[(i + s) % f.n()];
  return g;
}

}  // namespace

TEST_CASE("field construction enforces the grid invariants") {
  CHECK_THROWS_AS(PeriodicField(12), PreconditionError);
  CHECK_THROWS_AS(PeriodicField(8), PreconditionError);
  CHECK_NOTHROW(PeriodicField(16));
  CHECK_THROWS_AS(PeriodicField(16, 2.0 * std::numbers::pi, 4), PreconditionError);
  CHECK_THROWS_AS(PeriodicField(16, -1.0), PreconditionError);
}

TEST_CASE("to_spectral: DC and single harmonic") {
  const auto c = PeriodicField::from_function(64, [](double) { return 2.5; });
  const auto hc = to_spectral(c);
  CHECK(hc.mode(0).real() == doctest::Approx(2.5 * 64));
  for (int k = 1; k < 32; ++k) CHECK(std::abs(hc.mode(k)) < 1e-12);

  const auto f = PeriodicField::from_function(64, [](double x) { return std::cos(x); });
  const auto hf = to_spectral(f);
  CHECK(hf.mode(1).real() == doctest::Approx(32.0));
  CHECK(hf.mode(-1).real() == doctest::Approx(32.0));
  for (int k = -32; k < 32; ++k)
    if (std::abs(k) != 1) CHECK(std::abs(hf.mode(k)) < 1e-12);
}

TEST_CASE("to_spectral matches the naive DFT and round-trips") {
  std::mt19937_64 rng(1);
  const auto f = random_field(64, rng);
  const auto hat = to_spectral(f);
  const auto ref = oracle::naive_dft(std::vector<double>(f.samples().begin(), f.samples().end()));
  for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(hat.modes[k] - ref[k]) < 1e-11);
  for (int k = 1; k < 32; ++k) CHECK(std::abs(hat.mode(-k) - std::conj(hat.mode(k))) < 1e-12);
  CHECK(max_abs_diff(to_physical(hat), f) <= 1e-12);
}

TEST_CASE("Parseval for 100 random fields") {
  std::mt19937_64 rng(2);
  for (int r = 0; r < 100; ++r) {
    const auto f = random_field(128, rng);
    const auto hat = to_spectral(f);
    double s = 0.0;
    for (const auto& m : hat.modes) s += std::norm(m);
    // ∫f² = (L/N²) Σ|f̂|²
    const double spec = s * f.length() / (128.0 * 128.0);
    const double l2 = norms(f).l2;
    CHECK(std::abs(l2 * l2 - spec) <= 1e-10 * spec);
  }
}

TEST_CASE("fractional_laplacian") {
  const auto c3 = PeriodicField::from_function(64, [](double x) { return std::cos(3 * x); });
  CHECK(max_abs_diff(fractional_laplacian(c3, 1.0), 3.0 * c3) < 1e-12);
  const auto c1 = PeriodicField::from_function(64, [](double x) { return std::cos(x); });
  CHECK(max_abs_diff(fractional_laplacian(c1, 2.0), c1) < 1e-12);
  CHECK_THROWS_AS(fractional_laplacian(c1, 0.0), PreconditionError);
  CHECK_THROWS_AS(fractional_laplacian(c1, -1.0), PreconditionError);

  SUBCASE("sawtooth against a dense multiplier") {
    const auto saw = PeriodicField::from_function(
        64, [](double x) { return 4.0 * std::abs(x / (2 * oracle::pi) - 0.5) - 1.0; });
    const auto got = fractional_laplacian(saw, 0.5);
    // even multiplier, Nyquist slot kept
    const auto ref = oracle::dense_multiplier(
        std::vector<double>(saw.samples().begin(), saw.samples().end()),
        [](int k) { return std::pow(std::abs(k), 0.5); });
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 64; ++i) {
      num = std::max(num, std::abs(got[i] - ref[i]));
      den = std::max(den, std::abs(ref[i]));
    }
    CHECK(num <= 1e-10 * den);
  }

  SUBCASE("semigroup on band-limited fields") {
    std::mt19937_64 rng(3);
    const auto f = random_band(64, 10, rng);
    const auto ab = fractional_laplacian(fractional_laplacian(f, 0.7), 1.1);
    const auto direct = fractional_laplacian(f, 1.8);
    CHECK(max_abs_diff(ab, direct) <= 1e-10 * linf(direct));
  }
}

TEST_CASE("hilbert_transform convention") {
  const auto one = PeriodicField::from_function(64, [](double) { return 1.0; });
  CHECK(linf(hilbert_transform(one)) < 1e-14);

  auto fsin = [](double x) { return std::sin(x) + 0.3 * std::cos(2.0 * x); };
  const auto f = PeriodicField::from_function(64, fsin);
  const auto hf = hilbert_transform(f);
  for (std::size_t i : {0u, 5u, 17u, 40u}) CHECK(std::abs(hf[i] - oracle::pv_hilbert(fsin, f.x(i))) < 1e-6);

  const auto s = PeriodicField::from_function(64, [](double x) { return std::sin(x); });
  const auto c = PeriodicField::from_function(64, [](double x) { return std::cos(x); });
  CHECK(max_abs_diff(hilbert_transform(s), -1.0 * c) < 1e-13);

  SUBCASE("H² = -(Id - mean)") {
    std::mt19937_64 rng(4);
    const auto g = random_band(64, 20, rng);
    const auto hh = hilbert_transform(hilbert_transform(g));
    const double mean = norms(g).mean;
    PeriodicField expect = g;
    for (auto& v : expect.samples()) v = -(v - mean);
    CHECK(max_abs_diff(hh, expect) <= 1e-10 * linf(expect));
  }

  SUBCASE("commutes with grid shifts") {
    std::mt19937_64 rng(5);
    const auto g = random_field(64, rng);
    for (std::size_t sh : {1u, 7u, 33u})
      CHECK(max_abs_diff(hilbert_transform(shifted(g, sh)), shifted(hilbert_transform(g), sh)) <= 1e-12);
  }

  PeriodicField two_d(16, 2.0 * std::numbers::pi, 1, 2);
  CHECK_THROWS_AS(hilbert_transform(two_d), PreconditionError);
}

TEST_CASE("finite differences") {
  const auto c = PeriodicField::from_function(64, [](double) { return 1.7; });
  CHECK(linf(finite_difference(c, 3, DifferenceKind::plain)) == 0.0);
  CHECK_THROWS_AS(finite_difference(c, 0, DifferenceKind::quotient), PreconditionError);
  CHECK_THROWS_AS(finite_difference(c, 0, DifferenceKind::symmetric), PreconditionError);
  CHECK_THROWS_AS(finite_difference(c, 0.05, DifferenceKind::plain), PreconditionError);

  SUBCASE("Δ_α sin → cos with O(α) error") {
    const std::size_t n = 1024;
    const auto s = PeriodicField::from_function(n, [](double x) { return std::sin(x); });
    const auto cs = PeriodicField::from_function(n, [](double x) { return std::cos(x); });
    const double e1 = max_abs_diff(finite_difference(s, 4, DifferenceKind::quotient), cs);
    const double e2 = max_abs_diff(finite_difference(s, 2, DifferenceKind::quotient), cs);
    const double e3 = max_abs_diff(finite_difference(s, 1, DifferenceKind::quotient), cs);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.02));
    CHECK(e2 / e3 == doctest::Approx(2.0).epsilon(0.02));
  }

  SUBCASE("𝒪_α cos against direct evaluation") {
    const auto f = PeriodicField::from_function(64, [](double x) { return std::cos(x); });
    for (int cells : {1, 5, -3}) {
      const double alpha = cells * f.spacing();
      const auto o = finite_difference(f, cells, DifferenceKind::symmetric);
      for (std::size_t i = 0; i < 64; ++i) {
        const double x = f.x(i);
        const double direct = (2.0 * std::cos(x) - std::cos(x - alpha) - std::cos(x + alpha)) / std::abs(alpha);
        CHECK(o[i] == doctest::Approx(direct).epsilon(1e-12));
        CHECK(o[i] == doctest::Approx(2.0 * (1.0 - std::cos(alpha)) / std::abs(alpha) * std::cos(x))
                          .epsilon(1e-10).scale(1.0));
      }
    }
  }

  SUBCASE("distance and cell forms agree") {
    std::mt19937_64 rng(6);
    const auto g = random_field(64, rng);
    CHECK(max_abs_diff(finite_difference(g, 3 * g.spacing(), DifferenceKind::quotient),
                       finite_difference(g, 3, DifferenceKind::quotient)) == 0.0);
  }
}

TEST_CASE("holder_seminorm") {
  const auto c = PeriodicField::from_function(64, [](double) { return 3.0; });
  CHECK(holder_seminorm(c, 0, 0.5).value == 0.0);

  SUBCASE("exhaustive shift oracle for cos") {
    const auto f = PeriodicField::from_function(256, [](double x) { return std::cos(x); });
    const auto est = holder_seminorm(f, 0, 0.5);
    double ref = 0.0;
    for (double h : est.scales_used) {
      const int cells = static_cast<int>(std::lround(h / f.spacing()));
      double m = 0.0;
      for (std::size_t i = 0; i < f.n(); ++i)
        m = std::max(m, std::abs(f[i] - f[(i + f.n() - cells) % f.n()]));
      ref = std::max(ref, m / std::pow(h, 0.5));
    }
    CHECK(std::abs(est.value - ref) <= 1e-12);
    // dyadic scales h = L/N, ..., L/4
    CHECK(est.scales_used.size() == 7);
    CHECK(est.scales_used.front() == doctest::Approx(f.spacing()));
    CHECK(est.scales_used.back() == doctest::Approx(f.length() / 4));
    // running max over the scales is nondecreasing and ends at value
    double run = 0.0;
    for (double v : est.per_scale) {
      CHECK(std::max(run, v) >= run);
      run = std::max(run, v);
    }
    CHECK(run == est.value);
  }

  SUBCASE("|sin|: Lipschitz surrogate and corner growth") {
    auto abs_sin = [](double x) { return std::abs(std::sin(x)); };
    const auto f = PeriodicField::from_function(1024, abs_sin);
    const double lip = holder_seminorm(f, 0, 1.0).value;
    CHECK(lip == doctest::Approx(1.0).epsilon(1e-3));
    const double coarse = holder_seminorm(PeriodicField::from_function(128, abs_sin), 1, 0.5).value;
    const double fine = holder_seminorm(PeriodicField::from_function(1024, abs_sin), 1, 0.5).value;
    CHECK(fine > coarse);
  }

  SUBCASE("translation and sign invariance") {
    std::mt19937_64 rng(7);
    const auto g = random_band(128, 12, rng);
    const double v = holder_seminorm(g, 1, 0.5).value;
    CHECK(holder_seminorm(shifted(g, 11), 1, 0.5).value == doctest::Approx(v).epsilon(1e-12));
    CHECK(holder_seminorm(-1.0 * g, 1, 0.5).value == doctest::Approx(v).epsilon(1e-12));
  }

  SUBCASE("under-resolution flag") {
    std::mt19937_64 rng(8);
    CHECK(holder_seminorm(random_field(128, rng), 1, 0.5).under_resolved);
    CHECK_FALSE(holder_seminorm(random_band(128, 10, rng), 1, 0.5).under_resolved);
  }
}

TEST_CASE("norms") {
  const auto s = PeriodicField::from_function(64, [](double x) { return std::sin(x); });
  const auto ns = norms(s);
  CHECK(ns.l2 == doctest::Approx(std::sqrt(oracle::pi)).epsilon(1e-12));
  CHECK(ns.linf == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ns.mean) < 1e-15);

  const auto c = PeriodicField::from_function(64, [](double) { return -1.5; });
  const auto nc = norms(c);
  CHECK(nc.l2 == doctest::Approx(1.5 * std::sqrt(2.0 * oracle::pi)).epsilon(1e-14));
  CHECK(nc.linf == 1.5);
  CHECK(nc.mean == -1.5);

  std::mt19937_64 rng(9);
  const auto r = random_field(32, rng);
  double sq = 0.0, mx = 0.0, sum = 0.0;
  for (double v : r.samples()) {
    sq += v * v;
    mx = std::max(mx, std::abs(v));
    sum += v;
  }
  const auto nr = norms(r);
  CHECK(nr.l2 == doctest::Approx(std::sqrt(sq * r.spacing())).epsilon(1e-15));
  CHECK(nr.linf == mx);
  CHECK(nr.mean == doctest::Approx(sum / 32).epsilon(1e-15));
}

TEST_CASE("spectral derivative and dealias") {
  const auto s = PeriodicField::from_function(64, [](double x) { return std::sin(2 * x); });
  const auto c = PeriodicField::from_function(64, [](double x) { return 2 * std::cos(2 * x); });
  CHECK(max_abs_diff(derivative(s, 1), c) < 1e-12);
  CHECK(max_abs_diff(derivative(s, 2), -4.0 * s) < 1e-11);

  const auto hi = PeriodicField::from_function(64, [](double x) { return std::cos(30 * x) + std::cos(3 * x); });
  const auto lo = PeriodicField::from_function(64, [](double x) { return std::cos(3 * x); });
  CHECK(max_abs_diff(dealias(hi), lo) < 1e-12);
}
