#include "plab/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plab/nonlocal_ops.hpp"

namespace plab {

ModelTag parse_model_tag(const std::string& s) {
  if (s == "mcf_graph") return ModelTag::mcf_graph;
  if (s == "nonlocal_mcf") return ModelTag::nonlocal_mcf;
  if (s == "peskin2d") return ModelTag::peskin2d;
  if (s == "muskat_st") return ModelTag::muskat_st;
  if (s == "surface_diffusion_axi") return ModelTag::surface_diffusion_axi;
  if (s == "thinfilm_exp") return ModelTag::thinfilm_exp;
  if (s == "heat") return ModelTag::heat;
  if (s == "varcoef_heat") return ModelTag::varcoef_heat;
  throw PreconditionError("unknown model tag '" + s + "'");
}

std::string to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::mcf_graph: return "mcf_graph";
    case ModelTag::nonlocal_mcf: return "nonlocal_mcf";
    case ModelTag::peskin2d: return "peskin2d";
    case ModelTag::muskat_st: return "muskat_st";
    case ModelTag::surface_diffusion_axi: return "surface_diffusion_axi";
    case ModelTag::thinfilm_exp: return "thinfilm_exp";
    case ModelTag::heat: return "heat";
    case ModelTag::varcoef_heat: return "varcoef_heat";
  }
  return "?";
}

double ModelSpec::order_s() const {
  switch (tag) {
    case ModelTag::mcf_graph: return 2.0;
    case ModelTag::nonlocal_mcf: return 1.0 + a;
    case ModelTag::peskin2d: return 1.0;
    case ModelTag::muskat_st: return 3.0;
    case ModelTag::surface_diffusion_axi: return 4.0;
    case ModelTag::thinfilm_exp: return 4.0;
    case ModelTag::heat: return s;
    case ModelTag::varcoef_heat: return 2.0;
  }
  return 0.0;
}

PeriodicField mollify(const PeriodicField& f, double cells) {
  if (cells <= 0.0) return f;
  const double sigma = cells * f.spacing();
  return apply_multiplier(f, [sigma](double k) { return cplx(std::exp(-0.5 * sigma * sigma * k * k), 0.0); });
}

// ---------------------------------------------------------------------------
// Right-hand sides

PeriodicField mcf_rhs(const PeriodicField& f) {
  const PeriodicField fx = derivative(f, 1);
  PeriodicField out = derivative(f, 2);
  for (std::size_t i = 0; i < f.n(); ++i) out[i] /= 1.0 + fx[i] * fx[i];
  return out;
}

double mcf_symbol(double phi_x, double xi) { return xi * xi / (1.0 + phi_x * phi_x); }

PeriodicField nonlocal_mcf_rhs(const PeriodicField& u, double a, int periods) {
  FmcOptions opt;
  opt.periods = periods;
  PeriodicField h = fractional_mean_curvature(u, a, 2, opt);
  const PeriodicField ux = derivative(u, 1);
  for (std::size_t i = 0; i < u.n(); ++i) h[i] *= -std::sqrt(1.0 + ux[i] * ux[i]);
  return h;
}

namespace {

PeriodicField maybe_dealias(PeriodicField f, bool on) { return on ? dealias(f) : f; }

PeriodicField pointwise(const PeriodicField& a, const PeriodicField& b,
                        const std::function<double(double, double)>& op) {
  PeriodicField out(a.n(), a.length());
  for (std::size_t i = 0; i < a.n(); ++i) out[i] = op(a[i], b[i]);
  return out;
}

}  // namespace

PeriodicField surface_diffusion_rhs(const PeriodicField& h, bool dealias_products) {
  const PeriodicField hx = derivative(h, 1);
  const PeriodicField hxx = derivative(h, 2);
  PeriodicField curv(h.n(), h.length());
  PeriodicField weight(h.n(), h.length());
  for (std::size_t i = 0; i < h.n(); ++i) {
    const double j = std::sqrt(1.0 + hx[i] * hx[i]);
    curv[i] = 1.0 / (h[i] * j) - hxx[i] / (j * j * j);
    weight[i] = h[i] / j;
  }
  curv = maybe_dealias(curv, dealias_products);
  PeriodicField flux =
      pointwise(weight, derivative(curv, 1), [](double w, double c) { return w * c; });
  flux = maybe_dealias(flux, dealias_products);
  PeriodicField out = derivative(flux, 1);
  for (std::size_t i = 0; i < h.n(); ++i) out[i] /= h[i];
  return out;
}

PeriodicField thinfilm_rhs(const PeriodicField& u, bool dealias_products) {
  PeriodicField e = derivative(u, 2);
  for (double& v : e.samples()) v = std::exp(-v);
  return derivative(maybe_dealias(e, dealias_products), 2);
}

double theta_monitor(const PeriodicField& x) { return well_stretched_theta(x).theta; }

double enclosed_area(const PeriodicField& x) {
  if (x.components() != 2) throw PreconditionError("area needs a planar curve");
  const PeriodicField dx = derivative(x, 1);
  const std::size_t n = x.n();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * dx[n + i] - x[n + i] * dx[i];
  return 0.5 * sum * x.spacing();
}

double circle_distance(const PeriodicField& x) {
  if (x.components() != 2) throw PreconditionError("circle distance needs a planar curve");
  const auto c = to_spectral(x);
  const std::size_t n = x.n();
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = frequency_index(i, n);
    if (k == 0 || k == 1) continue;
    const cplx z = c.modes[i] + cplx(0.0, 1.0) * c.modes[n + i];
    sq += std::norm(z);
  }
  return std::sqrt(sq * x.length()) / static_cast<double>(n);
}

double varcoef_heat_coefficient(double x) { return 1.25 + 0.75 * std::sin(x); }

// ---------------------------------------------------------------------------
// Models

namespace {

PeriodicField zeros_like(const PeriodicField& u) {
  return PeriodicField(u.n(), u.length(), u.components(), u.dims());
}

void require_torus_graph(const PeriodicField& u, const char* who) {
  if (u.dims() != 1 || u.components() != 1)
    throw PreconditionError(std::string(who) + " expects a scalar 1D field");
}

class HeatModel final : public SplitModel {
 public:
  explicit HeatModel(double s) : s_(s) {
    if (!(s > 0.0)) throw PreconditionError("heat order must be positive");
  }
  std::string name() const override { return "heat"; }
  double order() const override { return s_; }
  double linear_rate(double xi) const override { return std::pow(std::abs(xi), s_); }
  PeriodicField remainder(const PeriodicField& u) const override { return zeros_like(u); }

 private:
  double s_;
};

class VarCoefHeatModel final : public SplitModel {
 public:
  std::string name() const override { return "varcoef_heat"; }
  double order() const override { return 2.0; }
  double linear_rate(double xi) const override { return kMean * xi * xi; }
  PeriodicField remainder(const PeriodicField& u) const override {
    PeriodicField out = derivative(u, 2);
    for (std::size_t i = 0; i < u.n(); ++i) out[i] *= varcoef_heat_coefficient(u.x(i)) - kMean;
    return out;
  }
  double pointwise_rate(double x, double xi) const override {
    return varcoef_heat_coefficient(x) * xi * xi;
  }
  PeriodicField pointwise_remainder(const PeriodicField& u) const override {
    return zeros_like(u);
  }

 private:
  static constexpr double kMean = 1.25;
};

class McfModel final : public SplitModel {
 public:
  explicit McfModel(const PeriodicField& phi) {
    if (phi.n() == 0) return;
    const PeriodicField px = derivative(phi, 1);
    inv_.resize(phi.n());
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.n(); ++i) {
      inv_[i] = 1.0 / (1.0 + px[i] * px[i]);
      sum += inv_[i];
    }
    frozen_ = sum / static_cast<double>(phi.n());
    spacing_ = phi.spacing();
  }
  std::string name() const override { return "mcf_graph"; }
  double order() const override { return 2.0; }
  double linear_rate(double xi) const override { return frozen_ * xi * xi; }
  PeriodicField remainder(const PeriodicField& f) const override {
    require_torus_graph(f, "mcf_graph");
    PeriodicField out = mcf_rhs(f);
    const PeriodicField fxx = derivative(f, 2);
    for (std::size_t i = 0; i < f.n(); ++i) out[i] -= frozen_ * fxx[i];
    return out;
  }
  double pointwise_rate(double x, double xi) const override {
    return coefficient_at(x) * xi * xi;
  }
  PeriodicField pointwise_remainder(const PeriodicField& f) const override {
    PeriodicField out = mcf_rhs(f);
    const PeriodicField fxx = derivative(f, 2);
    for (std::size_t i = 0; i < f.n(); ++i) out[i] -= coefficient_at(f.x(i)) * fxx[i];
    return out;
  }

 private:
  double coefficient_at(double x) const {
    if (inv_.empty()) return 1.0;
    const auto n = static_cast<long>(inv_.size());
    long i = std::lround(x / spacing_) % n;
    if (i < 0) i += n;
    return inv_[static_cast<std::size_t>(i)];
  }
  std::vector<double> inv_;
  double frozen_ = 1.0;
  double spacing_ = 1.0;
};

class NonlocalMcfModel final : public SplitModel {
 public:
  NonlocalMcfModel(double a, int periods) : a_(a), periods_(periods), ca_(fmc_linear_constant(a)) {}
  std::string name() const override { return "nonlocal_mcf"; }
  double order() const override { return 1.0 + a_; }
  double linear_rate(double xi) const override { return ca_ * std::pow(std::abs(xi), 1.0 + a_); }
  PeriodicField remainder(const PeriodicField& u) const override {
    require_torus_graph(u, "nonlocal_mcf");
    PeriodicField out = nonlocal_mcf_rhs(u, a_, periods_);
    out -= apply_linear(u);
    return out;
  }

 private:
  double a_;
  int periods_;
  double ca_;
};

class PeskinModel final : public SplitModel {
 public:
  PeskinModel(TensionLaw tension, double theta_cap)
      : tension_(std::move(tension)), theta_cap_(theta_cap) {}
  std::string name() const override { return "peskin2d"; }
  double order() const override { return 1.0; }
  int components() const override { return 2; }
  bool is_contour() const override { return true; }
  double linear_rate(double xi) const override { return 0.25 * std::abs(xi); }
  PeriodicField remainder(const PeriodicField& x) const override {
    PeriodicField out = peskin_rhs(x, tension_, theta_cap_);
    out -= apply_linear(x);
    return out;
  }

 private:
  TensionLaw tension_;
  double theta_cap_;
};

class MuskatModel final : public SplitModel {
 public:
  explicit MuskatModel(double rho0) : rho0_(rho0) {}
  std::string name() const override { return "muskat_st"; }
  double order() const override { return 3.0; }
  double linear_rate(double xi) const override {
    const double k = std::abs(xi);
    return k * k * k + rho0_ * k;
  }
  PeriodicField remainder(const PeriodicField& f) const override {
    require_torus_graph(f, "muskat_st");
    PeriodicField out = muskat_st_rhs(f, rho0_);
    out -= apply_linear(f);
    // the continuous right-hand side is an exact derivative
    double mean = 0.0;
    for (double v : out.samples()) mean += v;
    mean /= static_cast<double>(out.n());
    for (double& v : out.samples()) v -= mean;
    return out;
  }

 private:
  double rho0_;
};

class SurfaceDiffusionModel final : public SplitModel {
 public:
  explicit SurfaceDiffusionModel(double hbar0) : hbar0_(hbar0) {
    if (!(hbar0 > 1.0)) throw PreconditionError("surface diffusion needs hbar0 > 1");
  }
  std::string name() const override { return "surface_diffusion_axi"; }
  double order() const override { return 4.0; }
  double linear_rate(double xi) const override {
    return xi * xi * xi * xi - xi * xi / (hbar0_ * hbar0_);
  }
  PeriodicField remainder(const PeriodicField& h) const override {
    require_torus_graph(h, "surface_diffusion_axi");
    check_state(h);
    PeriodicField out = surface_diffusion_rhs(h);
    out -= apply_linear(h);
    return out;
  }
  void check_state(const PeriodicField& h) const override {
    const double lo = *std::min_element(h.samples().begin(), h.samples().end());
    if (!(lo > 0.0)) {
      std::ostringstream msg;
      msg << "surface diffusion radius lost positivity: min h = " << lo;
      throw NumericalAbort(msg.str());
    }
  }

 private:
  double hbar0_;
};

class ThinFilmModel final : public SplitModel {
 public:
  std::string name() const override { return "thinfilm_exp"; }
  double order() const override { return 4.0; }
  double linear_rate(double xi) const override { return xi * xi * xi * xi; }
  PeriodicField remainder(const PeriodicField& u) const override {
    require_torus_graph(u, "thinfilm_exp");
    PeriodicField g = derivative(u, 2);
    for (double& v : g.samples()) v = std::expm1(-v) + v;
    return derivative(g, 2);
  }
};

}  // namespace

std::unique_ptr<SplitModel> make_model(const ModelSpec& spec, const PeriodicField& phi) {
  switch (spec.tag) {
    case ModelTag::mcf_graph: return std::make_unique<McfModel>(phi);
    case ModelTag::nonlocal_mcf:
      if (!(spec.a > 0.0 && spec.a < 1.0)) throw PreconditionError("model.a must lie in (0, 1)");
      return std::make_unique<NonlocalMcfModel>(spec.a, spec.fmc_periods);
    case ModelTag::peskin2d:
      if (!spec.tension.structure_ok(1e-3, 1e3))
        throw PreconditionError("tension law violates 𝒯 > 0, 𝒯' > 0");
      return std::make_unique<PeskinModel>(spec.tension, spec.theta_cap);
    case ModelTag::muskat_st: return std::make_unique<MuskatModel>(spec.rho0);
    case ModelTag::surface_diffusion_axi: return std::make_unique<SurfaceDiffusionModel>(spec.hbar0);
    case ModelTag::thinfilm_exp: return std::make_unique<ThinFilmModel>();
    case ModelTag::heat: return std::make_unique<HeatModel>(spec.s);
    case ModelTag::varcoef_heat: return std::make_unique<VarCoefHeatModel>();
  }
  throw PreconditionError("unknown model");
}

}  // namespace plab
