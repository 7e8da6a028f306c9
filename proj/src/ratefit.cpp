#include "plab/ratefit.hpp"

#include <algorithm>
#include <cmath>

namespace plab {

std::string to_string(FitKind kind) {
  return kind == FitKind::power_law ? "power_law" : "exponential";
}

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;
  double r_squared = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw PreconditionError("fit abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ssr += r * r;
  }
  // exact fits leave only round-off in the residual
  if (ssr <= 1e-24 * std::max(1.0, syy)) ssr = 0.0;
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  f.stderr_ = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  return f;
}

RateFit fit(FitKind kind, const std::vector<double>& times, const std::vector<double>& values,
            std::pair<double, double> window) {
  if (times.size() != values.size()) throw PreconditionError("times and values differ in length");
  if (!(window.first < window.second)) throw PreconditionError("empty fit window");
  std::vector<double> x, y;
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window.first || t > window.second) continue;
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw PreconditionError("fit values must be positive and finite");
    if (kind == FitKind::power_law && !(t > 0.0))
      throw PreconditionError("power-law fit needs positive times");
    if (x.empty()) lo = t;
    hi = t;
    x.push_back(kind == FitKind::power_law ? std::log(t) : t);
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 4) throw PreconditionError("fit window holds fewer than 4 points");
  const LineFit lf = least_squares(x, y);
  RateFit r;
  r.kind = kind;
  r.estimate = kind == FitKind::power_law ? lf.slope : -lf.slope;
  r.stderr_ = lf.stderr_;
  r.r_squared = lf.r_squared;
  r.window = {lo, hi};
  r.n_points = static_cast<int>(x.size());
  r.intercept = lf.intercept;
  return r;
}

}  // namespace

RateFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values,
                      std::pair<double, double> window) {
  return fit(FitKind::power_law, times, values, window);
}

RateFit fit_exponential(const std::vector<double>& times, const std::vector<double>& values,
                        std::pair<double, double> window) {
  return fit(FitKind::exponential, times, values, window);
}

std::vector<SmoothingFit> smoothing_report(const Trajectory& traj, double s,
                                           const std::vector<SmoothingTarget>& targets,
                                           std::optional<std::pair<double, double>> window) {
  if (!(s > 0.0)) throw PreconditionError("order s must be positive");
  if (traj.times.size() < 2) throw PreconditionError("trajectory too short");
  const auto columns = traj.columns();
  std::pair<double, double> w;
  if (window) {
    w = *window;
  } else {
    const double t1 = traj.times[1];
    w = {10.0 * t1, traj.times.back() / 10.0};
  }
  const auto times = traj.column("t");
  std::vector<SmoothingFit> out;
  for (const auto& target : targets) {
    if (std::find(columns.begin(), columns.end(), target.column) == columns.end())
      throw PreconditionError("ledger has no column '" + target.column + "'");
    SmoothingFit f;
    f.column = target.column;
    f.expected = -(target.order - target.data_regularity) / s;
    f.fit = fit_power_law(times, traj.column(target.column), w);
    out.push_back(f);
  }
  return out;
}

ContractionReport contraction_report(const std::vector<double>& ratios) {
  if (ratios.size() < 3) throw PreconditionError("contraction report needs at least 3 iterates");
  ContractionReport rep;
  for (std::size_t i = 1; i < ratios.size(); ++i) rep.max_ratio = std::max(rep.max_ratio, ratios[i]);
  // distances relative to the first one, d_i = Π_{j ≤ i} r_j
  std::vector<double> idx, logd;
  double d = 1.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (i > 0) d *= ratios[i];
    if (!(d > 0.0)) break;
    idx.push_back(static_cast<double>(i));
    logd.push_back(std::log(d));
  }
  if (idx.size() >= 2) {
    const LineFit lf = least_squares(idx, logd);
    rep.geometric_fit.kind = FitKind::exponential;
    rep.geometric_fit.estimate = -lf.slope;
    rep.geometric_fit.stderr_ = lf.stderr_;
    rep.geometric_fit.r_squared = lf.r_squared;
    rep.geometric_fit.window = {idx.front(), idx.back()};
    rep.geometric_fit.n_points = static_cast<int>(idx.size());
    rep.geometric_fit.intercept = lf.intercept;
  }
  const std::size_t m = ratios.size();
  rep.non_contractive_trend =
      rep.max_ratio >= 0.9 || (m >= 3 && ratios[m - 1] > ratios[m - 2] && ratios[m - 1] >= 0.5);
  return rep;
}

ContractionReport contraction_report(const ContractionLog& log) {
  return contraction_report(log.ratios);
}

}  // namespace plab
