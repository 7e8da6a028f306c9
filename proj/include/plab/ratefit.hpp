#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plab/stepper.hpp"

namespace plab {

enum class FitKind { power_law, exponential };

/// Least-squares fit of log(value) against log(t) (power law) or t (exponential).
/// For exponential fits `estimate` is the decay rate, i.e. minus the slope.
struct RateFit {
  FitKind kind = FitKind::power_law;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  int n_points = 0;
  double intercept = 0.0;
};

std::string to_string(FitKind kind);

/// Points with window.first <= t <= window.second enter the fit (at least 4, values > 0).
RateFit fit_power_law(const std::vector<double>& times, const std::vector<double>& values,
                      std::pair<double, double> window);
RateFit fit_exponential(const std::vector<double>& times, const std::vector<double>& values,
                        std::pair<double, double> window);

struct SmoothingTarget {
  std::string column;            ///< ledger column, e.g. "dsup2" or "holder1_0.5"
  double order = 0.0;            ///< derivative order measured by the column (k, or k + κ)
  double data_regularity = 0.0;  ///< regularity r of the initial data (1 for Lipschitz)
};

struct SmoothingFit {
  std::string column;
  RateFit fit;
  double expected = 0.0;  ///< -(order - r)/s
};

/// Power-law fit of each target column over `window` (default [10·t₁, T/10]).
std::vector<SmoothingFit> smoothing_report(const Trajectory& traj, double s,
                                           const std::vector<SmoothingTarget>& targets,
                                           std::optional<std::pair<double, double>> window = {});

struct ContractionReport {
  double max_ratio = 0.0;
  RateFit geometric_fit;  ///< exponential fit of iterate distances against the iterate index
  bool non_contractive_trend = false;
};

/// `ratios` as recorded by picard_solve: 1 for the first iterate, then successive ratios.
ContractionReport contraction_report(const std::vector<double>& ratios);
ContractionReport contraction_report(const ContractionLog& log);

}  // namespace plab
