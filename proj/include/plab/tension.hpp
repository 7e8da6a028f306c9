#pragma once

#include <functional>

namespace plab {

/// Elastic tension law λ ↦ 𝒯(λ) with derivative 𝒯'(λ).
struct TensionLaw {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static TensionLaw hookean() {
    return {[](double l) { return l; }, [](double) { return 1.0; }};
  }

  /// 𝐓(λ) = 𝒯(λ)/λ.
  double reduced(double lambda) const { return value(lambda) / lambda; }

  /// Checks 𝒯 > 0 and 𝒯' > 0 on [lo, hi]; returns false at the first failing probe.
  bool structure_ok(double lo, double hi, int probes = 64) const {
    for (int i = 0; i <= probes; ++i) {
      const double l = lo + (hi - lo) * i / probes;
      if (!(value(l) > 0.0) || !(derivative(l) > 0.0)) return false;
    }
    return true;
  }
};

}  // namespace plab
