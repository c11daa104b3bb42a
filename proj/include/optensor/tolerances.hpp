#pragma once

namespace optensor {

/// Numeric tolerances used throughout. All must be nonnegative.
struct Tolerances {
  double eps_herm = 1e-9;  ///< Hermiticity slack, absolute on max-abs deviation.
  double eps_psd = 1e-9;   ///< Positivity slack (scale-aware, see is_psd).
  double eps_eq = 1e-9;    ///< Equality slack for contracted values.
  double eps_prop = 1e-6;  ///< Proportionality (heralding) slack.
};

}  // namespace optensor
