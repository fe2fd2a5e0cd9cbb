#ifndef RHOSTAR_OPTIMIZE_HPP
#define RHOSTAR_OPTIMIZE_HPP

#include <functional>

namespace rhostar {

struct ScalarMaximum {
  double argmax = 0.0;
  double value = 0.0;
  int evaluations = 0;
  /// The coarse scan saw more than one interior local maximum.
  bool multimodal = false;
};

struct MaximizeOptions {
  double lower = 1e-9;
  double upper = 1.0 - 1e-9;
  /// Absolute convergence tolerance on the argument.
  double tolerance = 1e-10;
  /// Number of equally spaced seeds scanned before refinement; < 3 disables the scan.
  int coarse_points = 101;
  int max_iterations = 500;
};

/// Brent's method (golden section with parabolic interpolation) for the
/// maximum of f on [lo, hi].
ScalarMaximum brent_maximize(const std::function<double(double)>& f, double lo, double hi, double tolerance,
                             int max_iterations);

/// Coarse scan followed by Brent refinement on the bracket around the best
/// scanned point. The result is never worse than the best scanned value.
ScalarMaximum maximize_bounded(const std::function<double(double)>& f, const MaximizeOptions& options = {});

}  // namespace rhostar

#endif
