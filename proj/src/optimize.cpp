#include "rhostar/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rhostar {

ScalarMaximum brent_maximize(const std::function<double(double)>& f, double lo, double hi, double tolerance,
                             int max_iterations) {
  constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  // Minimize g = -f.
  double a = std::min(lo, hi);
  double b = std::max(lo, hi);
  double x = a + kGolden * (b - a);
  double w = x, v = x;
  double fx = -f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int evals = 1;

  for (int iter = 0; iter < max_iterations; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = tolerance + kEps * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m >= x) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= m) ? a - x : b - x;
      d = kGolden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = -f(u);
    ++evals;
    if (fu <= fx) {
      (u >= x ? a : b) = x;
      v = w, fv = fw;
      w = x, fw = fx;
      x = u, fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w, fv = fw;
        w = u, fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u, fv = fu;
      }
    }
  }
  return {x, -fx, evals, false};
}

ScalarMaximum maximize_bounded(const std::function<double(double)>& f, const MaximizeOptions& options) {
  const double lo = options.lower;
  const double hi = options.upper;
  if (options.coarse_points < 3) {
    return brent_maximize(f, lo, hi, options.tolerance, options.max_iterations);
  }
  const int n = options.coarse_points;
  std::vector<double> ts(n), fs(n);
  std::size_t best = 0;
  for (int i = 0; i < n; ++i) {
    ts[i] = lo + (hi - lo) * i / (n - 1);
    fs[i] = f(ts[i]);
    if (fs[i] > fs[best]) best = static_cast<std::size_t>(i);
  }
  int peaks = 0;
  for (int i = 1; i + 1 < n; ++i) {
    if (fs[i] > fs[i - 1] && fs[i] >= fs[i + 1]) ++peaks;
  }

  const double blo = ts[best == 0 ? 0 : best - 1];
  const double bhi = ts[std::min<std::size_t>(best + 1, n - 1)];
  ScalarMaximum refined = brent_maximize(f, blo, bhi, options.tolerance, options.max_iterations);
  refined.evaluations += n;
  if (fs[best] > refined.value) {
    refined.argmax = ts[best];
    refined.value = fs[best];
  }
  refined.multimodal = peaks > 1;
  return refined;
}

}  // namespace rhostar
