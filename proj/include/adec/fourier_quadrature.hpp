#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

namespace adec {

/// Result of a one-dimensional quadrature with an absolute error estimate.
struct QuadratureResult {
  double value = 0.0;
  double abs_error = std::numeric_limits<double>::infinity();
  int level = 0;
  bool converged = false;
};

enum class FourierKind { sine, cosine };

/// Double-exponential quadrature for int_0^inf f(x) sin(wx) dx or
/// int_0^inf f(x) cos(wx) dx (Ooura-Mori transformation, beta = 1/4).
///
/// Node and weight tables depend only on the step h = 2^-level and are built
/// once per process; they are immutable afterwards, so concurrent use is safe
/// and the result of a call depends only on its arguments. Levels are refined
/// from 0 upward until successive estimates agree to rel_tol, or to abs_floor.
QuadratureResult fourier_integral(const std::function<double(double)>& f, double omega, FourierKind kind,
                                  double rel_tol, double abs_floor = 0.0, int max_level = 11);

}  // namespace adec
