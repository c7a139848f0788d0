#pragma once

#include <functional>
#include <span>

namespace mcdelay::quadrature {

struct Options {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [lo, hi].
///
/// The interval with the largest local error estimate (|K15 - G7|) is
/// bisected until the summed estimate drops below
/// max(abs_tol, rel_tol * |value|) or the interval budget runs out; in the
/// latter case `converged` is false and the best estimate is returned.
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// tolerated.
Result integrate(const Integrand& f, double lo, double hi,
                 const Options& opts = {});

/// Same, seeded with the partition given by `breakpoints` (sorted, at least
/// two entries). Useful when the integrand has structure at known scales.
Result integrate(const Integrand& f, std::span<const double> breakpoints,
                 const Options& opts = {});

}  // namespace mcdelay::quadrature
