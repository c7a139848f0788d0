#pragma once

#include <string_view>
#include <variant>

#include "mcdelay/channel.hpp"

namespace mcdelay::evt {

/// Weibull normalizing constants for the bottleneck gain.
///
/// d_K = (1/M) (M!/K)^(1/M) is the 1/K-quantile (first-order Taylor
/// inversion) of the mean-normalized per-user gain ||h||^2 / M. In raw gain
/// units the scale is M d_K, so
///   P(X_(1) <= M d_K x) -> 1 - exp(-x^M).
struct EvtParams {
  double c_K = 0.0;  // location: lower end of the gain support
  double d_K = 1.0;  // scale
  int kappa = 1;     // shape, equals M
};

EvtParams weibull_params(int antennas, int users);

/// 1 - exp(-x^M).
double limit_cdf(int antennas, double x);

/// Convergence envelope e^(-x^M) x^(M+1) (M!/K)^(1/M).
double evt_error_bound(int antennas, int users, double x);

/// P(X_(1)/M <= d_K x), the exact bottleneck CDF at a normalized point.
double normalized_min_gain_cdf(const SystemConfig& cfg, double x);

/// Mean and variance of the normalized Weibull limit:
/// d_K Gamma(1+1/M) and d_K^2 (Gamma(1+2/M) - Gamma(1+1/M)^2).
double weibull_mean(int antennas, int users);
double weibull_variance(int antennas, int users);

/// E[X_(1)] = int_0^inf (Gamma(M,x)/Gamma(M))^K dx by quadrature (raw units).
double exact_min_gain_mean(const SystemConfig& cfg);

/// Self-tests of the shape parameter kappa = M:
/// log2(F(2u)/F(u)) for small u (regular variation at the lower endpoint),
/// and -1/log2 of the quantile-ratio statistic
/// (F^-1(e) - F^-1(2e)) / (F^-1(2e) - F^-1(4e)) for small e.
double shape_from_tail_ratio(int antennas, double u);
double shape_from_quantile_ratio(int antennas, double eps);

// ---------------------------------------------------------------------------
// Scaling regimes
// ---------------------------------------------------------------------------

enum class RegimeKind { LargeK, LargeM, Joint };

std::string_view to_string(RegimeKind k);
RegimeKind parse_regime(std::string_view name);

struct ScalingRegime {
  RegimeKind kind = RegimeKind::LargeK;
  double delta = 0.0;  // K/M, Joint only
  double ell = 0.5;    // Chebyshev level in (0,1), Joint only

  static ScalingRegime large_k() { return {RegimeKind::LargeK, 0.0, 0.5}; }
  static ScalingRegime large_m() { return {RegimeKind::LargeM, 0.0, 0.5}; }
  static ScalingRegime joint(double delta, double ell) { return {RegimeKind::Joint, delta, ell}; }
};

struct ScalingBounds {
  double lower;
  double upper;
};

using ScalingValue = std::variant<double, ScalingBounds>;

/// LargeK: (1 + rho (M!/K)^(1/M))^(s-1).
/// LargeM: (1 + P)^(s-1).
/// Joint:  (e^(-delta/(2(1-ell)^2)) (1 + P ell)^(s-1), (1 + P (1+sqrt(delta))^2)^(s-1)).
///
/// The joint pair is a Chebyshev lower bound and the perfect-CSI multicast
/// capacity bound; both orderings against M_g(s) hold on the moment side
/// s > 1, where (1+x)^(s-1) is increasing. For s < 1 the formulas are still
/// returned but do not bracket M_g(s).
ScalingValue scaling_limit(const ScalingRegime& regime, const SystemConfig& cfg, double s);

double joint_lower_bound(double delta, double ell, double power, double s);

/// Perfect-CSI multicast capacity bound (1 + P (1+sqrt(delta))^2)^(s-1).
double joint_upper_bound(double delta, double power, double s);

struct BestEll {
  double ell;
  double lower;
};

/// Golden-section maximization of joint_lower_bound over ell in (0, 1).
BestEll maximize_joint_lower_bound(double delta, double power, double s);

/// |(1 + P m)^(s-1) - M_g(s)| with m the normalized Weibull mean; the
/// quadrature evaluator supplies M_g(s). Shrinks as K grows.
double jensen_gap(const SystemConfig& cfg, double s);

/// Same gap with the exact E[X_(1)] in place of the Weibull mean.
double jensen_gap_exact_mean(const SystemConfig& cfg, double s);

}  // namespace mcdelay::evt
