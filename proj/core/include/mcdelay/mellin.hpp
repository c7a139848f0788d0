#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mcdelay/channel.hpp"

namespace mcdelay {

/// How a value of M_g(s) = E[(1 + gamma)^(s-1)] was produced.
enum class MellinMethod {
  Exact,               // composition series with Tricomi U terms
  AlzerLower,          // Alzer-envelope lower bound
  AlzerUpper,          // Alzer-envelope upper bound
  Quadrature,          // direct quadrature of the integration-by-parts form
  Asymptotic,          // Weibull (extreme-value) limit of the bottleneck gain
  AsymptoticVerbatim,  // the asymptotic integral without the rho prefactor
};

std::string_view to_string(MellinMethod m);
MellinMethod parse_mellin_method(std::string_view name);

struct MellinEvaluation {
  double value = 1.0;
  MellinMethod method = MellinMethod::Quadrature;
  double s = 1.0;
  double est_abs_error = 0.0;
  /// log(value), computed as log1p of the deviation from 1 so it keeps full
  /// relative accuracy when s is close to 1.
  double log_value = 0.0;
};

struct MellinOptions {
  /// Largest composition count mellin_exact will enumerate.
  std::uint64_t enumeration_budget = 10'000'000;
  /// Largest K*M accepted by the closed-form Alzer sums.
  int alzer_budget = 40;
  /// Minimum significant digits the Alzer closed form must retain.
  double alzer_min_digits = 6.0;
  /// When the closed form is out of budget or loses precision, integrate the
  /// same Alzer envelope numerically instead of throwing.
  bool alzer_integral_fallback = false;
};

/// Ground-truth evaluator: 1 + (s-1) rho int_0^inf (1+rho x)^(s-2)
/// (Gamma(M,x)/Gamma(M))^K dx by adaptive Gauss-Kronrod plus an analytic tail
/// bound. Accepts any real s (for s > 1 this is the positive-moment side).
MellinEvaluation mellin_quadrature(const SystemConfig& cfg, double s);

/// Composition series
///   1 + (s-1) sum_c phi_c Gamma(1+theta_c) rho^-theta_c U(theta_c+1, theta_c+s, K/rho),
/// assembled in log-space, grouped by theta and summed with compensation.
/// Requires s <= 1. Throws BudgetExceededError when C(K+M-1, M-1) exceeds the
/// enumeration budget.
MellinEvaluation mellin_exact(const SystemConfig& cfg, double s, const MellinOptions& opts = {});

/// Lower and upper Alzer bounds 1 + (s-1) B(s, b) and 1 + (s-1) B(s, 1),
/// b = Gamma(1+M)^(-1/M), from the closed-form double alternating sum
/// (extended precision). Requires s <= 1. Throws PrecisionLossError when
/// K*M exceeds the budget or the sum's condition number leaves fewer than
/// `alzer_min_digits` digits, unless `alzer_integral_fallback` is set.
std::pair<MellinEvaluation, MellinEvaluation> mellin_alzer_bounds(
    const SystemConfig& cfg, double s, const MellinOptions& opts = {});

/// The same two bounds obtained by quadrature of the Alzer survival envelope
/// (1 - (1 - e^(-beta x))^M)^K. Independent of the alternating sum.
std::pair<MellinEvaluation, MellinEvaluation> mellin_alzer_bounds_integral(
    const SystemConfig& cfg, double s);

/// Extreme-value approximation: the bottleneck gain is replaced by its
/// Weibull limit. With the normalizing scale d_K of the mean-normalized gain
/// X/M, the raw-gain survival is exp(-(x / (M d_K))^M) and
///   M^as(s) = 1 + (s-1) rho int_0^inf (1+rho x)^(s-2) exp(-(x/(M d_K))^M) dx.
/// `verbatim` drops the rho prefactor and uses the raw d_K scale, reproducing
/// the literal form of the integral. Requires s <= 1.
MellinEvaluation mellin_asymptotic(const SystemConfig& cfg, double s, bool verbatim = false);

/// theta-grouped weights of the composition series, reusable across s.
class ExactMellinSeries {
 public:
  ExactMellinSeries(const SystemConfig& cfg, std::uint64_t enumeration_budget);

  MellinEvaluation evaluate(double s) const;

  /// log sum_{c : theta_c = theta} phi_c, or -inf when no composition has
  /// that theta.
  double log_weight(int theta) const;
  int max_theta() const { return static_cast<int>(log_weights_.size()) - 1; }

 private:
  SystemConfig cfg_;
  std::vector<double> log_weights_;
};

/// Callable s -> M_g(s) for one configuration and method. Precomputes
/// whatever the method can share across arguments.
class MellinEvaluator {
 public:
  MellinEvaluator(const SystemConfig& cfg, MellinMethod method, MellinOptions opts = {});

  MellinEvaluation operator()(double s) const;

  MellinMethod method() const { return method_; }
  const SystemConfig& config() const { return cfg_; }

 private:
  SystemConfig cfg_;
  MellinMethod method_;
  MellinOptions opts_;
  std::shared_ptr<const ExactMellinSeries> series_;
};

}  // namespace mcdelay
