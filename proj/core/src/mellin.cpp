#include "mcdelay/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "mcdelay/errors.hpp"
#include "mcdelay/evt.hpp"
#include "mcdelay/quadrature.hpp"
#include "mcdelay/specfun.hpp"

namespace mcdelay {

std::string_view to_string(MellinMethod m) {
  switch (m) {
    case MellinMethod::Exact: return "exact";
    case MellinMethod::AlzerLower: return "alzer-lower";
    case MellinMethod::AlzerUpper: return "alzer-upper";
    case MellinMethod::Quadrature: return "quadrature";
    case MellinMethod::Asymptotic: return "asymptotic";
    case MellinMethod::AsymptoticVerbatim: return "asymptotic-verbatim";
  }
  return "unknown";
}

MellinMethod parse_mellin_method(std::string_view name) {
  if (name == "exact") return MellinMethod::Exact;
  if (name == "alzer-lower") return MellinMethod::AlzerLower;
  if (name == "alzer-upper" || name == "alzer") return MellinMethod::AlzerUpper;
  if (name == "quadrature") return MellinMethod::Quadrature;
  if (name == "asymptotic") return MellinMethod::Asymptotic;
  if (name == "asymptotic-verbatim") return MellinMethod::AsymptoticVerbatim;
  throw ConfigError("unknown Mellin method '" + std::string(name) + "'");
}

namespace {

MellinEvaluation unit_value(MellinMethod method) {
  MellinEvaluation e;
  e.value = 1.0;
  e.method = method;
  e.s = 1.0;
  return e;
}

void require_s_at_most_one(double s, const char* who) {
  if (std::isnan(s) || s > 1.0) {
    throw DomainError(std::string(who) + ": requires s <= 1, got s=" + std::to_string(s));
  }
}

MellinEvaluation from_deviation(double s, double deviation, double abs_err,
                                MellinMethod method) {
  MellinEvaluation e;
  e.s = s;
  e.method = method;
  e.value = 1.0 + deviation;
  e.log_value = std::log1p(deviation);
  e.est_abs_error = abs_err;
  if (!(e.value > 0) || !std::isfinite(e.value)) {
    throw NonConvergenceError("Mellin evaluation produced non-positive value " +
                              std::to_string(e.value) + " at s=" + std::to_string(s));
  }
  return e;
}

// (s - 1) rho int_0^inf (1 + rho x)^(s-2) S(x) dx for a survival function S,
// returned with its absolute error estimate (quadrature + truncated tail).
struct Deviation {
  double value;
  double abs_error;
};

Deviation survival_integral(double rho, double s, const std::function<double(double)>& survival,
                            double scale_hint) {
  const double sm1 = s - 1.0;
  // (1-s) * tail <= S(X) (1 + rho X)^(s-1) for s < 1; for s > 1 the extra
  // (1 + rho X) factor keeps the heuristic conservative.
  auto tail_bound = [&](double x) {
    const double g = std::pow(1.0 + rho * x, sm1);
    const double extra = sm1 > 0 ? 1.0 + rho * x : 1.0;
    return survival(x) * g * extra;
  };
  double x_max = std::max(scale_hint, 1e-300);
  int guard = 0;
  while (tail_bound(x_max) > 1e-17 && guard++ < 2000) x_max *= 1.5;
  const double tail = std::max(1.0, std::abs(sm1)) * tail_bound(x_max);

  std::vector<double> bp;
  bp.push_back(0.0);
  for (double x = x_max * std::ldexp(1.0, -24); x < x_max; x *= 2.0) bp.push_back(x);
  const double rho_scale = 1.0 / rho;
  if (rho_scale < x_max && rho_scale > bp[1]) bp.push_back(rho_scale);
  bp.push_back(x_max);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

  auto integrand = [&](double x) { return rho * std::pow(1.0 + rho * x, s - 2.0) * survival(x); };
  quadrature::Options opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-13;
  opts.max_intervals = 20000;
  const auto r = quadrature::integrate(integrand, bp, opts);
  const double abs_err = std::abs(sm1) * r.abs_error + tail;
  if (!r.converged && abs_err > 1e-9) {
    throw NonConvergenceError("mellin quadrature stalled at error " + std::to_string(abs_err));
  }
  return {sm1 * r.value, abs_err};
}

double bottleneck_scale(const SystemConfig& cfg) {
  // A scale where the bottleneck survival is still O(1): the per-user
  // 1/K-quantile, or the mean for K = 1.
  return std::max(channel::gain_quantile(cfg.antennas(), std::min(0.5, 1.0 / cfg.users())),
                  1e-6);
}

}  // namespace

MellinEvaluation mellin_quadrature(const SystemConfig& cfg, double s) {
  if (std::isnan(s)) throw DomainError("mellin_quadrature: s is NaN");
  if (s == 1.0) return unit_value(MellinMethod::Quadrature);
  auto survival = [&](double x) { return channel::min_gain_survival(cfg, x); };
  const Deviation d = survival_integral(cfg.rho(), s, survival, bottleneck_scale(cfg));
  return from_deviation(s, d.value, d.abs_error, MellinMethod::Quadrature);
}

// ---------------------------------------------------------------------------

ExactMellinSeries::ExactMellinSeries(const SystemConfig& cfg, std::uint64_t enumeration_budget)
    : cfg_(cfg) {
  const int m = cfg.antennas();
  const int k = cfg.users();
  specfun::Compositions comps(k, m);
  const std::uint64_t count = comps.count();
  if (count > enumeration_budget) throw BudgetExceededError(count, enumeration_budget);

  const int max_theta = (m - 1) * k;
  std::vector<std::vector<double>> per_theta(static_cast<std::size_t>(max_theta) + 1);
  for (const auto& c : comps) {
    const auto w = specfun::log_term_weight(c);
    per_theta[static_cast<std::size_t>(w.theta)].push_back(w.log_phi);
  }
  log_weights_.resize(per_theta.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t t = 0; t < per_theta.size(); ++t) {
    if (!per_theta[t].empty()) log_weights_[t] = specfun::log_sum_exp(per_theta[t]);
  }
}

double ExactMellinSeries::log_weight(int theta) const {
  if (theta < 0 || theta > max_theta()) return -std::numeric_limits<double>::infinity();
  return log_weights_[static_cast<std::size_t>(theta)];
}

MellinEvaluation ExactMellinSeries::evaluate(double s) const {
  require_s_at_most_one(s, "mellin_exact");
  if (s == 1.0) return unit_value(MellinMethod::Exact);
  const double rho = cfg_.rho();
  const double z = cfg_.users() / rho;
  const double log_rho = std::log(rho);
  std::vector<double> log_terms;
  log_terms.reserve(log_weights_.size());
  for (std::size_t t = 0; t < log_weights_.size(); ++t) {
    if (!std::isfinite(log_weights_[t])) continue;
    const double theta = static_cast<double>(t);
    // Gamma(1+theta) U(theta+1, theta+s, z) is exactly the Laplace integral.
    log_terms.push_back(log_weights_[t] - theta * log_rho +
                        specfun::log_tricomi_integral(theta + 1.0, theta + s, z));
  }
  const double peak = *std::max_element(log_terms.begin(), log_terms.end());
  specfun::CompensatedSum<double> acc;
  for (double lt : log_terms) acc.add(std::exp(lt - peak));
  const double sum = std::exp(peak) * acc.value();
  const double dev = (s - 1.0) * sum;
  return from_deviation(s, dev, 1e-11 * std::abs(dev) + 1e-15, MellinMethod::Exact);
}

MellinEvaluation mellin_exact(const SystemConfig& cfg, double s, const MellinOptions& opts) {
  require_s_at_most_one(s, "mellin_exact");
  if (s == 1.0) return unit_value(MellinMethod::Exact);
  return ExactMellinSeries(cfg, opts.enumeration_budget).evaluate(s);
}

// ---------------------------------------------------------------------------

namespace {

struct AlzerSum {
  long double value;
  long double abs_sum;
};

// B(s, beta) = sum_k sum_{j>=1} C(K,k) C(kM,j) (-1)^(k+j) F(j beta / rho),
// F(x) = e^x x^(1-s) Gamma(s-1, x). The j = 0 terms sum to zero.
AlzerSum alzer_sum(int m, int users, double rho, double s, long double beta) {
  const long double a = static_cast<long double>(s) - 1.0L;
  specfun::CompensatedSum<long double> acc;
  long double abs_sum = 0.0L;
  const int jmax = users * m;
  std::vector<long double> f(static_cast<std::size_t>(jmax) + 1, 0.0L);
  for (int j = 1; j <= jmax; ++j) {
    f[static_cast<std::size_t>(j)] = specfun::scaled_upper_incomplete_gamma_ext(
        a, static_cast<long double>(j) * beta / static_cast<long double>(rho));
  }
  long double ck = 1.0L;  // C(K, k)
  for (int k = 0; k <= users; ++k) {
    if (k > 0) ck = ck * static_cast<long double>(users - k + 1) / static_cast<long double>(k);
    long double cj = 1.0L;  // C(kM, j)
    const int n = k * m;
    for (int j = 1; j <= n; ++j) {
      cj = cj * static_cast<long double>(n - j + 1) / static_cast<long double>(j);
      const long double term = ck * cj * f[static_cast<std::size_t>(j)];
      acc.add(((k + j) % 2 == 0) ? term : -term);
      abs_sum += term;
    }
  }
  return {acc.value(), abs_sum};
}

double alzer_beta_lower(int m) {
  return std::exp(-std::lgamma(static_cast<double>(m) + 1.0) / m);
}

}  // namespace

std::pair<MellinEvaluation, MellinEvaluation> mellin_alzer_bounds(const SystemConfig& cfg,
                                                                  double s,
                                                                  const MellinOptions& opts) {
  require_s_at_most_one(s, "mellin_alzer_bounds");
  if (s == 1.0) return {unit_value(MellinMethod::AlzerLower), unit_value(MellinMethod::AlzerUpper)};
  const int m = cfg.antennas();
  const int k = cfg.users();
  if (k * m > opts.alzer_budget) {
    if (opts.alzer_integral_fallback) return mellin_alzer_bounds_integral(cfg, s);
    throw PrecisionLossError("mellin_alzer_bounds: K*M=" + std::to_string(k * m) +
                                 " exceeds the alternating-sum budget " +
                                 std::to_string(opts.alzer_budget),
                             0.0);
  }
  // Unit roundoff of the extended-precision terms, padded for the incomplete
  // gamma evaluation itself.
  const long double unit = 64.0L * std::numeric_limits<long double>::epsilon();
  const long double sm1 = static_cast<long double>(s) - 1.0L;

  auto make = [&](long double beta, MellinMethod method) {
    const AlzerSum b = alzer_sum(m, k, cfg.rho(), s, beta);
    const long double dev = sm1 * b.value;
    const long double err = std::abs(sm1) * b.abs_sum * unit;
    const long double value = 1.0L + dev;
    const double digits = value > 0 ? -std::log10(static_cast<double>(err / value)) : 0.0;
    if (!(digits >= opts.alzer_min_digits)) {
      throw PrecisionLossError("mellin_alzer_bounds: alternating sum keeps only " +
                                   std::to_string(digits) + " significant digits",
                               digits);
    }
    return from_deviation(s, static_cast<double>(dev), static_cast<double>(err), method);
  };
  try {
    const long double b_low = static_cast<long double>(alzer_beta_lower(m));
    auto lower = make(b_low, MellinMethod::AlzerLower);
    auto upper = make(1.0L, MellinMethod::AlzerUpper);
    return {lower, upper};
  } catch (const PrecisionLossError&) {
    if (opts.alzer_integral_fallback) return mellin_alzer_bounds_integral(cfg, s);
    throw;
  }
}

std::pair<MellinEvaluation, MellinEvaluation> mellin_alzer_bounds_integral(const SystemConfig& cfg,
                                                                           double s) {
  require_s_at_most_one(s, "mellin_alzer_bounds_integral");
  if (s == 1.0) return {unit_value(MellinMethod::AlzerLower), unit_value(MellinMethod::AlzerUpper)};
  const int m = cfg.antennas();
  const int k = cfg.users();
  auto envelope = [m, k](double beta) {
    return [m, k, beta](double x) {
      if (x <= 0) return 1.0;
      // 1 - (1 - e^(-beta x))^M without cancellation at either end.
      const double log_y = std::log(-std::expm1(-beta * x));
      const double one_minus = -std::expm1(m * log_y);
      return std::exp(k * std::log(one_minus));
    };
  };
  const double scale = bottleneck_scale(cfg);
  const double b = alzer_beta_lower(m);
  const Deviation lo = survival_integral(cfg.rho(), s, envelope(b), scale / b);
  const Deviation hi = survival_integral(cfg.rho(), s, envelope(1.0), scale);
  return {from_deviation(s, lo.value, lo.abs_error, MellinMethod::AlzerLower),
          from_deviation(s, hi.value, hi.abs_error, MellinMethod::AlzerUpper)};
}

// ---------------------------------------------------------------------------

MellinEvaluation mellin_asymptotic(const SystemConfig& cfg, double s, bool verbatim) {
  const MellinMethod method = verbatim ? MellinMethod::AsymptoticVerbatim : MellinMethod::Asymptotic;
  require_s_at_most_one(s, "mellin_asymptotic");
  if (s == 1.0) return unit_value(method);
  const int m = cfg.antennas();
  const evt::EvtParams p = evt::weibull_params(m, cfg.users());
  const double scale = verbatim ? p.d_K : m * p.d_K;
  auto survival = [scale, m](double x) { return std::exp(-std::pow(x / scale, m)); };
  if (!verbatim) {
    const Deviation d = survival_integral(cfg.rho(), s, survival, scale);
    return from_deviation(s, d.value, d.abs_error, method);
  }
  // Literal form without the rho prefactor: 1 + (s-1) int (1 + rho x)^(s-2) e^(-(x/d_K)^M) dx.
  const double rho = cfg.rho();
  const Deviation d = survival_integral(rho, s, survival, scale);
  return from_deviation(s, d.value / rho, d.abs_error / rho, method);
}

// ---------------------------------------------------------------------------

MellinEvaluator::MellinEvaluator(const SystemConfig& cfg, MellinMethod method, MellinOptions opts)
    : cfg_(cfg), method_(method), opts_(opts) {
  if (method_ == MellinMethod::Exact) {
    series_ = std::make_shared<const ExactMellinSeries>(cfg_, opts_.enumeration_budget);
  }
}

MellinEvaluation MellinEvaluator::operator()(double s) const {
  switch (method_) {
    case MellinMethod::Exact: return series_->evaluate(s);
    case MellinMethod::Quadrature: return mellin_quadrature(cfg_, s);
    case MellinMethod::AlzerLower: return mellin_alzer_bounds(cfg_, s, opts_).first;
    case MellinMethod::AlzerUpper: return mellin_alzer_bounds(cfg_, s, opts_).second;
    case MellinMethod::Asymptotic: return mellin_asymptotic(cfg_, s, false);
    case MellinMethod::AsymptoticVerbatim: return mellin_asymptotic(cfg_, s, true);
  }
  throw DomainError("MellinEvaluator: unknown method");
}

}  // namespace mcdelay
