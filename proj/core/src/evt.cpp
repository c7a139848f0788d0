#include "mcdelay/evt.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mcdelay/errors.hpp"
#include "mcdelay/mellin.hpp"
#include "mcdelay/quadrature.hpp"

namespace mcdelay::evt {
namespace {

double log_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1.0); }

// (M!/K)^(1/M)
double raw_quantile_scale(int antennas, int users) {
  return std::exp((log_factorial(antennas) - std::log(static_cast<double>(users))) / antennas);
}

void check_counts(int antennas, int users) {
  if (antennas < 1) throw DomainError("evt: M must be >= 1");
  if (users < 1) throw DomainError("evt: K must be >= 1");
}

}  // namespace

EvtParams weibull_params(int antennas, int users) {
  check_counts(antennas, users);
  EvtParams p;
  p.c_K = 0.0;
  p.d_K = raw_quantile_scale(antennas, users) / antennas;
  p.kappa = antennas;
  return p;
}

double limit_cdf(int antennas, double x) {
  if (x < 0) throw DomainError("limit_cdf: x must be >= 0");
  return -std::expm1(-std::pow(x, antennas));
}

double evt_error_bound(int antennas, int users, double x) {
  check_counts(antennas, users);
  if (x < 0) throw DomainError("evt_error_bound: x must be >= 0");
  if (x == 0) return 0.0;
  return std::exp(-std::pow(x, antennas) + (antennas + 1) * std::log(x)) *
         raw_quantile_scale(antennas, users);
}

double normalized_min_gain_cdf(const SystemConfig& cfg, double x) {
  const EvtParams p = weibull_params(cfg.antennas(), cfg.users());
  return channel::min_gain_cdf(cfg, cfg.antennas() * p.d_K * x);
}

double weibull_mean(int antennas, int users) {
  return weibull_params(antennas, users).d_K * std::tgamma(1.0 + 1.0 / antennas);
}

double weibull_variance(int antennas, int users) {
  const double d = weibull_params(antennas, users).d_K;
  const double g1 = std::tgamma(1.0 + 1.0 / antennas);
  return d * d * (std::tgamma(1.0 + 2.0 / antennas) - g1 * g1);
}

double exact_min_gain_mean(const SystemConfig& cfg) {
  auto survival = [&](double x) { return channel::min_gain_survival(cfg, x); };
  double hi = channel::gain_quantile(cfg.antennas(), std::min(0.5, 1.0 / cfg.users()));
  while (survival(hi) > 1e-18) hi *= 1.5;
  std::vector<double> bp = {0.0};
  for (double x = hi * std::ldexp(1.0, -20); x < hi; x *= 2.0) bp.push_back(x);
  bp.push_back(hi);
  quadrature::Options opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-13;
  return quadrature::integrate(survival, bp, opts).value;
}

double shape_from_tail_ratio(int antennas, double u) {
  if (!(u > 0)) throw DomainError("shape_from_tail_ratio: u must be > 0");
  return std::log2(channel::gain_cdf(antennas, 2 * u) / channel::gain_cdf(antennas, u));
}

double shape_from_quantile_ratio(int antennas, double eps) {
  if (!(eps > 0 && 4 * eps < 1)) throw DomainError("shape_from_quantile_ratio: need 0 < 4 eps < 1");
  const double q1 = channel::gain_quantile(antennas, eps);
  const double q2 = channel::gain_quantile(antennas, 2 * eps);
  const double q4 = channel::gain_quantile(antennas, 4 * eps);
  return -1.0 / std::log2((q1 - q2) / (q2 - q4));
}

// ---------------------------------------------------------------------------

std::string_view to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::LargeK: return "large-k";
    case RegimeKind::LargeM: return "large-m";
    case RegimeKind::Joint: return "joint";
  }
  return "unknown";
}

RegimeKind parse_regime(std::string_view name) {
  if (name == "large-k") return RegimeKind::LargeK;
  if (name == "large-m") return RegimeKind::LargeM;
  if (name == "joint") return RegimeKind::Joint;
  throw ConfigError("unknown scaling regime '" + std::string(name) + "'");
}

double joint_lower_bound(double delta, double ell, double power, double s) {
  if (!(delta > 0)) throw DomainError("joint regime: delta must be > 0");
  if (!(ell > 0 && ell < 1)) throw DomainError("joint regime: ell must lie in (0, 1)");
  const double gap = 1.0 - ell;
  return std::exp(-delta / (2.0 * gap * gap)) * std::pow(1.0 + power * ell, s - 1.0);
}

double joint_upper_bound(double delta, double power, double s) {
  if (!(delta > 0)) throw DomainError("joint regime: delta must be > 0");
  const double r = 1.0 + std::sqrt(delta);
  return std::pow(1.0 + power * r * r, s - 1.0);
}

BestEll maximize_joint_lower_bound(double delta, double power, double s) {
  // Log of the bound is concave in ell; seed golden section from a grid.
  auto f = [&](double ell) { return joint_lower_bound(delta, ell, power, s); };
  constexpr int kGrid = 199;
  int best = 1;
  double best_val = f(1.0 / (kGrid + 1));
  for (int i = 2; i <= kGrid; ++i) {
    const double v = f(static_cast<double>(i) / (kGrid + 1));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = static_cast<double>(best - 1) / (kGrid + 1);
  double hi = static_cast<double>(best + 1) / (kGrid + 1);
  if (lo <= 0) lo = 1e-12;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double ell = 0.5 * (lo + hi);
  const double val = f(ell);
  if (val >= best_val) return {ell, val};
  return {static_cast<double>(best) / (kGrid + 1), best_val};
}

ScalingValue scaling_limit(const ScalingRegime& regime, const SystemConfig& cfg, double s) {
  switch (regime.kind) {
    case RegimeKind::LargeK:
      return std::pow(1.0 + cfg.rho() * raw_quantile_scale(cfg.antennas(), cfg.users()), s - 1.0);
    case RegimeKind::LargeM:
      return std::pow(1.0 + cfg.power(), s - 1.0);
    case RegimeKind::Joint:
      return ScalingBounds{joint_lower_bound(regime.delta, regime.ell, cfg.power(), s),
                           joint_upper_bound(regime.delta, cfg.power(), s)};
  }
  throw DomainError("scaling_limit: malformed regime");
}

double jensen_gap(const SystemConfig& cfg, double s) {
  if (s == 1.0) return 0.0;
  const double m = weibull_mean(cfg.antennas(), cfg.users());
  const double f_mean = std::pow(1.0 + cfg.power() * m, s - 1.0);
  return std::abs(f_mean - mellin_quadrature(cfg, s).value);
}

double jensen_gap_exact_mean(const SystemConfig& cfg, double s) {
  if (s == 1.0) return 0.0;
  const double f_mean = std::pow(1.0 + cfg.rho() * exact_min_gain_mean(cfg), s - 1.0);
  return std::abs(f_mean - mellin_quadrature(cfg, s).value);
}

}  // namespace mcdelay::evt
