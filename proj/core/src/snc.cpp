#include "mcdelay/snc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mcdelay/errors.hpp"
#include "mcdelay/parallel.hpp"
#include "mcdelay/quadrature.hpp"

namespace mcdelay {

ArrivalSpec::ArrivalSpec(double lambda) : lambda_nats_per_slot(lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) {
    throw ConfigError("ArrivalSpec: lambda must be finite and > 0");
  }
}

ArrivalSpec ArrivalSpec::from_rate_bps(double rate_bps, double slot_seconds) {
  return ArrivalSpec(rate_bps * slot_seconds * std::numbers::ln2);
}

double arrival_mellin(const ArrivalSpec& arr, double s) {
  return std::exp(arr.lambda_nats_per_slot * (s - 1.0));
}

// ---------------------------------------------------------------------------

DelayAnalyzer::DelayAnalyzer(const SystemConfig& cfg, const ArrivalSpec& arr,
                             MellinMethod method, SncOptions opts)
    : cfg_(cfg),
      arr_(arr),
      mellin_(cfg, method, opts.mellin),
      opts_(opts),
      s_cap_(opts.s_cap_factor / cfg.symbols_per_slot()) {
  if (opts_.grid_points < 3) throw ConfigError("SncOptions: grid_points must be >= 3");
  interval_ = locate_interval();
}

double DelayAnalyzer::log_service_mellin(double s) const {
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(s); it != cache_.end()) return it->second;
  }
  const double v = mellin_(1.0 - cfg_.symbols_per_slot() * s).log_value;
  std::lock_guard lock(cache_mutex_);
  cache_.emplace(s, v);
  return v;
}

double DelayAnalyzer::log_stability(double s) const {
  return arr_.lambda_nats_per_slot * s + log_service_mellin(s);
}

StabilityInterval DelayAnalyzer::locate_interval() const {
  // log V is convex in s with log V(0) = 0, so {V < 1} is (0, s_hi).
  constexpr int kScan = 48;
  constexpr double kDecades = 8.0;
  StabilityInterval out;
  double prev = 0.0;
  bool any_negative = false;
  for (int i = 0; i < kScan; ++i) {
    const double s = s_cap_ * std::pow(10.0, -kDecades + kDecades * i / (kScan - 1));
    const double lv = log_stability(s);
    if (lv < 0) {
      any_negative = true;
      prev = s;
      continue;
    }
    if (!any_negative) return out;  // unstable: V >= 1 right at the origin
    double lo = prev;
    double hi = s;
    while (hi - lo > 1e-12 * hi) {
      const double mid = 0.5 * (lo + hi);
      if (log_stability(mid) < 0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.s_lo = 0.0;
    out.s_hi = lo;
    out.empty = false;
    return out;
  }
  if (!any_negative) return out;
  out.s_lo = 0.0;
  out.s_hi = s_cap_;
  out.empty = false;
  return out;
}

double DelayAnalyzer::log_kernel(double s, int w) const {
  if (w < 0) throw DomainError("kernel: w must be >= 0");
  if (!(s > 0)) throw DomainError("kernel: s must be > 0");
  const double lm = log_service_mellin(s);
  const double lv = arr_.lambda_nats_per_slot * s + lm;
  if (!(lv < 0)) {
    throw InstabilityError("kernel: V(s) = " + std::to_string(std::exp(lv)) +
                           " >= 1 at s=" + std::to_string(s));
  }
  return w * lm - std::log(-std::expm1(lv));
}

double DelayAnalyzer::kernel(double s, int w) const { return std::exp(log_kernel(s, w)); }

DelayBoundResult DelayAnalyzer::delay_bound(int w) const {
  if (w < 0) throw DomainError("delay_bound: w must be >= 0");
  DelayBoundResult r;
  r.w = w;
  r.method = mellin_.method();
  r.stable_s_interval = interval_;
  if (interval_.empty) {
    r.bound = 1.0;
    r.log_bound = 0.0;
    r.stable = false;
    return r;
  }
  r.stable = true;
  auto f = [&](double s) {
    if (!(s > interval_.s_lo && s < interval_.s_hi)) return std::numeric_limits<double>::infinity();
    try {
      return log_kernel(s, w);
    } catch (const InstabilityError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const int n = opts_.grid_points;
  const double hi_edge = interval_.s_hi;
  std::vector<double> grid(static_cast<std::size_t>(n));
  // Log-spaced from 1e-6 s_hi to just below s_hi.
  for (int i = 0; i < n; ++i) {
    const double frac = static_cast<double>(i) / (n - 1);
    grid[static_cast<std::size_t>(i)] = hi_edge * std::pow(10.0, -6.0 * (1.0 - frac)) * (1.0 - 1e-9 * frac);
  }
  std::size_t best = 0;
  double best_val = f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double lo = best == 0 ? interval_.s_lo : grid[best - 1];
  double hi = best + 1 == grid.size() ? hi_edge : grid[best + 1];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-10 * hi; ++it) {
    if (f1 > f2) {
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
  double s_star = grid[best];
  double val = best_val;
  for (double cand : {x1, x2, 0.5 * (lo + hi)}) {
    const double v = f(cand);
    if (v < val) {
      val = v;
      s_star = cand;
    }
  }
  r.s_star = s_star;
  r.log_bound = val;
  r.bound = val >= 0 ? 1.0 : std::exp(val);
  return r;
}

std::vector<DelayBoundResult> DelayAnalyzer::delay_bounds(const std::vector<int>& ws) const {
  std::vector<DelayBoundResult> out(ws.size());
  parallel_for(ws.size(), 0, [&](std::size_t i) { out[i] = delay_bound(ws[i]); });
  return out;
}

// ---------------------------------------------------------------------------

StabilityInterval stability_interval(const SystemConfig& cfg, const ArrivalSpec& arr,
                                     MellinMethod method, const SncOptions& opts) {
  return DelayAnalyzer(cfg, arr, method, opts).stability_interval();
}

double kernel(const SystemConfig& cfg, const ArrivalSpec& arr, double s, int w,
              MellinMethod method, const SncOptions& opts) {
  if (w < 0) throw DomainError("kernel: w must be >= 0");
  const MellinEvaluator mellin(cfg, method, opts.mellin);
  const double lm = mellin(1.0 - cfg.symbols_per_slot() * s).log_value;
  const double lv = arr.lambda_nats_per_slot * s + lm;
  if (!(lv < 0)) {
    throw InstabilityError("kernel: V(s) >= 1 at s=" + std::to_string(s));
  }
  return std::exp(w * lm - std::log(-std::expm1(lv)));
}

DelayBoundResult delay_bound(const SystemConfig& cfg, const ArrivalSpec& arr, int w,
                             MellinMethod method, const SncOptions& opts) {
  return DelayAnalyzer(cfg, arr, method, opts).delay_bound(w);
}

double effective_capacity(const SystemConfig& cfg, double theta, MellinMethod method,
                          bool per_slot, const MellinOptions& opts) {
  if (!(theta > 0)) throw DomainError("effective_capacity: theta must be > 0");
  const double arg = 1.0 - (per_slot ? cfg.symbols_per_slot() : 1) * theta;
  const MellinEvaluator mellin(cfg, method, opts);
  return -mellin(arg).log_value / theta;
}

double mean_service_nats(const SystemConfig& cfg) {
  const double rho = cfg.rho();
  auto survival = [&](double x) { return channel::min_gain_survival(cfg, x); };
  double hi = channel::gain_quantile(cfg.antennas(), std::min(0.5, 1.0 / cfg.users()));
  while (survival(hi) > 1e-18) hi *= 1.5;
  std::vector<double> bp = {0.0};
  for (double x = hi * std::ldexp(1.0, -20); x < hi; x *= 2.0) bp.push_back(x);
  bp.push_back(hi);
  quadrature::Options qo;
  qo.abs_tol = 1e-15;
  qo.rel_tol = 1e-13;
  // E[log(1 + rho X)] = int_0^inf rho / (1 + rho x) S(x) dx.
  const auto r = quadrature::integrate(
      [&](double x) { return rho / (1.0 + rho * x) * survival(x); }, bp, qo);
  return cfg.symbols_per_slot() * r.value;
}

}  // namespace mcdelay
