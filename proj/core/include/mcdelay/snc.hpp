#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "mcdelay/channel.hpp"
#include "mcdelay/mellin.hpp"

namespace mcdelay {

/// Constant-rate fluid arrivals, lambda nats per slot.
struct ArrivalSpec {
  double lambda_nats_per_slot;

  explicit ArrivalSpec(double lambda);

  /// rate_bps * slot_seconds * ln 2.
  static ArrivalSpec from_rate_bps(double rate_bps, double slot_seconds);
};

/// M_alpha(s) = exp(lambda (s - 1)).
double arrival_mellin(const ArrivalSpec& arr, double s);

/// Maximal interval (s_lo, s_hi) of s > 0 on which
/// V(s) = M_alpha(1+s) M_g(1 - N s) < 1. `empty` marks an unstable or
/// infeasible configuration.
struct StabilityInterval {
  double s_lo = 0.0;
  double s_hi = 0.0;
  bool empty = true;

  bool contains(double s) const { return !empty && s > s_lo && s < s_hi; }
};

struct DelayBoundResult {
  int w = 0;
  double bound = 1.0;       // min(kernel(s*), 1)
  double log_bound = 0.0;   // log of the unclipped kernel at s* (0 when unstable)
  double s_star = 0.0;
  StabilityInterval stable_s_interval;
  MellinMethod method = MellinMethod::Quadrature;
  bool stable = false;
};

struct SncOptions {
  /// s search cap is s_cap_factor / N.
  double s_cap_factor = 10.0;
  /// Log-spaced seed points for the golden-section search.
  int grid_points = 64;
  MellinOptions mellin{};
};

/// Steady-state kernel machinery for one (config, arrivals, method) triple.
///
/// Values of M_g(1 - N s) are memoized, so sweeping w re-uses the Mellin
/// evaluations made while locating the stability interval. Safe to share
/// across threads.
class DelayAnalyzer {
 public:
  DelayAnalyzer(const SystemConfig& cfg, const ArrivalSpec& arr, MellinMethod method,
                SncOptions opts = {});

  /// log M_g(1 - N s).
  double log_service_mellin(double s) const;
  /// log V(s) = lambda s + log M_g(1 - N s).
  double log_stability(double s) const;

  const StabilityInterval& stability_interval() const { return interval_; }

  /// (M_g(1-Ns))^w / (1 - M_alpha(1+s) M_g(1-Ns)); throws InstabilityError
  /// when V(s) >= 1.
  double kernel(double s, int w) const;
  double log_kernel(double s, int w) const;

  DelayBoundResult delay_bound(int w) const;
  std::vector<DelayBoundResult> delay_bounds(const std::vector<int>& ws) const;

  double s_cap() const { return s_cap_; }
  const SystemConfig& config() const { return cfg_; }
  const ArrivalSpec& arrivals() const { return arr_; }
  MellinMethod method() const { return mellin_.method(); }

 private:
  StabilityInterval locate_interval() const;

  SystemConfig cfg_;
  ArrivalSpec arr_;
  MellinEvaluator mellin_;
  SncOptions opts_;
  double s_cap_;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, double> cache_;
  StabilityInterval interval_;
};

StabilityInterval stability_interval(const SystemConfig& cfg, const ArrivalSpec& arr,
                                     MellinMethod method, const SncOptions& opts = {});

double kernel(const SystemConfig& cfg, const ArrivalSpec& arr, double s, int w,
              MellinMethod method, const SncOptions& opts = {});

DelayBoundResult delay_bound(const SystemConfig& cfg, const ArrivalSpec& arr, int w,
                             MellinMethod method, const SncOptions& opts = {});

/// R(theta) = -(1/theta) log M_g(1 - theta), nats per symbol. With
/// `per_slot`, the Mellin argument is 1 - N theta (nats per slot).
double effective_capacity(const SystemConfig& cfg, double theta, MellinMethod method,
                          bool per_slot = false, const MellinOptions& opts = {});

/// N E[log(1 + rho X_(1))] in nats per slot, by quadrature.
double mean_service_nats(const SystemConfig& cfg);

}  // namespace mcdelay
