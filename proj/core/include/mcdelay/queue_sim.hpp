#pragma once

#include <cstdint>
#include <vector>

#include "mcdelay/channel.hpp"
#include "mcdelay/snc.hpp"

namespace mcdelay::sim {

/// Fluid amounts are tracked as integer multiples of 2^-24 nats so that the
/// Lindley recursion and the cumulative arrival/departure curves agree
/// exactly.
inline constexpr double kQuantaPerNat = 16777216.0;

struct SimConfig {
  SystemConfig cfg;
  ArrivalSpec arr;
  std::int64_t horizon_slots = 100000;
  std::int64_t warmup_slots = 10000;
  int replications = 20;
  std::uint64_t master_seed = 1;
  int threads = 0;            // 0: MCDELAY_THREADS / hardware default
  bool keep_samples = false;  // retain per-slot delays in SimResult

  /// Warmup defaults to 10% of the horizon.
  static SimConfig with_defaults(const SystemConfig& cfg, const ArrivalSpec& arr,
                                 std::int64_t horizon_slots, int replications,
                                 std::uint64_t master_seed);
  void validate() const;
};

struct ViolationPoint {
  int w = 0;
  double p_hat = 0.0;
  double std_error = 0.0;
};

struct SimResult {
  /// Post-warmup Delta(t) per replication; empty unless keep_samples.
  std::vector<std::vector<std::int32_t>> delay_samples;
  /// w = 0 .. max_delay; p_hat(max_delay) == 0.
  std::vector<ViolationPoint> violation_curve;
  double mean_service = 0.0;         // nats/slot, capacity averaged over slots
  double mean_service_stderr = 0.0;  // between replications
  double mean_backlog = 0.0;         // nats, post-warmup
  double effective_lambda = 0.0;     // quantized arrival rate actually simulated
  int max_delay = 0;
  int replications = 0;
  std::int64_t slots_per_replication = 0;  // post-warmup samples per replication
  std::int64_t censored = 0;  // delays still unresolved at the end of the run
};

/// Slot-level record of one replication, for invariant checks.
struct ReplicationTrace {
  std::vector<std::int64_t> arrivals_cum;    // A(0, i), i = 0..n
  std::vector<std::int64_t> departures_cum;  // D(0, i)
  std::vector<std::int64_t> backlog;         // Lindley q_i
  std::vector<std::int64_t> capacity;        // C_i in quanta
  std::vector<std::int32_t> delays;          // Delta(t) for t = 0..horizon-1
  std::int64_t lambda_quanta = 0;
};

/// One replication with full slot-level bookkeeping.
ReplicationTrace trace_replication(const SimConfig& sim, int replication_index);

/// Monte Carlo estimate of the delay-violation curve.
SimResult simulate(const SimConfig& sim);

/// (p_hat, stderr) for P[Delta > w]; throws std::out_of_range beyond the
/// recorded curve.
ViolationPoint empirical_violation(const SimResult& result, int w);

}  // namespace mcdelay::sim
