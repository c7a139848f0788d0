#include "mcdelay/queue_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mcdelay/errors.hpp"
#include "mcdelay/parallel.hpp"

namespace mcdelay::sim {

SimConfig SimConfig::with_defaults(const SystemConfig& cfg, const ArrivalSpec& arr,
                                   std::int64_t horizon_slots, int replications,
                                   std::uint64_t master_seed) {
  SimConfig s{cfg, arr};
  s.horizon_slots = horizon_slots;
  s.warmup_slots = horizon_slots / 10;
  s.replications = replications;
  s.master_seed = master_seed;
  return s;
}

void SimConfig::validate() const {
  if (horizon_slots <= 0) throw ConfigError("SimConfig: horizon must be > 0");
  if (warmup_slots < 0) throw ConfigError("SimConfig: warmup must be >= 0");
  if (warmup_slots >= horizon_slots) throw ConfigError("SimConfig: horizon must exceed warmup");
  if (replications < 1) throw ConfigError("SimConfig: replications must be >= 1");
}

namespace {

std::int64_t lambda_in_quanta(const ArrivalSpec& arr) {
  return std::max<std::int64_t>(1, std::llround(arr.lambda_nats_per_slot * kQuantaPerNat));
}

std::int64_t capacity_in_quanta(const SystemConfig& cfg, double min_gain) {
  const double nats = cfg.symbols_per_slot() * std::log1p(cfg.rho() * min_gain);
  return static_cast<std::int64_t>(std::floor(nats * kQuantaPerNat));
}

// Queue dynamics for one replication. `extend_cap` extra slots are simulated
// after the horizon so the fluid of the last measured slots can drain;
// arrivals after t never affect the FIFO delay of fluid arriving at t.
struct Run {
  std::vector<std::int64_t> departures_cum;
  std::vector<std::int64_t> backlog;
  std::vector<std::int64_t> capacity;
  std::vector<std::int32_t> delays;
  std::int64_t censored = 0;
};

Run run_queue(const SimConfig& sim, int replication_index, bool keep_curves) {
  StreamRng rng(sim.master_seed, static_cast<std::uint64_t>(replication_index));
  const std::int64_t lam = lambda_in_quanta(sim.arr);
  const std::int64_t horizon = sim.horizon_slots;
  const std::int64_t extend_cap = horizon;

  Run run;
  run.delays.assign(static_cast<std::size_t>(horizon), 0);
  std::vector<std::int64_t> dep_cum;  // D(0, i)
  dep_cum.reserve(static_cast<std::size_t>(horizon) + 1024);
  dep_cum.push_back(0);
  std::int64_t q = 0;
  if (keep_curves) {
    run.backlog.push_back(0);
  }
  auto step = [&] {
    const std::int64_t cap = capacity_in_quanta(sim.cfg, channel::sample_min_gain(sim.cfg, rng));
    const std::int64_t avail = q + lam;
    const std::int64_t d = std::min(cap, avail);
    q = avail - d;
    dep_cum.push_back(dep_cum.back() + d);
    if (keep_curves) {
      run.backlog.push_back(q);
      run.capacity.push_back(cap);
    }
  };
  for (std::int64_t i = 0; i < horizon; ++i) step();

  // Two-pointer sweep: Delta(t) = min{u >= 0 : D(0, t+1+u) >= A(0, t+1)}.
  std::size_t j = 1;
  std::int64_t extended = 0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    const std::int64_t target = lam * (t + 1);
    if (j < static_cast<std::size_t>(t + 1)) j = static_cast<std::size_t>(t + 1);
    bool resolved = true;
    while (dep_cum[j] < target) {
      ++j;
      if (j >= dep_cum.size()) {
        if (extended >= extend_cap) {
          resolved = false;
          --j;
          break;
        }
        step();
        ++extended;
      }
    }
    run.delays[static_cast<std::size_t>(t)] =
        static_cast<std::int32_t>(static_cast<std::int64_t>(j) - (t + 1));
    if (!resolved) ++run.censored;
  }
  if (keep_curves) run.departures_cum = std::move(dep_cum);
  return run;
}

double sample_stderr(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace

ReplicationTrace trace_replication(const SimConfig& sim, int replication_index) {
  sim.validate();
  Run run = run_queue(sim, replication_index, true);
  ReplicationTrace tr;
  tr.lambda_quanta = lambda_in_quanta(sim.arr);
  tr.departures_cum = std::move(run.departures_cum);
  tr.backlog = std::move(run.backlog);
  tr.capacity = std::move(run.capacity);
  tr.delays = std::move(run.delays);
  tr.arrivals_cum.resize(tr.departures_cum.size());
  for (std::size_t i = 0; i < tr.arrivals_cum.size(); ++i) {
    tr.arrivals_cum[i] = tr.lambda_quanta * static_cast<std::int64_t>(i);
  }
  return tr;
}

SimResult simulate(const SimConfig& sim) {
  sim.validate();
  const int reps = sim.replications;
  const std::int64_t n_meas = sim.horizon_slots - sim.warmup_slots;

  struct PerRep {
    std::vector<std::int64_t> histogram;  // counts of Delta == d
    double mean_capacity = 0.0;
    double mean_backlog = 0.0;
    std::int64_t censored = 0;
    std::vector<std::int32_t> samples;
  };
  std::vector<PerRep> per(static_cast<std::size_t>(reps));

  parallel_for(per.size(), sim.threads, [&](std::size_t r) {
    Run run = run_queue(sim, static_cast<int>(r), true);
    PerRep& out = per[r];
    std::int32_t max_d = 0;
    for (std::int64_t t = sim.warmup_slots; t < sim.horizon_slots; ++t) {
      max_d = std::max(max_d, run.delays[static_cast<std::size_t>(t)]);
    }
    out.histogram.assign(static_cast<std::size_t>(max_d) + 1, 0);
    double backlog_sum = 0.0;
    for (std::int64_t t = sim.warmup_slots; t < sim.horizon_slots; ++t) {
      ++out.histogram[static_cast<std::size_t>(run.delays[static_cast<std::size_t>(t)])];
      backlog_sum += static_cast<double>(run.backlog[static_cast<std::size_t>(t) + 1]);
    }
    out.mean_backlog = backlog_sum / static_cast<double>(n_meas) / kQuantaPerNat;
    double cap_sum = 0.0;
    for (std::int64_t t = 0; t < sim.horizon_slots; ++t) {
      cap_sum += static_cast<double>(run.capacity[static_cast<std::size_t>(t)]);
    }
    out.mean_capacity = cap_sum / static_cast<double>(sim.horizon_slots) / kQuantaPerNat;
    out.censored = run.censored;
    if (sim.keep_samples) {
      out.samples.assign(run.delays.begin() + sim.warmup_slots, run.delays.end());
    }
  });

  SimResult res;
  res.replications = reps;
  res.slots_per_replication = n_meas;
  res.effective_lambda = static_cast<double>(lambda_in_quanta(sim.arr)) / kQuantaPerNat;
  std::size_t max_len = 0;
  for (const auto& p : per) max_len = std::max(max_len, p.histogram.size());
  res.max_delay = static_cast<int>(max_len) - 1;

  std::vector<double> caps;
  std::vector<double> backlogs;
  for (auto& p : per) {
    caps.push_back(p.mean_capacity);
    backlogs.push_back(p.mean_backlog);
    res.censored += p.censored;
    if (sim.keep_samples) res.delay_samples.push_back(std::move(p.samples));
  }
  res.mean_service = std::accumulate(caps.begin(), caps.end(), 0.0) / reps;
  res.mean_service_stderr = sample_stderr(caps);
  res.mean_backlog = std::accumulate(backlogs.begin(), backlogs.end(), 0.0) / reps;

  // tail[r][w] = #{t : Delta(t) > w} in replication r.
  std::vector<std::vector<std::int64_t>> tails(per.size());
  for (std::size_t r = 0; r < per.size(); ++r) {
    const auto& h = per[r].histogram;
    auto& tail = tails[r];
    tail.assign(h.size(), 0);
    for (std::size_t d = h.size() - 1; d > 0; --d) tail[d - 1] = tail[d] + h[d];
  }
  for (int w = 0; w <= res.max_delay; ++w) {
    std::vector<double> fractions;
    fractions.reserve(per.size());
    for (const auto& tail : tails) {
      const auto idx = static_cast<std::size_t>(w);
      const std::int64_t n = idx < tail.size() ? tail[idx] : 0;
      fractions.push_back(static_cast<double>(n) / static_cast<double>(n_meas));
    }
    ViolationPoint v;
    v.w = w;
    v.p_hat = std::accumulate(fractions.begin(), fractions.end(), 0.0) / reps;
    v.std_error = sample_stderr(fractions);
    res.violation_curve.push_back(v);
  }
  return res;
}

ViolationPoint empirical_violation(const SimResult& result, int w) {
  if (w < 0 || w > result.max_delay) {
    throw std::out_of_range("empirical_violation: w=" + std::to_string(w) +
                            " outside recorded range [0, " + std::to_string(result.max_delay) +
                            "]");
  }
  return result.violation_curve[static_cast<std::size_t>(w)];
}

}  // namespace mcdelay::sim
