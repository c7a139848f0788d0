#include "mcdelay/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mcdelay/errors.hpp"
#include "mcdelay/specfun.hpp"

namespace mcdelay {

SystemConfig::SystemConfig(int antennas, int users, double power_linear,
                           int symbols_per_slot, double slot_seconds)
    : antennas_(antennas),
      users_(users),
      power_(power_linear),
      symbols_(symbols_per_slot),
      slot_seconds_(slot_seconds) {
  if (antennas < 1) throw ConfigError("SystemConfig: M must be >= 1");
  if (users < 1) throw ConfigError("SystemConfig: K must be >= 1");
  if (!(power_linear > 0) || !std::isfinite(power_linear)) {
    throw ConfigError("SystemConfig: P must be finite and > 0");
  }
  if (symbols_per_slot < 1) throw ConfigError("SystemConfig: N must be >= 1");
  if (!(slot_seconds > 0)) throw ConfigError("SystemConfig: slot duration must be > 0");
}

SystemConfig SystemConfig::from_db(int antennas, int users, double power_db,
                                   int symbols_per_slot, double slot_seconds) {
  return SystemConfig(antennas, users, db_to_linear(power_db), symbols_per_slot,
                      slot_seconds);
}

SystemConfig SystemConfig::with_antennas(int m) const {
  return SystemConfig(m, users_, power_, symbols_, slot_seconds_);
}
SystemConfig SystemConfig::with_users(int k) const {
  return SystemConfig(antennas_, k, power_, symbols_, slot_seconds_);
}
SystemConfig SystemConfig::with_power(double p) const {
  return SystemConfig(antennas_, users_, p, symbols_, slot_seconds_);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

StreamRng::StreamRng(std::uint64_t master_seed, std::uint64_t stream_index) {
  const std::uint64_t a = splitmix64(master_seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(stream_index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  engine_.seed(seq);
}

double StreamRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double StreamRng::exponential() { return -std::log1p(-uniform()); }

namespace channel {

double gain_cdf(int antennas, double x) {
  if (antennas < 1) throw DomainError("gain_cdf: M must be >= 1");
  if (x < 0) throw DomainError("gain_cdf: x must be >= 0");
  return specfun::regularized_gamma_p(antennas, x);
}

double gain_survival(int antennas, double x) {
  if (antennas < 1) throw DomainError("gain_survival: M must be >= 1");
  if (x < 0) throw DomainError("gain_survival: x must be >= 0");
  return specfun::regularized_gamma_q(antennas, x);
}

double gain_pdf(int antennas, double x) {
  if (x < 0) return 0.0;
  if (x == 0) return antennas == 1 ? 1.0 : 0.0;
  return std::exp((antennas - 1) * std::log(x) - x - std::lgamma(antennas));
}

namespace {
// log of the per-user survival, computed from whichever of P, Q is small.
double log_gain_survival(int antennas, double x) {
  if (x < antennas + 1.0) {
    return std::log1p(-specfun::regularized_gamma_p(antennas, x));
  }
  return std::log(specfun::regularized_gamma_q(antennas, x));
}
}  // namespace

double min_gain_survival(const SystemConfig& cfg, double x) {
  if (x < 0) throw DomainError("min_gain_survival: x must be >= 0");
  if (x == 0) return 1.0;
  return std::exp(cfg.users() * log_gain_survival(cfg.antennas(), x));
}

double min_gain_cdf(const SystemConfig& cfg, double x) {
  if (x < 0) throw DomainError("min_gain_cdf: x must be >= 0");
  if (x == 0) return 0.0;
  return -std::expm1(cfg.users() * log_gain_survival(cfg.antennas(), x));
}

double gain_quantile(int antennas, double p) {
  if (!(p > 0 && p < 1)) {
    throw DomainError("gain_quantile: p must lie in (0, 1), got " + std::to_string(p));
  }
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * antennas);
  while (gain_cdf(antennas, hi) < p) {
    lo = hi;
    hi *= 2.0;
  }
  // Start from the small-x Taylor inversion when p is tiny, else the mean.
  double x = std::min(hi, std::exp((std::log(p) + std::lgamma(antennas + 1.0)) / antennas));
  if (!(x > lo)) x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = gain_cdf(antennas, x) - p;
    if (std::abs(f) <= 1e-13 * std::max(p, 1e-3) || hi - lo <= 1e-15 * hi) break;
    if (f > 0) {
      hi = x;
    } else {
      lo = x;
    }
    const double d = gain_pdf(antennas, x);
    double next = d > 0 ? x - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  return x;
}

double sample_min_gain(const SystemConfig& cfg, StreamRng& rng) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.users(); ++k) {
    double g = 0.0;
    for (int m = 0; m < cfg.antennas(); ++m) g += rng.exponential();
    best = std::min(best, g);
  }
  return best;
}

}  // namespace channel
}  // namespace mcdelay
