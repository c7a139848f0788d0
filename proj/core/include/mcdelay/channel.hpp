#pragma once

#include <cstdint>
#include <random>

namespace mcdelay {

/// Antenna/user/power/blocklength parameters of the multicast downlink.
///
/// `rho()` is always P/M; it is derived, never stored.
class SystemConfig {
 public:
  SystemConfig(int antennas, int users, double power_linear, int symbols_per_slot = 100,
               double slot_seconds = 2e-3);

  static SystemConfig from_db(int antennas, int users, double power_db,
                              int symbols_per_slot = 100, double slot_seconds = 2e-3);

  int antennas() const { return antennas_; }
  int users() const { return users_; }
  double power() const { return power_; }
  double rho() const { return power_ / antennas_; }
  int symbols_per_slot() const { return symbols_; }
  double slot_seconds() const { return slot_seconds_; }

  SystemConfig with_antennas(int m) const;
  SystemConfig with_users(int k) const;
  SystemConfig with_power(double p) const;

 private:
  int antennas_;
  int users_;
  double power_;
  int symbols_;
  double slot_seconds_;
};

double db_to_linear(double db);

/// Independent random stream for one replication. The pair
/// (master_seed, stream_index) is hashed with SplitMix64 into the Mersenne
/// Twister seed, so replications are reproducible regardless of the order or
/// thread they run on.
class StreamRng {
 public:
  StreamRng(std::uint64_t master_seed, std::uint64_t stream_index);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Exp(1) by inversion.
  double exponential();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

namespace channel {

/// F_X(x) for X = ||h||^2 ~ Gamma(M, 1), i.e. 1 - Gamma(M, x)/Gamma(M).
double gain_cdf(int antennas, double x);

/// 1 - F_X(x) = Gamma(M, x)/Gamma(M), accurate in the upper tail.
double gain_survival(int antennas, double x);

/// CDF of the bottleneck gain X_(1) = min_k ||h_k||^2:
/// 1 - (Gamma(M, x)/Gamma(M))^K.
double min_gain_cdf(const SystemConfig& cfg, double x);

/// (Gamma(M, x)/Gamma(M))^K.
double min_gain_survival(const SystemConfig& cfg, double x);

/// Density of X ~ Gamma(M, 1).
double gain_pdf(int antennas, double x);

/// x with |gain_cdf(M, x) - p| <= 1e-12, by safeguarded Newton inside a
/// bisection bracket. Throws DomainError unless 0 < p < 1.
double gain_quantile(int antennas, double p);

/// One draw of X_(1): the minimum over K users of a sum of M Exp(1) draws.
double sample_min_gain(const SystemConfig& cfg, StreamRng& rng);

}  // namespace channel
}  // namespace mcdelay
