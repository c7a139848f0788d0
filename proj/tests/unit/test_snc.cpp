#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "mcdelay/errors.hpp"
#include "mcdelay/mellin.hpp"
#include "mcdelay/snc.hpp"

using mcdelay::ArrivalSpec;
using mcdelay::DelayAnalyzer;
using mcdelay::MellinMethod;
using mcdelay::SystemConfig;

namespace {

const SystemConfig kFig1 = SystemConfig::from_db(5, 10, 10.0);
const ArrivalSpec kFig1Arrivals = ArrivalSpec::from_rate_bps(100e3, 2e-3);

}  // namespace

TEST(ArrivalMellin, Examples) {
  EXPECT_EQ(mcdelay::arrival_mellin(ArrivalSpec(2.0), 1.0), 1.0);
  EXPECT_NEAR(mcdelay::arrival_mellin(ArrivalSpec(2.0), 1.5), std::exp(1.0), 1e-15);
  EXPECT_NEAR(mcdelay::arrival_mellin(ArrivalSpec(1e-4), 5.0), std::exp(4e-4), 1e-16);
  EXPECT_NEAR(kFig1Arrivals.lambda_nats_per_slot, 200.0 * std::log(2.0), 1e-12);
  EXPECT_THROW(ArrivalSpec(0.0), mcdelay::ConfigError);
}

TEST(StabilityInterval, Examples) {
  for (auto m : {MellinMethod::Exact, MellinMethod::Quadrature, MellinMethod::Asymptotic,
                 MellinMethod::AlzerUpper}) {
    const auto cfg = SystemConfig::from_db(2, 3, 0.0);
    EXPECT_FALSE(mcdelay::stability_interval(cfg, ArrivalSpec(1e-6), m).empty);
  }
  const auto cfg = SystemConfig::from_db(3, 4, 5.0);
  const double mean = mcdelay::mean_service_nats(cfg);
  EXPECT_TRUE(mcdelay::stability_interval(cfg, ArrivalSpec(mean * 1.02),
                                          MellinMethod::Quadrature).empty);
  EXPECT_FALSE(mcdelay::stability_interval(cfg, ArrivalSpec(mean * 0.98),
                                           MellinMethod::Quadrature).empty);

  const auto iv = mcdelay::stability_interval(kFig1, kFig1Arrivals, MellinMethod::Exact);
  ASSERT_FALSE(iv.empty);
  // Root-bracketing oracle: V crosses 1 at s_hi.
  const DelayAnalyzer an(kFig1, kFig1Arrivals, MellinMethod::Exact);
  EXPECT_LT(an.log_stability(iv.s_hi * (1 - 1e-6)), 0.0);
  if (iv.s_hi < an.s_cap()) {
    EXPECT_GT(an.log_stability(iv.s_hi * (1 + 1e-6)), 0.0);
  }
  EXPECT_LT(an.log_stability(0.5 * (iv.s_lo + iv.s_hi)), 0.0);
}

TEST(Kernel, PowerZeroAndRatioIdentity) {
  const DelayAnalyzer an(kFig1, kFig1Arrivals, MellinMethod::Quadrature);
  const auto& iv = an.stability_interval();
  ASSERT_FALSE(iv.empty);
  for (double frac : {0.05, 0.3, 0.7, 0.95}) {
    const double s = iv.s_lo + frac * (iv.s_hi - iv.s_lo);
    const double v = std::exp(an.log_stability(s));
    EXPECT_NEAR(an.kernel(s, 0) * (1 - v), 1.0, 1e-12);
    const double mg = std::exp(an.log_service_mellin(s));
    EXPECT_LE(mg, 1.0);
    for (int w : {0, 1, 7, 30}) {
      EXPECT_NEAR(an.kernel(s, w + 1) / (an.kernel(s, w) * mg), 1.0, 1e-12);
    }
  }
  ASSERT_LT(iv.s_hi, an.s_cap());
  EXPECT_THROW(an.kernel(std::min(1.5 * iv.s_hi, an.s_cap()), 1), mcdelay::InstabilityError);
}

TEST(Kernel, HighPrecisionOracle) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const double lambda = 138.63, s = 1e-3;
  const int w = 5;
  const big rho = big(10) / 5;
  const big arg = 1 - big(100) * big(s);
  boost::math::quadrature::exp_sinh<big> integrator;
  auto integrand = [&](big x) -> big {
    if (x > 2000) return big(0);  // Q(5, x)^10 < e^-19000
    big term = 1, sum = 1;
    for (int n = 1; n < 5; ++n) {
      term *= x / n;
      sum += term;
    }
    const big q = exp(-x) * sum;
    return pow(1 + rho * x, arg - 2) * pow(q, 10);
  };
  const big integral = integrator.integrate(integrand, big(1e-30));
  const big mg = 1 + (arg - 1) * rho * integral;
  const big v = exp(big(lambda) * big(s)) * mg;
  ASSERT_LT(v, 1);
  const big expected = pow(mg, w) / (1 - v);

  const ArrivalSpec arr(lambda);
  for (auto m : {MellinMethod::Quadrature, MellinMethod::Exact}) {
    const double got = mcdelay::kernel(kFig1, arr, s, w, m);
    EXPECT_NEAR(got / static_cast<double>(expected), 1.0, 1e-9);
  }
}

TEST(DelayBound, UnstableIsFlaggedAndClipped) {
  const auto cfg = SystemConfig::from_db(1, 10, 0.0);
  const auto r = mcdelay::delay_bound(cfg, ArrivalSpec(500.0), 3, MellinMethod::Quadrature);
  EXPECT_FALSE(r.stable);
  EXPECT_EQ(r.bound, 1.0);
  EXPECT_TRUE(r.stable_s_interval.empty);
}

TEST(DelayBound, MonotoneInWAndPower) {
  std::vector<std::vector<double>> curves;
  for (double db : {0.0, 5.0, 10.0}) {
    const DelayAnalyzer an(SystemConfig::from_db(5, 10, db), kFig1Arrivals,
                           MellinMethod::Quadrature);
    std::vector<int> ws;
    for (int w = 0; w <= 30; ++w) ws.push_back(w);
    const auto rs = an.delay_bounds(ws);
    std::vector<double> curve;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      EXPECT_EQ(rs[i].w, ws[i]);
      EXPECT_GT(rs[i].bound, 0.0);
      EXPECT_LE(rs[i].bound, 1.0);
      if (i > 0) EXPECT_LE(rs[i].bound, rs[i - 1].bound * (1 + 1e-9));
      curve.push_back(rs[i].bound);
    }
    curves.push_back(curve);
  }
  for (std::size_t p = 1; p < curves.size(); ++p) {
    for (std::size_t w = 0; w < curves[p].size(); ++w) {
      EXPECT_LE(curves[p][w], curves[p - 1][w] * (1 + 1e-9)) << p << " " << w;
    }
  }
}

TEST(DelayBound, MonotoneInModelParameters) {
  const ArrivalSpec arr = ArrivalSpec::from_rate_bps(80e3, 2e-3);
  auto bound = [&](int m, int k, const ArrivalSpec& a) {
    return mcdelay::delay_bound(SystemConfig::from_db(m, k, 10.0), a, 4, MellinMethod::Quadrature)
        .bound;
  };
  EXPECT_LE(bound(4, 6, arr), bound(3, 6, arr) * (1 + 1e-9));
  EXPECT_LE(bound(4, 6, arr), bound(4, 8, arr) * (1 + 1e-9));
  EXPECT_LE(bound(4, 6, arr), bound(4, 6, ArrivalSpec::from_rate_bps(90e3, 2e-3)) * (1 + 1e-9));
}

TEST(DelayBound, OptimizerCertificate) {
  const DelayAnalyzer an(kFig1, kFig1Arrivals, MellinMethod::Quadrature);
  for (int w : {1, 5, 15}) {
    const auto r = an.delay_bound(w);
    ASSERT_TRUE(r.stable);
    EXPECT_TRUE(r.stable_s_interval.contains(r.s_star));
    const auto& iv = r.stable_s_interval;
    for (int i = 1; i <= 512; ++i) {
      const double s = iv.s_lo + (iv.s_hi - iv.s_lo) * i / 513.0;
      EXPECT_LE(r.log_bound, an.log_kernel(s, w) + 1e-9) << "w=" << w << " s=" << s;
    }
  }
}

TEST(EffectiveCapacity, Examples) {
  const auto cfg = SystemConfig(1, 1, 1.0);
  const double r = mcdelay::effective_capacity(cfg, 0.5, MellinMethod::Exact);
  EXPECT_NEAR(r, -2 * std::log(0.757872156141312), 1e-9);
  EXPECT_NEAR(r, 0.554481, 1e-6);

  for (const auto& c : {SystemConfig::from_db(2, 4, 3.0), SystemConfig::from_db(5, 10, 10.0)}) {
    const double mean = mcdelay::mean_service_nats(c) / c.symbols_per_slot();
    EXPECT_NEAR(mcdelay::effective_capacity(c, 1e-4, MellinMethod::Quadrature) / mean, 1.0, 1e-3);
    double prev = mean * 1.0001;
    for (double theta : {1e-3, 0.1, 0.5, 2.0, 10.0, 100.0}) {
      const double v = mcdelay::effective_capacity(c, theta, MellinMethod::Quadrature);
      EXPECT_LE(v, prev);
      EXPECT_GE(v, 0.0);
      prev = v;
    }
  }
  const double per_slot = mcdelay::effective_capacity(kFig1, 1e-3, MellinMethod::Quadrature, true);
  EXPECT_NEAR(per_slot / mcdelay::mean_service_nats(kFig1), 1.0, 0.05);
}
