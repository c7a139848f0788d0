#include "mcdelay/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "mcdelay/errors.hpp"
#include "mcdelay/quadrature.hpp"

namespace mcdelay::specfun {
namespace {

constexpr int kMaxIterations = 100000;
constexpr double kSmallXBranch = 1.5;

template <class T>
constexpr T tiny() {
  return std::numeric_limits<T>::min() / std::numeric_limits<T>::epsilon();
}

template <class T>
[[noreturn]] void no_convergence(const char* where, T a, T x) {
  throw NonConvergenceError(std::string(where) + ": no convergence for a=" +
                            std::to_string(static_cast<double>(a)) +
                            ", x=" + std::to_string(static_cast<double>(x)));
}

// Legendre continued fraction: Gamma(a, x) = e^-x x^a * cf(a, x).
// Converges for every real a once x > 0; fast when x >= a + 1.
template <class T>
T gamma_cf(T a, T x) {
  const T eps = std::numeric_limits<T>::epsilon();
  T b = x + 1 - a;
  T c = 1 / tiny<T>();
  T d = std::abs(b) < tiny<T>() ? 1 / tiny<T>() : 1 / b;
  T h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const T an = -static_cast<T>(i) * (static_cast<T>(i) - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny<T>()) d = tiny<T>();
    c = b + an / c;
    if (std::abs(c) < tiny<T>()) c = tiny<T>();
    d = 1 / d;
    const T del = d * c;
    h *= del;
    if (std::abs(del - 1) <= eps) return h;
  }
  no_convergence("gamma_cf", a, x);
}

// Series for the regularized lower function, a > 0:
// P(a, x) = e^-x x^a / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n)).
template <class T>
T gamma_p_series(T a, T x) {
  const T eps = std::numeric_limits<T>::epsilon();
  T ap = a;
  T del = 1 / a;
  T sum = del;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1;
    del *= x / ap;
    sum += del;
    if (std::abs(del) <= std::abs(sum) * eps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  no_convergence("gamma_p_series", a, x);
}

// Gamma(a, x) for 0 < a <= 1 and small x, written so that neither the a -> 0
// pole nor Gamma(a) - gamma(a, x) cancels:
//   (Gamma(1+a) - 1)/a - expm1(a ln x)/a - x^a sum_{n>=1} (-x)^n / (n! (a+n)).
template <class T>
T gamma_small_a(T a, T x) {
  const T eps = std::numeric_limits<T>::epsilon();
  const T lx = std::log(x);
  const T head = boost::math::tgamma1pm1(a) / a - std::expm1(a * lx) / a;
  T term = 1;
  T tail = 0;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= -x / static_cast<T>(n);
    const T contrib = term / (a + static_cast<T>(n));
    tail += contrib;
    if (std::abs(contrib) <= eps * std::abs(tail)) break;
  }
  return head - std::exp(a * lx) * tail;
}

template <class T>
T e1_series(T x) {
  const T eps = std::numeric_limits<T>::epsilon();
  const T euler = static_cast<T>(0.577215664901532860606512090082402431L);
  T term = 1;
  T sum = 0;
  for (int k = 1; k < kMaxIterations; ++k) {
    term *= -x / static_cast<T>(k);
    const T contrib = term / static_cast<T>(k);
    sum += contrib;
    if (std::abs(contrib) <= eps * std::abs(sum)) break;
  }
  return -euler - std::log(x) - sum;
}

// Scaled S(a, x) = e^x x^-a Gamma(a, x) for a <= 0 and 0 < x < 1.5, by the
// downward recurrence S(a) = (x S(a+1) - 1) / a started from a0 in [0, 1].
template <class T>
T scaled_gamma_negative_small_x(T a, T x) {
  const bool integral = (a == std::floor(a));
  const int steps = integral ? static_cast<int>(-a) : static_cast<int>(std::ceil(-a));
  const T a0 = a + static_cast<T>(steps);
  T g0;
  if (integral) {
    g0 = e1_series(x);  // a0 == 0
  } else {
    g0 = gamma_small_a(a0, x);
  }
  T s = g0 * std::exp(x - a0 * std::log(x));
  T ac = a0;
  for (int k = 0; k < steps; ++k) {
    ac -= 1;
    s = (x * s - 1) / ac;
  }
  return s;
}

// log Gamma(a, x) for a > 0, x > 0.
template <class T>
T log_gamma_positive(T a, T x) {
  if (a <= 1 && x < static_cast<T>(kSmallXBranch)) {
    return std::log(gamma_small_a(a, x));
  }
  if (x < a + 1) {
    const T p = gamma_p_series(a, x);
    return std::lgamma(a) + std::log1p(-p);
  }
  return -x + a * std::log(x) + std::log(gamma_cf(a, x));
}

template <class T>
T scaled_impl(T a, T x) {
  if (!(x > 0)) {
    throw DomainError("scaled_upper_incomplete_gamma: x must be > 0");
  }
  if (a <= 0) {
    if (x < static_cast<T>(kSmallXBranch)) return scaled_gamma_negative_small_x(a, x);
    return gamma_cf(a, x);
  }
  if (x >= a + 1 && x >= static_cast<T>(kSmallXBranch)) return gamma_cf(a, x);
  return std::exp(log_gamma_positive(a, x) + x - a * std::log(x));
}

}  // namespace

double upper_incomplete_gamma(double a, double x) {
  if (std::isnan(a) || std::isnan(x)) {
    throw DomainError("upper_incomplete_gamma: NaN argument");
  }
  if (x < 0) throw DomainError("upper_incomplete_gamma: x must be >= 0");
  double result;
  if (x == 0) {
    if (a <= 0) {
      throw DomainError("upper_incomplete_gamma: Gamma(a, 0) diverges for a <= 0");
    }
    result = std::tgamma(a);
  } else if (a > 0) {
    if (x >= a + 1 && x >= kSmallXBranch) {
      result = std::exp(-x + a * std::log(x)) * gamma_cf(a, x);
    } else {
      result = std::exp(log_gamma_positive(a, x));
    }
  } else {
    result = scaled_impl(a, x) * std::exp(-x + a * std::log(x));
  }
  if (!std::isfinite(result)) {
    throw OverflowError("upper_incomplete_gamma: result overflows for a=" +
                        std::to_string(a) + ", x=" + std::to_string(x));
  }
  return result;
}

double scaled_upper_incomplete_gamma(double a, double x) {
  const double r = scaled_impl(a, x);
  if (!std::isfinite(r)) {
    throw OverflowError("scaled_upper_incomplete_gamma: result overflows");
  }
  return r;
}

long double scaled_upper_incomplete_gamma_ext(long double a, long double x) {
  const long double r = scaled_impl(a, x);
  if (!std::isfinite(r)) {
    throw OverflowError("scaled_upper_incomplete_gamma_ext: result overflows");
  }
  return r;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0)) throw DomainError("regularized_gamma_p: a must be > 0");
  if (x < 0) throw DomainError("regularized_gamma_p: x must be >= 0");
  if (x == 0) return 0.0;
  if (x < a + 1) return gamma_p_series(a, x);
  return 1.0 - regularized_gamma_q(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0)) throw DomainError("regularized_gamma_q: a must be > 0");
  if (x < 0) throw DomainError("regularized_gamma_q: x must be >= 0");
  if (x == 0) return 1.0;
  if (x < a + 1) return 1.0 - gamma_p_series(a, x);
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * gamma_cf(a, x);
}

double expint_e1(double x) {
  if (!(x > 0)) throw DomainError("expint_e1: x must be > 0");
  if (x < kSmallXBranch) return e1_series(x);
  return std::exp(-x) * gamma_cf(0.0, x);
}

// ---------------------------------------------------------------------------

double log_tricomi_integral(double a, double b, double z) {
  if (!(a > 0)) throw DomainError("tricomi_u: a must be > 0");
  if (!(z > 0)) throw DomainError("tricomi_u: z must be > 0");
  const double c = b - a - 1;  // exponent of (1+t)

  quadrature::Options opts;
  opts.abs_tol = 0.0;
  opts.rel_tol = 1e-13;
  opts.max_intervals = 20000;

  auto check = [](const quadrature::Result& r) {
    if (!r.converged && r.abs_error > 1e-10 * std::abs(r.value)) {
      throw NonConvergenceError("tricomi_u: quadrature did not converge");
    }
  };

  if (a < 1) {
    // Integrable singularity t^(a-1) at 0: t = w^(1/a) on [0, 1], then
    // u = log(1+t) on [1, inf).
    auto near = [&](double w) {
      const double t = std::pow(w, 1.0 / a);
      return std::exp(-z * t + c * std::log1p(t)) / a;
    };
    auto far = [&](double u) {
      const double t = std::expm1(u);
      return std::exp(-z * t + (a - 1) * std::log(t) + c * u + u);
    };
    double u_hi = std::log(2.0);
    while (-z * std::expm1(u_hi) + (a - 1) * std::log(std::expm1(u_hi)) +
               (c + 1) * u_hi > -60.0 &&
           u_hi < 700.0) {
      u_hi += std::max(1.0, 0.5 * u_hi);
    }
    const auto r1 = quadrature::integrate(near, 0.0, 1.0, opts);
    const auto r2 = quadrature::integrate(far, std::log(2.0), u_hi, opts);
    check(r1);
    check(r2);
    return std::log(r1.value + r2.value);
  }

  // Mode of the t-space log-integrand -z t + (a-1) ln t + c ln(1+t):
  // z t^2 + (z + 2 - b) t - (a - 1) = 0.
  const double p = z + 2 - b;
  const double disc = p * p + 4 * z * (a - 1);
  double t_star = 0.0;
  if (disc >= 0) {
    const double sq = std::sqrt(disc);
    // numerically stable positive root
    const double root = p >= 0 ? 2 * (a - 1) / (p + sq) : (-p + sq) / (2 * z);
    if (root > 0 && std::isfinite(root)) t_star = root;
  }
  auto log_g = [&](double u) {
    const double t = std::expm1(u);
    const double lt = (a == 1) ? 0.0 : (a - 1) * std::log(t);
    return -z * t + lt + c * u + u;
  };
  const double u_star = std::log1p(t_star);
  const double offset = log_g(u_star > 0 ? u_star : 0.0) + 0.0;
  const double shift = std::isfinite(offset) ? offset : 0.0;
  auto g = [&](double u) { return std::exp(log_g(u) - shift); };

  constexpr double kDrop = 60.0;
  double step = std::max(0.25, 0.25 * u_star);
  double u_hi = u_star + step;
  while (log_g(u_hi) - shift > -kDrop && u_hi < 700.0) {
    step *= 2;
    u_hi = u_star + step;
  }
  double u_lo = 0.0;
  if (u_star > 0) {
    double down = std::min(0.25, 0.5 * u_star);
    double cand = u_star - down;
    while (cand > 0 && log_g(cand) - shift > -kDrop) {
      down *= 2;
      cand = u_star - down;
    }
    u_lo = std::max(0.0, cand);
  }
  std::vector<double> bp;
  bp.push_back(u_lo);
  if (u_star > u_lo) bp.push_back(u_star);
  bp.push_back(u_hi);
  const auto r = quadrature::integrate(g, bp, opts);
  check(r);
  return std::log(r.value) + shift;
}

double log_tricomi_u(double a, double b, double z) {
  return log_tricomi_integral(a, b, z) - std::lgamma(a);
}

double tricomi_u(double a, double b, double z) {
  const double r = std::exp(log_tricomi_u(a, b, z));
  if (!std::isfinite(r)) throw OverflowError("tricomi_u: result overflows");
  return r;
}

// ---------------------------------------------------------------------------

int Composition::total() const {
  return std::accumulate(parts.begin(), parts.end(), 0);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    // r * (n-i) / (i+1) is an integer; cancel the common factor first.
    const std::uint64_t g = std::gcd(r, i + 1);
    const std::uint64_t factor = (n - i) / ((i + 1) / g);
    if (__builtin_mul_overflow(r / g, factor, &r)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return r;
}

Compositions::Compositions(int total, int parts) : total_(total), parts_(parts) {
  if (total < 0) throw DomainError("compositions: K must be >= 0");
  if (parts < 1) throw DomainError("compositions: M must be >= 1");
}

std::uint64_t Compositions::count() const {
  return binomial(static_cast<std::uint64_t>(total_ + parts_ - 1),
                  static_cast<std::uint64_t>(parts_ - 1));
}

Compositions::iterator::iterator(int total, int parts) : done_(false) {
  current_.parts.assign(static_cast<std::size_t>(parts), 0);
  current_.parts[0] = total;
}

Compositions::iterator& Compositions::iterator::operator++() {
  auto& p = current_.parts;
  const int m = static_cast<int>(p.size());
  // Rightmost non-zero position that can still shed a unit to its right.
  int j = m - 2;
  while (j >= 0 && p[static_cast<std::size_t>(j)] == 0) --j;
  if (j < 0) {
    done_ = true;
    return *this;
  }
  int tail = 0;
  for (int i = j + 1; i < m; ++i) {
    tail += p[static_cast<std::size_t>(i)];
    p[static_cast<std::size_t>(i)] = 0;
  }
  --p[static_cast<std::size_t>(j)];
  p[static_cast<std::size_t>(j + 1)] = tail + 1;
  return *this;
}

TermWeight log_term_weight(const Composition& c) {
  const int k = c.total();
  double log_phi = std::lgamma(static_cast<double>(k) + 1.0);
  int theta = 0;
  for (int n = 0; n < c.size(); ++n) {
    const int kn = c.parts[static_cast<std::size_t>(n)];
    if (kn == 0) continue;
    log_phi -= std::lgamma(static_cast<double>(kn) + 1.0);
    log_phi -= kn * std::lgamma(static_cast<double>(n) + 1.0);
    theta += n * kn;
  }
  return {log_phi, theta};
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw DomainError("log_sum_exp: empty input");
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) return peak;
  CompensatedSum<double> acc;
  for (double v : values) acc.add(std::exp(v - peak));
  return peak + std::log(acc.value());
}

}  // namespace mcdelay::specfun
