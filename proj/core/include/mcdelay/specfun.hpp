#pragma once

#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

namespace mcdelay::specfun {

// ---------------------------------------------------------------------------
// Incomplete gamma
// ---------------------------------------------------------------------------

/// Upper incomplete gamma Gamma(a, x) = int_x^inf t^(a-1) e^-t dt for any real
/// a. Negative a is reached by downward recurrence from a + ceil(-a) (or from
/// E1 when a is a non-positive integer) for x < 1.5, and by the Legendre
/// continued fraction otherwise. Throws DomainError for x < 0 or (a <= 0,
/// x == 0) and OverflowError when the result is not finite.
double upper_incomplete_gamma(double a, double x);

/// e^x x^(-a) Gamma(a, x), x > 0. Finite for every x > 0 even where
/// Gamma(a, x) underflows; this is the shape that appears in Laplace-type
/// integrals  int_0^inf (1+t)^(a-1) e^(-x t) dt = scaled_upper_incomplete_gamma(a, x).
double scaled_upper_incomplete_gamma(double a, double x);

/// Extended-precision variant of scaled_upper_incomplete_gamma, used where
/// long alternating sums need the extra guard digits.
long double scaled_upper_incomplete_gamma_ext(long double a, long double x);

/// Regularized gamma P(a, x) and Q(a, x) = 1 - P(a, x) for a > 0, x >= 0,
/// each computed on its own accurate branch so neither suffers cancellation.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Exponential integral E1(x) = Gamma(0, x), x > 0.
double expint_e1(double x);

// ---------------------------------------------------------------------------
// Confluent hypergeometric function of the second kind
// ---------------------------------------------------------------------------

/// Tricomi U(a, b, z) from the integral representation
///   U = 1/Gamma(a) int_0^inf e^(-z t) t^(a-1) (1+t)^(b-a-1) dt,  a > 0, z > 0,
/// to ~1e-10 relative accuracy. Throws DomainError for a <= 0 or z <= 0.
double tricomi_u(double a, double b, double z);

/// log U(a, b, z); stays finite when U itself would under/overflow.
double log_tricomi_u(double a, double b, double z);

/// log of the unnormalized Laplace integral
///   int_0^inf e^(-z t) t^(a-1) (1+t)^(b-a-1) dt = Gamma(a) U(a, b, z).
double log_tricomi_integral(double a, double b, double z);

// ---------------------------------------------------------------------------
// Weak compositions
// ---------------------------------------------------------------------------

/// k_1 + ... + k_M = K with every k_i >= 0.
struct Composition {
  std::vector<int> parts;

  int total() const;
  int size() const { return static_cast<int>(parts.size()); }
};

/// Binomial coefficient C(n, k) in 64-bit arithmetic; saturates at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Lazily enumerated weak compositions of `total` into `parts` parts, in
/// descending lexicographic order starting at (K, 0, ..., 0). O(M) state.
class Compositions {
 public:
  Compositions(int total, int parts);

  class iterator {
   public:
    using value_type = Composition;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    const Composition& operator*() const { return current_; }
    const Composition* operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return done_; }

   private:
    friend class Compositions;
    explicit iterator(int total, int parts);
    Composition current_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(total_, parts_); }
  std::default_sentinel_t end() const { return {}; }

  /// C(K+M-1, M-1), the number of compositions in the stream.
  std::uint64_t count() const;

 private:
  int total_;
  int parts_;
};

/// Per-composition weight of the exact multicast Mellin series.
struct TermWeight {
  double log_phi;  // log( K!/(k_1!...k_M!) / prod_n (n!)^(k_(n+1)) )
  int theta;       // sum_l l * k_(l+1)
};

TermWeight log_term_weight(const Composition& c);

// ---------------------------------------------------------------------------
// Summation helpers
// ---------------------------------------------------------------------------

/// Neumaier-compensated running sum.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if ((sum_ < 0 ? -sum_ : sum_) >= (x < 0 ? -x : x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

/// log(sum exp(v)) over a non-empty set of values.
double log_sum_exp(std::span<const double> values);

}  // namespace mcdelay::specfun
