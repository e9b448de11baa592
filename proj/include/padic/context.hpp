#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace padic {

// Residues mod p^m are held in 64-bit words; products go through 128 bits.
// p^m (and p^{m-v} for negative valuations) must stay below this bound.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

// Valuation sentinel for zero (v = +infinity).
inline constexpr std::int64_t kInfiniteValuation = std::numeric_limits<std::int64_t>::max();

namespace detail {

using u128 = unsigned __int128;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % mod);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  std::uint64_t result = 1 % mod;
  base %= mod;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, mod);
    base = mul_mod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

// Inverse of a mod `mod`; requires gcd(a, mod) == 1.
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t mod) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(mod), new_r = static_cast<std::int64_t>(a % mod);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    const std::int64_t tt = t - q * new_t;
    t = new_t;
    new_t = tt;
    const std::int64_t rr = r - q * new_r;
    r = new_r;
    new_r = rr;
  }
  if (r != 1) throw std::domain_error("inv_mod: element is not invertible");
  if (t < 0) t += static_cast<std::int64_t>(mod);
  return static_cast<std::uint64_t>(t);
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// p^k, or 0 when the result would exceed kMaxModulus.
inline std::uint64_t checked_pow(std::uint64_t p, std::int64_t k) {
  std::uint64_t r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    if (r > kMaxModulus / p) return 0;
    r *= p;
  }
  return r;
}

// Reduce a signed integer into [0, mod).
inline std::uint64_t reduce_signed(std::int64_t a, std::uint64_t mod) {
  if (a >= 0) return static_cast<std::uint64_t>(a) % mod;
  const std::uint64_t neg = (~static_cast<std::uint64_t>(a) + 1) % mod;
  return neg == 0 ? 0 : mod - neg;
}

}  // namespace detail

/// Prime, absolute precision and the iteration budget for fixed-point
/// searches. Every ring element built from a context lives in Z/p^m.
class PrecisionContext {
 public:
  PrecisionContext(std::uint64_t p, int m, int max_iters = 0) : p_(p), m_(m) {
    if (p > (std::uint64_t{1} << 31) || !detail::is_prime(p)) {
      throw std::invalid_argument("PrecisionContext: p=" + std::to_string(p) + " is not a prime <= 2^31");
    }
    if (m < 1) throw std::invalid_argument("PrecisionContext: precision m must be >= 1");
    modulus_ = detail::checked_pow(p, m);
    if (modulus_ == 0) {
      throw std::invalid_argument("PrecisionContext: p^m exceeds 2^62 (p=" + std::to_string(p) +
                                  ", m=" + std::to_string(m) + ")");
    }
    max_iters_ = max_iters == 0 ? 4 * m + 8 : max_iters;
    if (max_iters_ < m) throw std::invalid_argument("PrecisionContext: max_iters must be >= m");
  }

  std::uint64_t p() const { return p_; }
  int m() const { return m_; }
  int max_iters() const { return max_iters_; }
  std::uint64_t modulus() const { return modulus_; }

  // Budget for searches that may run up to period n_max.
  int budget_for(int n_max) const { return std::max(max_iters_, m_ * n_max + 4); }

  PrecisionContext with_precision(int m) const { return PrecisionContext(p_, m); }

  friend bool operator==(const PrecisionContext& a, const PrecisionContext& b) {
    return a.p_ == b.p_ && a.m_ == b.m_;
  }

 private:
  std::uint64_t p_;
  int m_;
  int max_iters_;
  std::uint64_t modulus_;
};

/// A value of the p-adic absolute value: p^{-valuation}, or 0.
/// Comparisons are exact (on valuations), never through doubles.
class Norm {
 public:
  Norm() = default;
  Norm(std::uint64_t p, std::int64_t valuation) : p_(p), valuation_(valuation) {}

  static Norm zero(std::uint64_t p) { return Norm(p, kInfiniteValuation); }
  static Norm one(std::uint64_t p) { return Norm(p, 0); }

  std::uint64_t p() const { return p_; }
  std::int64_t valuation() const { return valuation_; }
  bool is_zero() const { return valuation_ == kInfiniteValuation; }

  double to_double() const {
    if (is_zero()) return 0.0;
    double r = 1.0;
    const double base = valuation_ > 0 ? 1.0 / static_cast<double>(p_) : static_cast<double>(p_);
    for (std::int64_t i = 0; i < (valuation_ > 0 ? valuation_ : -valuation_); ++i) r *= base;
    return r;
  }

  // "p^-3" or "0"
  std::string to_string() const {
    if (is_zero()) return "0";
    return std::to_string(p_) + "^" + std::to_string(-valuation_);
  }

  friend Norm operator*(Norm a, Norm b) {
    if (a.is_zero() || b.is_zero()) return zero(a.p_);
    return Norm(a.p_, a.valuation_ + b.valuation_);
  }

  friend bool operator==(Norm a, Norm b) { return a.valuation_ == b.valuation_; }
  // Larger valuation means smaller norm.
  friend std::strong_ordering operator<=>(Norm a, Norm b) { return b.valuation_ <=> a.valuation_; }

 private:
  std::uint64_t p_ = 2;
  std::int64_t valuation_ = kInfiniteValuation;
};

inline Norm max(Norm a, Norm b) { return a < b ? b : a; }

}  // namespace padic
