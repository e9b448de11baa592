#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic/context.hpp"

namespace padic {

/// The ring Z_p / p^m Z_p. Elements are residues in [0, p^m).
///
/// This is the arithmetic policy used by UMatrix; it carries no per-element
/// state. Valuations of elements are reported in [0, m], with m meaning
/// "zero at this precision".
class Zp {
 public:
  using value_type = std::uint64_t;

  explicit Zp(PrecisionContext ctx) : ctx_(ctx) {}

  const PrecisionContext& context() const { return ctx_; }
  std::uint64_t p() const { return ctx_.p(); }
  int m() const { return ctx_.m(); }
  std::uint64_t modulus() const { return ctx_.modulus(); }
  int degree() const { return 1; }

  value_type zero() const { return 0; }
  value_type one() const { return 1 % modulus(); }
  value_type from_int(std::int64_t a) const { return detail::reduce_signed(a, modulus()); }
  value_type from_residue(std::uint64_t r) const { return r % modulus(); }

  value_type add(value_type a, value_type b) const {
    const value_type s = a + b;
    return s >= modulus() ? s - modulus() : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + modulus() - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : modulus() - a; }
  value_type mul(value_type a, value_type b) const { return detail::mul_mod(a, b, modulus()); }
  value_type pow(value_type a, std::uint64_t e) const { return detail::pow_mod(a, e, modulus()); }

  bool is_zero(value_type a) const { return a == 0; }

  int valuation(value_type a) const {
    if (a == 0) return m();
    int v = 0;
    while (a % p() == 0) {
      a /= p();
      ++v;
    }
    return v;
  }

  bool is_unit(value_type a) const { return a % p() != 0; }

  value_type inverse(value_type a) const {
    if (!is_unit(a)) throw std::domain_error("Zp::inverse: element is not a unit");
    return detail::inv_mod(a, modulus());
  }

  // a * p^k
  value_type mul_p_power(value_type a, int k) const {
    if (k >= m()) return 0;
    return mul(a, detail::checked_pow(p(), k));
  }

  // a / p^k for valuation(a) >= k. The k top digits of the quotient are
  // unknown at this precision and are filled with zeros.
  value_type div_p_power(value_type a, int k) const {
    if (k == 0) return a;
    if (valuation(a) < k) throw std::domain_error("Zp::div_p_power: element not divisible by p^k");
    return a / detail::checked_pow(p(), k);
  }

  // Reduction mod p.
  std::uint64_t residue(value_type a) const { return a % p(); }

  // Frobenius x -> x^p.
  value_type frobenius(value_type a) const { return pow(a, p()); }

  std::string to_string(value_type a) const { return std::to_string(a); }

 private:
  PrecisionContext ctx_;
};

/// An element of Q_p at absolute precision m: p^valuation * unit, with the
/// unit a residue prime to p held mod p^(m - valuation), or the zero sentinel.
class PadicScalar {
 public:
  explicit PadicScalar(PrecisionContext ctx) : ctx_(ctx) {}

  // Normalizes an arbitrary (valuation, integer) pair: p-factors of `unit`
  // are moved into the valuation.
  static PadicScalar from_parts(PrecisionContext ctx, std::int64_t valuation, std::uint64_t unit) {
    PadicScalar s(ctx);
    if (unit == 0 || valuation >= ctx.m()) return s;
    const std::uint64_t p = ctx.p();
    while (unit % p == 0) {
      unit /= p;
      ++valuation;
    }
    if (valuation >= ctx.m()) return s;
    const std::uint64_t mod = window(ctx, valuation);
    s.valuation_ = valuation;
    s.unit_ = unit % mod;
    return s;
  }

  // The integral element with residue r mod p^m.
  static PadicScalar from_residue(PrecisionContext ctx, std::uint64_t r) {
    return from_parts(ctx, 0, r % ctx.modulus());
  }

  static PadicScalar from_integer(PrecisionContext ctx, std::int64_t a) {
    return from_residue(ctx, detail::reduce_signed(a, ctx.modulus()));
  }

  const PrecisionContext& context() const { return ctx_; }
  std::int64_t valuation() const { return valuation_; }
  std::uint64_t unit() const { return unit_; }
  bool is_zero() const { return valuation_ == kInfiniteValuation; }
  bool is_integral() const { return valuation_ >= 0; }
  Norm norm() const { return Norm(ctx_.p(), valuation_); }

  // p^v * unit mod p^m; only for |x| <= 1.
  std::uint64_t residue() const {
    if (is_zero()) return 0;
    if (valuation_ < 0) throw std::domain_error("PadicScalar::residue: |x| > 1");
    return detail::mul_mod(detail::checked_pow(ctx_.p(), valuation_), unit_, ctx_.modulus());
  }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const PadicScalar& lo = a.valuation_ <= b.valuation_ ? a : b;
    const PadicScalar& hi = a.valuation_ <= b.valuation_ ? b : a;
    const std::uint64_t mod = window(a.ctx_, lo.valuation_);
    const std::uint64_t shift = detail::pow_mod(a.ctx_.p(), static_cast<std::uint64_t>(hi.valuation_ - lo.valuation_), mod);
    const std::uint64_t hi_part = detail::mul_mod(shift, hi.unit_ % mod, mod);
    std::uint64_t sum = lo.unit_ + hi_part;
    if (sum >= mod) sum -= mod;
    return from_parts(a.ctx_, lo.valuation_, sum);
  }

  PadicScalar operator-() const {
    if (is_zero()) return *this;
    PadicScalar r = *this;
    r.unit_ = window(ctx_, valuation_) - unit_;
    return r;
  }

  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    if (a.is_zero() || b.is_zero()) return PadicScalar(a.ctx_);
    const std::int64_t v = a.valuation_ + b.valuation_;
    if (v >= a.ctx_.m()) return PadicScalar(a.ctx_);
    const std::uint64_t mod = window(a.ctx_, v);
    return from_parts(a.ctx_, v, detail::mul_mod(a.unit_ % mod, b.unit_ % mod, mod));
  }

  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
    if (b.is_zero()) throw std::domain_error("PadicScalar: division by zero");
    if (a.is_zero()) return a;
    const std::int64_t v = a.valuation_ - b.valuation_;
    if (v >= a.ctx_.m()) return PadicScalar(a.ctx_);
    const std::uint64_t mod = window(a.ctx_, v);
    const std::uint64_t inv = detail::inv_mod(b.unit_ % mod, mod);
    return from_parts(a.ctx_, v, detail::mul_mod(a.unit_ % mod, inv, mod));
  }

  friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
    return a.valuation_ == b.valuation_ && a.unit_ == b.unit_;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    if (valuation_ == 0) return std::to_string(unit_);
    return std::to_string(ctx_.p()) + "^" + std::to_string(valuation_) + "*" + std::to_string(unit_);
  }

  // p^(m - v): the modulus the unit of a valuation-v scalar is held in.
  static std::uint64_t window(const PrecisionContext& ctx, std::int64_t valuation) {
    const std::uint64_t mod = detail::checked_pow(ctx.p(), ctx.m() - valuation);
    if (mod == 0) throw std::overflow_error("PadicScalar: precision window p^(m-v) exceeds 2^62");
    return mod;
  }

 private:
  PrecisionContext ctx_;
  std::int64_t valuation_ = kInfiniteValuation;
  std::uint64_t unit_ = 0;
};

/// Image of numerator/denominator in Q_p at the context's precision.
inline PadicScalar scalar_from_rational(std::int64_t numerator, std::int64_t denominator,
                                        const PrecisionContext& ctx) {
  if (denominator == 0) throw std::invalid_argument("scalar_from_rational: denominator is zero");
  if (numerator == 0) return PadicScalar(ctx);
  const auto p = static_cast<std::int64_t>(ctx.p());
  std::int64_t v = 0;
  while (numerator % p == 0) {
    numerator /= p;
    ++v;
  }
  while (denominator % p == 0) {
    denominator /= p;
    --v;
  }
  if (v >= ctx.m()) return PadicScalar(ctx);
  const std::uint64_t mod = PadicScalar::window(ctx, v);
  const std::uint64_t num = detail::reduce_signed(numerator, mod);
  const std::uint64_t den = detail::reduce_signed(denominator, mod);
  return PadicScalar::from_parts(ctx, v, detail::mul_mod(num, detail::inv_mod(den, mod), mod));
}

/// sigma^N(x) = x^(p^N) for |x| <= 1.
inline PadicScalar frobenius_step(const PadicScalar& x, int n) {
  if (n < 1) throw std::invalid_argument("frobenius_step: period exponent must be >= 1");
  if (!x.is_integral()) throw std::domain_error("frobenius_step: |x| > 1");
  const Zp ring(x.context());
  std::uint64_t r = x.residue();
  for (int i = 0; i < n; ++i) r = ring.frobenius(r);
  return PadicScalar::from_residue(x.context(), r);
}

/// The fixed point of x -> x^p congruent to `residue` mod p, as a residue
/// mod p^m. Each iteration gains one digit, so m steps always suffice.
inline std::uint64_t teichmuller_residue(std::uint64_t residue, const Zp& ring) {
  if (residue >= ring.p()) throw std::invalid_argument("teichmuller_lift: residue must lie in [0, p)");
  std::uint64_t x = residue;
  for (int i = 0; i <= ring.m(); ++i) {
    const std::uint64_t next = ring.frobenius(x);
    if (next == x) return x;
    x = next;
  }
  throw std::logic_error("teichmuller_lift: Frobenius iteration failed to stabilize");
}

inline PadicScalar teichmuller_lift(std::uint64_t residue, const PrecisionContext& ctx) {
  return PadicScalar::from_residue(ctx, teichmuller_residue(residue, Zp(ctx)));
}

/// x = sum_i digits[i] * p^(lead_valuation + i), every digit a fixed point of
/// the p-power map.
struct TeichDigits {
  std::int64_t lead_valuation = 0;
  std::vector<PadicScalar> digits;

  // sum_i digits[i] p^i mod p^m, i.e. the source unit zero-extended to m digits.
  std::uint64_t reassemble_unit() const {
    if (digits.empty()) return 0;
    const Zp ring(digits.front().context());
    std::uint64_t acc = 0;
    for (std::size_t i = digits.size(); i-- > 0;) {
      acc = ring.add(ring.mul_p_power(acc, 1), digits[i].residue());
    }
    return acc;
  }
};

inline TeichDigits teichmuller_digits(const PadicScalar& x) {
  const PrecisionContext& ctx = x.context();
  const Zp ring(ctx);
  TeichDigits out;
  out.lead_valuation = x.is_zero() ? 0 : x.valuation();
  std::uint64_t rest = x.is_zero() ? 0 : x.unit() % ctx.modulus();
  out.digits.reserve(static_cast<std::size_t>(ctx.m()));
  for (int i = 0; i < ctx.m(); ++i) {
    const std::uint64_t digit = teichmuller_residue(ring.residue(rest), ring);
    out.digits.push_back(PadicScalar::from_residue(ctx, digit));
    rest = ring.div_p_power(ring.sub(rest, digit), 1);
  }
  return out;
}

}  // namespace padic
