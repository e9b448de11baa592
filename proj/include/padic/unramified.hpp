#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic/residue_field.hpp"
#include "padic/zp.hpp"

namespace padic {

/// Element of O_K / p^m O_K: N residues mod p^m against 1, X, ..., X^{N-1}.
struct ExtScalar {
  std::vector<std::uint64_t> coords;
  friend bool operator==(const ExtScalar&, const ExtScalar&) = default;
};

/// O_K / p^m for the unramified extension of degree N, modelled as
/// (Z/p^m)[X]/(f) where f is the residue modulus with its coefficients
/// lifted literally from {0, ..., p-1}.
class ExtRing {
 public:
  using value_type = ExtScalar;

  ExtRing(PrecisionContext ctx, int degree)
      : base_(ctx), field_(std::make_shared<const FqField>(ctx.p(), degree)) {}

  const PrecisionContext& context() const { return base_.context(); }
  const Zp& base() const { return base_; }
  const FqField& residue_field() const { return *field_; }
  std::uint64_t p() const { return base_.p(); }
  int m() const { return base_.m(); }
  int degree() const { return field_->degree(); }

  value_type zero() const { return ExtScalar{std::vector<std::uint64_t>(static_cast<std::size_t>(degree()), 0)}; }
  value_type one() const { return embed(base_.one()); }
  value_type from_int(std::int64_t a) const { return embed(base_.from_int(a)); }
  value_type embed(std::uint64_t base_residue) const {
    value_type e = zero();
    e.coords[0] = base_residue % base_.modulus();
    return e;
  }
  // The Z_p coordinate when all other coordinates vanish.
  std::optional<std::uint64_t> base_part(const value_type& a) const {
    for (std::size_t i = 1; i < a.coords.size(); ++i) {
      if (a.coords[i] != 0) return std::nullopt;
    }
    return a.coords[0];
  }

  value_type add(const value_type& a, const value_type& b) const {
    value_type r = zero();
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = base_.add(a.coords[i], b.coords[i]);
    return r;
  }
  value_type sub(const value_type& a, const value_type& b) const {
    value_type r = zero();
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = base_.sub(a.coords[i], b.coords[i]);
    return r;
  }
  value_type neg(const value_type& a) const { return sub(zero(), a); }

  value_type mul(const value_type& a, const value_type& b) const {
    const std::size_t n = static_cast<std::size_t>(degree());
    if (n == 1) return ExtScalar{{base_.mul(a.coords[0], b.coords[0])}};
    std::vector<std::uint64_t> prod(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coords[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        prod[i + j] = base_.add(prod[i + j], base_.mul(a.coords[i], b.coords[j]));
      }
    }
    // X^n = -(f_0 + f_1 X + ... + f_{n-1} X^{n-1})
    const auto& f = field_->modulus();
    for (std::size_t k = prod.size(); k-- > n;) {
      const std::uint64_t c = prod[k];
      if (c == 0) continue;
      prod[k] = 0;
      for (std::size_t i = 0; i < n; ++i) {
        prod[k - n + i] = base_.sub(prod[k - n + i], base_.mul(c, f[i]));
      }
    }
    prod.resize(n);
    return ExtScalar{std::move(prod)};
  }

  value_type pow(value_type a, std::uint64_t e) const {
    value_type result = one();
    while (e != 0) {
      if (e & 1) result = mul(result, a);
      a = mul(a, a);
      e >>= 1;
    }
    return result;
  }

  value_type frobenius(const value_type& a) const { return pow(a, p()); }

  bool is_zero(const value_type& a) const {
    for (auto c : a.coords) {
      if (c != 0) return false;
    }
    return true;
  }

  // min over coordinates; m for zero
  int valuation(const value_type& a) const {
    int v = m();
    for (auto c : a.coords) v = std::min(v, base_.valuation(c));
    return v;
  }
  bool is_unit(const value_type& a) const { return valuation(a) == 0; }

  // Newton iteration y <- y (2 - a y) from the residue-field inverse.
  value_type inverse(const value_type& a) const {
    if (!is_unit(a)) throw std::domain_error("ExtRing::inverse: element is not a unit");
    value_type y = lift_naive(field_->inverse(reduce(a)));
    const value_type two = from_int(2);
    for (int prec = 1; prec < m(); prec *= 2) y = mul(y, sub(two, mul(a, y)));
    return y;
  }

  value_type mul_p_power(const value_type& a, int k) const {
    value_type r = a;
    for (auto& c : r.coords) c = base_.mul_p_power(c, k);
    return r;
  }
  value_type div_p_power(const value_type& a, int k) const {
    value_type r = a;
    for (auto& c : r.coords) c = base_.div_p_power(c, k);
    return r;
  }

  FqElement reduce(const value_type& a) const {
    FqElement e = field_->zero();
    for (std::size_t i = 0; i < a.coords.size(); ++i) e.coords[i] = a.coords[i] % p();
    return e;
  }
  value_type lift_naive(const FqElement& a) const {
    value_type e = zero();
    for (std::size_t i = 0; i < e.coords.size(); ++i) e.coords[i] = a.coords[i];
    return e;
  }

  std::string to_string(const value_type& a) const {
    if (degree() == 1) return std::to_string(a.coords[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
      if (i != 0) s += ",";
      s += std::to_string(a.coords[i]);
    }
    return s + ")";
  }

  friend bool operator==(const ExtRing& a, const ExtRing& b) {
    return a.context() == b.context() && a.degree() == b.degree();
  }

 private:
  Zp base_;
  std::shared_ptr<const FqField> field_;
};

/// The fixed point of sigma^N reducing to `a`: iterate y <- y^(p^N) from the
/// naive lift. Every iteration fixes one more digit.
inline ExtScalar teichmuller_lift_ext(const ExtRing& ring, const FqElement& a) {
  ExtScalar y = ring.lift_naive(a);
  for (int i = 0; i <= ring.m(); ++i) {
    ExtScalar next = y;
    for (int k = 0; k < ring.degree(); ++k) next = ring.frobenius(next);
    if (next == y) return y;
    y = std::move(next);
  }
  throw std::logic_error("teichmuller_lift_ext: iteration failed to stabilize");
}

/// T_N(K) at precision m, in residue-field index order (see FqField::index).
inline std::vector<ExtScalar> enumerate_teichmuller(const ExtRing& ring) {
  const std::uint64_t q = ring.residue_field().order();
  if (q == 0 || q > (std::uint64_t{1} << 20)) {
    throw std::invalid_argument("enumerate_teichmuller: p^N exceeds 2^20");
  }
  std::vector<ExtScalar> out;
  out.reserve(q);
  for (const FqElement& a : ring.residue_field().elements()) out.push_back(teichmuller_lift_ext(ring, a));
  return out;
}

inline std::vector<ExtScalar> enumerate_teichmuller(std::uint64_t p, int degree, int m) {
  return enumerate_teichmuller(ExtRing(PrecisionContext(p, m), degree));
}

inline FqElement reduce_mod_p(const ExtRing& ring, const ExtScalar& x) { return ring.reduce(x); }

inline std::uint64_t reduce_mod_p(const PadicScalar& x) {
  if (!x.is_integral()) throw std::domain_error("reduce_mod_p: |x| > 1");
  return x.residue() % x.context().p();
}

}  // namespace padic
