#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic/context.hpp"

namespace padic {

// Dense polynomials over F_p, coefficients constant-first.
namespace fp_poly {

using Poly = std::vector<std::uint64_t>;

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly sub(Poly a, const Poly& b, std::uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

// a mod f, f nonzero.
inline Poly rem(Poly a, const Poly& f, std::uint64_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = detail::inv_mod(f.back(), p);
  while (a.size() >= f.size()) {
    const std::uint64_t c = detail::mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = (a[shift + i] + p - detail::mul_mod(c, f[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

inline Poly mul_mod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = (prod[i + j] + detail::mul_mod(a[i], b[j], p)) % p;
    }
  }
  return rem(std::move(prod), f, p);
}

inline Poly pow_mod(Poly base, std::uint64_t e, const Poly& f, std::uint64_t p) {
  Poly result = rem(Poly{1}, f, p);
  base = rem(std::move(base), f, p);
  while (e != 0) {
    if (e & 1) result = mul_mod(result, base, f, p);
    base = mul_mod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// X^(p^k) mod f.
inline Poly x_frobenius_power(int k, const Poly& f, std::uint64_t p) {
  Poly x = rem(Poly{0, 1}, f, p);
  for (int i = 0; i < k; ++i) x = pow_mod(x, p, f, p);
  return x;
}

}  // namespace fp_poly

/// Irreducibility certificate for a monic f of degree N over F_p:
/// X^(p^N) = X mod f and gcd(X^(p^d) - X, f) = 1 for each proper divisor d.
inline bool is_irreducible(const fp_poly::Poly& f, std::uint64_t p) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  const fp_poly::Poly x{0, 1};
  if (fp_poly::sub(fp_poly::x_frobenius_power(n, f, p), x, p) != fp_poly::Poly{}) return false;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const fp_poly::Poly g = fp_poly::gcd(f, fp_poly::sub(fp_poly::x_frobenius_power(d, f, p), x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

/// Lexicographically smallest monic irreducible of degree N, comparing the
/// coefficient vector (c_0, ..., c_{N-1}) with c_0 most significant.
inline fp_poly::Poly build_modulus(std::uint64_t p, int degree) {
  if (degree < 1) throw std::invalid_argument("build_modulus: degree must be >= 1");
  if (!detail::is_prime(p)) throw std::invalid_argument("build_modulus: p must be prime");
  const std::uint64_t count = detail::checked_pow(p, degree);
  if (count == 0) throw std::invalid_argument("build_modulus: p^N too large");
  fp_poly::Poly f(static_cast<std::size_t>(degree) + 1, 0);
  f.back() = 1;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rest = idx;
    for (int j = degree - 1; j >= 0; --j) {
      f[static_cast<std::size_t>(j)] = rest % p;
      rest /= p;
    }
    if (is_irreducible(f, p)) return f;
  }
  throw std::logic_error("build_modulus: no irreducible polynomial found");
}

/// An element of F_{p^N}: coordinates against 1, X, ..., X^{N-1}.
struct FqElement {
  std::vector<std::uint64_t> coords;
  friend bool operator==(const FqElement&, const FqElement&) = default;
};

/// F_{p^N} = F_p[X]/(f) with f from build_modulus.
class FqField {
 public:
  FqField(std::uint64_t p, int degree) : p_(p), degree_(degree), modulus_(build_modulus(p, degree)) {
    order_ = detail::checked_pow(p, degree);
  }

  std::uint64_t p() const { return p_; }
  int degree() const { return degree_; }
  // p^N, or 0 if it exceeds 2^62
  std::uint64_t order() const { return order_; }
  const fp_poly::Poly& modulus() const { return modulus_; }

  FqElement zero() const { return FqElement{std::vector<std::uint64_t>(static_cast<std::size_t>(degree_), 0)}; }
  FqElement one() const {
    FqElement e = zero();
    e.coords[0] = 1;
    return e;
  }
  // class of X
  FqElement generator() const {
    if (degree_ == 1) return from_poly(fp_poly::rem({0, 1}, modulus_, p_));
    FqElement e = zero();
    e.coords[1] = 1;
    return e;
  }

  // Elements are indexed by sum_j c_j p^j.
  FqElement from_index(std::uint64_t index) const {
    FqElement e = zero();
    for (auto& c : e.coords) {
      c = index % p_;
      index /= p_;
    }
    return e;
  }
  std::uint64_t index(const FqElement& a) const {
    std::uint64_t idx = 0;
    for (std::size_t j = a.coords.size(); j-- > 0;) idx = idx * p_ + a.coords[j];
    return idx;
  }

  std::vector<FqElement> elements() const {
    if (order_ == 0 || order_ > (std::uint64_t{1} << 20)) {
      throw std::invalid_argument("FqField::elements: p^N exceeds 2^20");
    }
    std::vector<FqElement> out;
    out.reserve(order_);
    for (std::uint64_t i = 0; i < order_; ++i) out.push_back(from_index(i));
    return out;
  }

  bool is_zero(const FqElement& a) const {
    for (auto c : a.coords) {
      if (c != 0) return false;
    }
    return true;
  }

  FqElement add(const FqElement& a, const FqElement& b) const {
    FqElement r = zero();
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = (a.coords[i] + b.coords[i]) % p_;
    return r;
  }
  FqElement sub(const FqElement& a, const FqElement& b) const {
    FqElement r = zero();
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = (a.coords[i] + p_ - b.coords[i]) % p_;
    return r;
  }
  FqElement neg(const FqElement& a) const { return sub(zero(), a); }
  FqElement mul(const FqElement& a, const FqElement& b) const {
    return from_poly(fp_poly::mul_mod(to_poly(a), to_poly(b), modulus_, p_));
  }
  FqElement pow(const FqElement& a, std::uint64_t e) const {
    return from_poly(fp_poly::pow_mod(to_poly(a), e, modulus_, p_));
  }
  FqElement inverse(const FqElement& a) const {
    if (is_zero(a)) throw std::domain_error("FqField::inverse: zero has no inverse");
    // a^(q-2), valid as q <= 2^62 is enforced through order()
    if (order_ == 0) throw std::invalid_argument("FqField::inverse: field too large");
    return pow(a, order_ - 2);
  }

  std::string to_string(const FqElement& a) const {
    std::string s = "[";
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
      if (i != 0) s += ",";
      s += std::to_string(a.coords[i]);
    }
    return s + "]";
  }

 private:
  fp_poly::Poly to_poly(const FqElement& a) const {
    fp_poly::Poly f = a.coords;
    fp_poly::trim(f);
    return f;
  }
  FqElement from_poly(const fp_poly::Poly& f) const {
    FqElement e = zero();
    for (std::size_t i = 0; i < f.size() && i < e.coords.size(); ++i) e.coords[i] = f[i];
    return e;
  }

  std::uint64_t p_;
  int degree_;
  fp_poly::Poly modulus_;
  std::uint64_t order_ = 0;
};

/// a -> a^p.
inline FqElement fq_frobenius(const FqField& field, const FqElement& a) { return field.pow(a, field.p()); }

}  // namespace padic
