#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "padic/orbit.hpp"
#include "padic/unramified.hpp"
#include "padic/zp.hpp"

namespace padic {

/// Square matrix over a ring policy (Zp or ExtRing) with the sup norm.
/// Entries are integral; matrices with |A| > 1 are carried as ScaledMatrix.
template <class Ring>
class UMatrix {
 public:
  using value_type = typename Ring::value_type;

  UMatrix(Ring ring, std::size_t n) : ring_(std::move(ring)), n_(n), data_(n * n, ring_.zero()) {}

  static UMatrix identity(const Ring& ring, std::size_t n) {
    UMatrix r(ring, n);
    for (std::size_t i = 0; i < n; ++i) r(i, i) = ring.one();
    return r;
  }

  static UMatrix diagonal(const Ring& ring, const std::vector<value_type>& diag) {
    UMatrix r(ring, diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) r(i, i) = diag[i];
    return r;
  }

  // Row-major integers reduced into the ring.
  static UMatrix from_ints(const Ring& ring, std::size_t n, const std::vector<std::int64_t>& values) {
    if (values.size() != n * n) throw std::invalid_argument("UMatrix::from_ints: wrong number of entries");
    UMatrix r(ring, n);
    for (std::size_t i = 0; i < values.size(); ++i) r.data_[i] = ring.from_int(values[i]);
    return r;
  }

  const Ring& ring() const { return ring_; }
  std::size_t size() const { return n_; }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const std::vector<value_type>& data() const { return data_; }

  UMatrix& operator+=(const UMatrix& o) {
    check_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = ring_.add(data_[i], o.data_[i]);
    return *this;
  }
  UMatrix& operator-=(const UMatrix& o) {
    check_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = ring_.sub(data_[i], o.data_[i]);
    return *this;
  }
  friend UMatrix operator+(UMatrix a, const UMatrix& b) { return a += b; }
  friend UMatrix operator-(UMatrix a, const UMatrix& b) { return a -= b; }

  friend UMatrix operator*(const UMatrix& a, const UMatrix& b) {
    a.check_shape(b);
    const Ring& R = a.ring_;
    const std::size_t n = a.n_;
    UMatrix r(R, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const value_type& aik = a(i, k);
        if (R.is_zero(aik)) continue;
        for (std::size_t j = 0; j < n; ++j) r(i, j) = R.add(r(i, j), R.mul(aik, b(k, j)));
      }
    }
    return r;
  }

  UMatrix scaled(const value_type& c) const {
    UMatrix r = *this;
    for (auto& e : r.data_) e = ring_.mul(c, e);
    return r;
  }
  UMatrix mul_p_power(int k) const {
    UMatrix r = *this;
    for (auto& e : r.data_) e = ring_.mul_p_power(e, k);
    return r;
  }
  // Entrywise division by p^k; needs valuation() >= k. Lost top digits are zero.
  UMatrix div_p_power(int k) const {
    UMatrix r = *this;
    for (auto& e : r.data_) e = ring_.div_p_power(e, k);
    return r;
  }

  UMatrix pow(std::uint64_t e) const {
    UMatrix result = identity(ring_, n_);
    UMatrix base = *this;
    while (e != 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e != 0) base = base * base;
    }
    return result;
  }

  std::vector<value_type> apply(const std::vector<value_type>& v) const {
    if (v.size() != n_) throw std::invalid_argument("UMatrix::apply: dimension mismatch");
    std::vector<value_type> out(n_, ring_.zero());
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) out[i] = ring_.add(out[i], ring_.mul((*this)(i, j), v[j]));
    }
    return out;
  }

  // min entry valuation; m when the matrix is zero at precision
  int valuation() const {
    int v = ring_.m();
    for (const auto& e : data_) v = std::min(v, ring_.valuation(e));
    return v;
  }
  bool is_zero() const { return valuation() >= ring_.m(); }
  Norm norm() const {
    const int v = valuation();
    return v >= ring_.m() ? Norm::zero(ring_.p()) : Norm(ring_.p(), v);
  }

  friend bool operator==(const UMatrix& a, const UMatrix& b) { return a.n_ == b.n_ && a.data_ == b.data_; }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < n_; ++i) {
      s += i == 0 ? "[" : ",[";
      for (std::size_t j = 0; j < n_; ++j) {
        if (j != 0) s += ",";
        s += ring_.to_string((*this)(i, j));
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  void check_shape(const UMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("UMatrix: dimension mismatch");
  }

  Ring ring_;
  std::size_t n_;
  std::vector<value_type> data_;
};

using ZpMatrix = UMatrix<Zp>;
using ExtMatrix = UMatrix<ExtRing>;

template <class Ring>
Norm vector_norm(const Ring& ring, const std::vector<typename Ring::value_type>& v) {
  int val = ring.m();
  for (const auto& e : v) val = std::min(val, ring.valuation(e));
  return val >= ring.m() ? Norm::zero(ring.p()) : Norm(ring.p(), val);
}

/// A Q_p matrix p^lead_valuation * body.
template <class Ring>
struct ScaledMatrix {
  std::int64_t lead_valuation = 0;
  UMatrix<Ring> body;

  Norm norm() const {
    const Norm b = body.norm();
    return b.is_zero() ? b : Norm(b.p(), b.valuation() + lead_valuation);
  }
};

/// sigma(X) = X^p.
template <class Ring>
UMatrix<Ring> frobenius(const UMatrix<Ring>& x) {
  return x.pow(x.ring().p());
}

/// sigma^N(X) = X^(p^N), as N successive p-th powers.
template <class Ring>
UMatrix<Ring> frobenius_power(UMatrix<Ring> x, int n) {
  for (int i = 0; i < n; ++i) x = frobenius(x);
  return x;
}

template <class Ring>
OrbitVerdict<UMatrix<Ring>> classify_orbit(const UMatrix<Ring>& x, int n_max) {
  return classify_orbit_with<UMatrix<Ring>>(
      x, n_max, x.ring().context().budget_for(n_max), [](const UMatrix<Ring>& a) { return frobenius(a); },
      [](const UMatrix<Ring>& a) { return a.is_zero(); });
}

/// Base matrix viewed over O_K.
inline ExtMatrix embed(const ExtRing& ring, const ZpMatrix& a) {
  ExtMatrix r(ring, a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) r(i, j) = ring.embed(a(i, j));
  }
  return r;
}

/// The Z_p matrix an O_K matrix equals, or nullopt if some entry leaves Z_p.
inline std::optional<ZpMatrix> to_base(const ExtMatrix& a) {
  ZpMatrix r(a.ring().base(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      auto b = a.ring().base_part(a(i, j));
      if (!b) return std::nullopt;
      r(i, j) = *b;
    }
  }
  return r;
}

/// Reduction mod p into M_n(F_p) (as residues) or M_n(F_{p^N}).
inline std::vector<std::uint64_t> reduce_mod_p(const ZpMatrix& a) {
  std::vector<std::uint64_t> out;
  out.reserve(a.data().size());
  for (auto e : a.data()) out.push_back(a.ring().residue(e));
  return out;
}
inline std::vector<FqElement> reduce_mod_p(const ExtMatrix& a) {
  std::vector<FqElement> out;
  out.reserve(a.data().size());
  for (const auto& e : a.data()) out.push_back(a.ring().reduce(e));
  return out;
}

/// Determinant by elimination with minimal-valuation pivots. Z_p and O_K are
/// local, so the pivot divides every entry below it and each multiplier is
/// integral; the result is exact mod p^m.
template <class Ring>
typename Ring::value_type determinant(UMatrix<Ring> a) {
  const Ring& R = a.ring();
  const std::size_t n = a.size();
  auto det = R.one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best_r = col, best_c = col;
    int best_v = R.m();
    for (std::size_t i = col; i < n; ++i) {
      for (std::size_t j = col; j < n; ++j) {
        const int v = R.valuation(a(i, j));
        if (v < best_v) {
          best_v = v;
          best_r = i;
          best_c = j;
        }
      }
    }
    if (best_v >= R.m()) return R.zero();
    if (best_r != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(best_r, j), a(col, j));
      det = R.neg(det);
    }
    if (best_c != col) {
      for (std::size_t i = 0; i < n; ++i) std::swap(a(i, best_c), a(i, col));
      det = R.neg(det);
    }
    const auto pivot = a(col, col);
    det = R.mul(det, pivot);
    const auto pivot_unit_inv = R.inverse(R.div_p_power(pivot, best_v));
    for (std::size_t i = col + 1; i < n; ++i) {
      if (R.is_zero(a(i, col))) continue;
      const auto factor = R.mul(R.div_p_power(a(i, col), best_v), pivot_unit_inv);
      for (std::size_t j = col; j < n; ++j) a(i, j) = R.sub(a(i, j), R.mul(factor, a(col, j)));
    }
  }
  return det;
}

/// Inverse of a matrix with unit determinant (Gauss-Jordan with unit pivots).
/// Other inverses would lose precision and are refused.
template <class Ring>
UMatrix<Ring> inverse(const UMatrix<Ring>& m_in) {
  const Ring& R = m_in.ring();
  const std::size_t n = m_in.size();
  UMatrix<Ring> a = m_in;
  UMatrix<Ring> inv = UMatrix<Ring>::identity(R, n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t i = col; i < n; ++i) {
      if (R.valuation(a(i, col)) == 0) {
        piv = i;
        break;
      }
    }
    if (piv == n) throw std::domain_error("inverse: determinant is not a unit");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const auto s = R.inverse(a(col, col));
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) = R.mul(a(col, j), s);
      inv(col, j) = R.mul(inv(col, j), s);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || R.is_zero(a(i, col))) continue;
      const auto f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) = R.sub(a(i, j), R.mul(f, a(col, j)));
        inv(i, j) = R.sub(inv(i, j), R.mul(f, inv(col, j)));
      }
    }
  }
  return inv;
}

/// GL_n(Z_p) membership: integral entries and |det| = 1.
template <class Ring>
bool is_gl_zp(const UMatrix<Ring>& u) {
  return u.ring().valuation(determinant(u)) == 0;
}

template <class Ring>
bool is_gl_zp(const ScaledMatrix<Ring>& u) {
  if (u.body.norm().is_zero()) return false;
  if (u.norm() > Norm::one(u.body.ring().p())) return false;
  if (u.lead_valuation > 0) return false;
  return is_gl_zp(u.lead_valuation == 0 ? u.body : u.body.div_p_power(static_cast<int>(-u.lead_valuation)));
}

}  // namespace padic
