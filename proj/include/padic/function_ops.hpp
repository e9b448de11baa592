#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "padic/zp.hpp"

namespace padic {

/// Truncated coefficient vector c_0 .. c_{M-1} over Q_p. With MahlerTag the
/// coefficients are against P_n(x) = C(x, n); with TateTag against X^n.
/// The sup norm of the function is max |c_n| in both bases.
///
/// `truncated` is set when an operator pushed a nonzero coefficient past
/// index M-1.
template <class Tag>
struct CoeffVector {
  PrecisionContext ctx;
  std::vector<PadicScalar> coeffs;
  bool truncated = false;

  CoeffVector(PrecisionContext c, std::size_t length) : ctx(c), coeffs(length, PadicScalar(c)) {}

  static CoeffVector basis(PrecisionContext c, std::size_t length, std::size_t n) {
    CoeffVector v(c, length);
    v.coeffs.at(n) = PadicScalar::from_integer(c, 1);
    return v;
  }

  std::size_t size() const { return coeffs.size(); }

  Norm norm() const {
    Norm r = Norm::zero(ctx.p());
    for (const auto& c : coeffs) r = max(r, c.norm());
    return r;
  }

  bool is_zero() const {
    for (const auto& c : coeffs) {
      if (!c.is_zero()) return false;
    }
    return true;
  }

  friend CoeffVector operator+(const CoeffVector& a, const CoeffVector& b) {
    CoeffVector r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.coeffs[i] = a.coeffs[i] + b.coeffs[i];
    r.truncated = a.truncated || b.truncated;
    return r;
  }
  friend CoeffVector operator-(const CoeffVector& a, const CoeffVector& b) {
    CoeffVector r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r.coeffs[i] = a.coeffs[i] - b.coeffs[i];
    r.truncated = a.truncated || b.truncated;
    return r;
  }
  CoeffVector scaled(const PadicScalar& s) const {
    CoeffVector r = *this;
    for (auto& c : r.coeffs) c = c * s;
    return r;
  }

  // Compares coefficients only.
  friend bool operator==(const CoeffVector& a, const CoeffVector& b) { return a.coeffs == b.coeffs; }
};

struct MahlerTag {};
struct TateTag {};
using MahlerVector = CoeffVector<MahlerTag>;
using TateVector = CoeffVector<TateTag>;

namespace detail {
inline PadicScalar int_scalar(const PrecisionContext& ctx, std::int64_t n) { return PadicScalar::from_integer(ctx, n); }
}  // namespace detail

// ---------------------------------------------------------------------------
// Kochubei operators on Mahler coordinates

/// (a+ f)(x) = x f(x - 1). Uses x C(x-1, n) = (n+1) C(x, n+1).
inline MahlerVector kochubei_raise(const MahlerVector& f) {
  MahlerVector r(f.ctx, f.size());
  r.truncated = f.truncated;
  const std::size_t M = f.size();
  for (std::size_t n = 0; n < M; ++n) {
    if (f.coeffs[n].is_zero()) continue;
    if (n + 1 >= M) {
      r.truncated = true;
      continue;
    }
    r.coeffs[n + 1] = detail::int_scalar(f.ctx, static_cast<std::int64_t>(n + 1)) * f.coeffs[n];
  }
  return r;
}

/// (a- f)(x) = f(x + 1) - f(x). Uses C(x+1, n) - C(x, n) = C(x, n-1).
inline MahlerVector kochubei_lower(const MahlerVector& f) {
  MahlerVector r(f.ctx, f.size());
  r.truncated = f.truncated;
  for (std::size_t n = 0; n + 1 < f.size(); ++n) r.coeffs[n] = f.coeffs[n + 1];
  return r;
}

/// A = a+ a-, with A P_n = n P_n.
inline MahlerVector number_operator(const MahlerVector& f) { return kochubei_raise(kochubei_lower(f)); }

/// (a* f)(x) = f(x + 1). Uses C(x+1, n) = C(x, n) + C(x, n-1).
inline MahlerVector shift_operator(const MahlerVector& f) {
  MahlerVector r(f.ctx, f.size());
  r.truncated = f.truncated;
  for (std::size_t n = 0; n < f.size(); ++n) {
    r.coeffs[n] = n + 1 < f.size() ? f.coeffs[n] + f.coeffs[n + 1] : f.coeffs[n];
  }
  return r;
}

/// A* = a+ a*, which is multiplication by x.
inline MahlerVector multiplication_by_x(const MahlerVector& f) { return kochubei_raise(shift_operator(f)); }

// ---------------------------------------------------------------------------
// Tate algebra in one variable

/// f -> X f
inline TateVector tate_multiply_x(const TateVector& f) {
  TateVector r(f.ctx, f.size());
  r.truncated = f.truncated;
  const std::size_t M = f.size();
  for (std::size_t k = 0; k < M; ++k) {
    if (f.coeffs[k].is_zero()) continue;
    if (k + 1 >= M) {
      r.truncated = true;
      continue;
    }
    r.coeffs[k + 1] = f.coeffs[k];
  }
  return r;
}

/// f -> df/dX
inline TateVector tate_derivative(const TateVector& f) {
  TateVector r(f.ctx, f.size());
  r.truncated = f.truncated;
  for (std::size_t k = 0; k + 1 < f.size(); ++k) {
    r.coeffs[k] = detail::int_scalar(f.ctx, static_cast<std::int64_t>(k + 1)) * f.coeffs[k + 1];
  }
  return r;
}

/// Delta = X d/dX, so Delta X^k = k X^k.
inline TateVector euler_operator(const TateVector& f) { return tate_multiply_x(tate_derivative(f)); }

/// Creation operator X + h(d/dX) with h = sum_j h_j t^j, |h| <= 1.
/// h = 0 gives multiplication by X.
inline TateVector euler_raise(const TateVector& f, const std::vector<PadicScalar>& h = {}) {
  for (const auto& c : h) {
    if (!c.is_integral()) throw std::invalid_argument("euler_raise: |h| must be <= 1");
  }
  TateVector r = tate_multiply_x(f);
  TateVector deriv = f;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (j > 0) deriv = tate_derivative(deriv);
    if (!h[j].is_zero()) r = r + deriv.scaled(h[j]);
  }
  return r;
}

inline TateVector euler_lower(const TateVector& f) { return tate_derivative(f); }

// ---------------------------------------------------------------------------
// Ladder checks

/// max over basis vectors e_n, n < M-1, of |[lower, raise] e_n - e_n|.
template <class Tag>
Norm commutator_defect(const std::function<CoeffVector<Tag>(const CoeffVector<Tag>&)>& raise,
                       const std::function<CoeffVector<Tag>(const CoeffVector<Tag>&)>& lower,
                       const PrecisionContext& ctx, std::size_t M) {
  if (M < 2) throw std::invalid_argument("commutator_defect: M must be >= 2");
  Norm worst = Norm::zero(ctx.p());
  for (std::size_t n = 0; n + 1 < M; ++n) {
    const auto e = CoeffVector<Tag>::basis(ctx, M, n);
    const auto d = lower(raise(e)) - raise(lower(e)) - e;
    worst = max(worst, d.norm());
  }
  return worst;
}

/// (a+)^n Omega for n = 0 .. count-1.
template <class Tag>
std::vector<CoeffVector<Tag>> ladder_vectors(const std::function<CoeffVector<Tag>(const CoeffVector<Tag>&)>& raise,
                                             const CoeffVector<Tag>& vacuum, std::size_t count) {
  std::vector<CoeffVector<Tag>> out;
  if (count == 0) return out;
  out.push_back(vacuum);
  for (std::size_t n = 1; n < count; ++n) out.push_back(raise(out.back()));
  return out;
}

/// Orthogonality in the non-Archimedean sense for one combination:
/// |sum c_n v_n| = max |c_n| |v_n|.
template <class Tag>
bool orthogonal_combination(const std::vector<CoeffVector<Tag>>& vectors, const std::vector<PadicScalar>& coeffs) {
  if (vectors.empty()) return true;
  CoeffVector<Tag> sum(vectors.front().ctx, vectors.front().size());
  Norm expected = Norm::zero(vectors.front().ctx.p());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    sum = sum + vectors[i].scaled(coeffs.at(i));
    expected = max(expected, coeffs[i].norm() * vectors[i].norm());
  }
  // below the absolute precision both sides read as zero
  if (!expected.is_zero() && expected.valuation() >= vectors.front().ctx.m()) expected = Norm::zero(expected.p());
  return sum.norm() == expected;
}

}  // namespace padic
