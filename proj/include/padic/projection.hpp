#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "padic/matrix.hpp"

namespace padic {

// Random elements with controlled valuation, shared by certification and
// the test generators.
namespace sampling {

template <class Ring>
typename Ring::value_type random_element(const Ring& ring, std::mt19937_64& rng) {
  if constexpr (std::is_same_v<Ring, Zp>) {
    return std::uniform_int_distribution<std::uint64_t>(0, ring.modulus() - 1)(rng);
  } else {
    auto e = ring.zero();
    std::uniform_int_distribution<std::uint64_t> dist(0, ring.base().modulus() - 1);
    for (auto& c : e.coords) c = dist(rng);
    return e;
  }
}

// A unit times p^v with v uniform in [0, max_valuation].
template <class Ring>
typename Ring::value_type random_with_valuation(const Ring& ring, std::mt19937_64& rng, int max_valuation) {
  const int v = std::uniform_int_distribution<int>(0, std::max(0, max_valuation))(rng);
  auto e = random_element(ring, rng);
  while (!ring.is_unit(e)) e = random_element(ring, rng);
  return ring.mul_p_power(e, v);
}

template <class Ring>
std::vector<typename Ring::value_type> random_vector(const Ring& ring, std::size_t n, std::mt19937_64& rng,
                                                     int max_valuation) {
  std::vector<typename Ring::value_type> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_with_valuation(ring, rng, max_valuation));
  return v;
}

// Coordinates uniform mod p^m, rejected unless the sup norm is 1.
template <class Ring>
std::vector<typename Ring::value_type> random_unit_vector(const Ring& ring, std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    std::vector<typename Ring::value_type> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_element(ring, rng));
    if (vector_norm(ring, v) == Norm::one(ring.p())) return v;
  }
}

template <class Ring>
UMatrix<Ring> random_matrix(const Ring& ring, std::size_t n, std::mt19937_64& rng) {
  UMatrix<Ring> a(ring, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = random_element(ring, rng);
  }
  return a;
}

template <class Ring>
UMatrix<Ring> random_gl(const Ring& ring, std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    UMatrix<Ring> u = random_matrix(ring, n, rng);
    if (is_gl_zp(u)) return u;
  }
}

}  // namespace sampling

/// Outcome of checking the equivalent characterisations of an orthogonal
/// projection on a Q_p matrix pi:
///   (1) |pi| = 1, (2) pi maps the unit ball into itself,
///   (3*) |x| = max(|pi x|, |(I - pi) x|), (4*) pi is integral and its
///   reduction mod p is idempotent.
/// (2) and (3*) are checked on the basis vectors and on `samples` random
/// vectors spanning valuations 0..m-1.
struct ProjectionCertificate {
  Norm idempotency_defect;
  Norm norm_of_pi;
  bool idempotent = false;
  bool norm_one = false;
  bool unit_ball_stable = false;
  bool norm_splits = false;
  bool reduction_idempotent = false;
  int samples_checked = 0;
  bool conditions_agree = false;
  bool valid = false;
  std::string failure;
};

inline ProjectionCertificate certify_orthogonal_projection(const ScaledMatrix<Zp>& pi, int samples,
                                                           std::uint64_t seed = 0) {
  const Zp& R = pi.body.ring();
  const std::uint64_t p = R.p();
  const int m = R.m();
  const std::size_t n = pi.body.size();
  const std::int64_t k = pi.lead_valuation;
  ProjectionCertificate cert;

  // pi^2 - pi = p^{2k} (B^2 - p^{-k} B) for k <= 0, p^k (p^k B^2 - B) for k > 0.
  const ZpMatrix& B = pi.body;
  const ZpMatrix B2 = B * B;
  ZpMatrix diff = k <= 0 ? B2 - B.mul_p_power(static_cast<int>(-k)) : B2.mul_p_power(static_cast<int>(k)) - B;
  const Norm d = diff.norm();
  cert.idempotency_defect = d.is_zero() ? d : Norm(p, d.valuation() + (k <= 0 ? 2 * k : k));
  cert.idempotent = d.is_zero();
  cert.norm_of_pi = pi.norm();
  cert.norm_one = cert.norm_of_pi == Norm::one(p);

  // (4*): integral with idempotent reduction
  cert.reduction_idempotent = false;
  if (!cert.norm_of_pi.is_zero() && cert.norm_of_pi <= Norm::one(p)) {
    const ZpMatrix integral = k >= 0 ? B.mul_p_power(static_cast<int>(k)) : B.div_p_power(static_cast<int>(-k));
    const Zp F(PrecisionContext(p, 1));
    ZpMatrix red(F, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) red(i, j) = integral(i, j) % p;
    }
    cert.reduction_idempotent = !red.is_zero() && red * red == red;
  }

  // (2) and (3*), scaled by p^{-k} (k <= 0) so everything stays integral:
  // compare v(p^{-k} x) with min(v(Bx), v(p^{-k} x - Bx)).
  const int shift = k < 0 ? static_cast<int>(-k) : 0;
  const int max_sample_valuation = m - 1 - shift;
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint64_t>> vectors;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::uint64_t> e(n, 0);
    e[j] = R.one();
    vectors.push_back(std::move(e));
  }
  for (int s = 0; s < samples; ++s) vectors.push_back(sampling::random_vector(R, n, rng, max_sample_valuation));

  bool splits = true;
  bool stable = true;
  if (max_sample_valuation >= 0 && k <= 0) {
    for (const auto& x : vectors) {
      if (vector_norm(R, x).is_zero()) continue;
      std::vector<std::uint64_t> y = x;
      for (auto& e : y) e = R.mul_p_power(e, shift);
      const auto z = B.apply(x);
      std::vector<std::uint64_t> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = R.sub(y[i], z[i]);
      const Norm ny = vector_norm(R, y);
      if (ny.is_zero()) continue;
      ++cert.samples_checked;
      if (ny != max(vector_norm(R, z), vector_norm(R, w))) splits = false;
      // |pi x| <= 1 for |x| <= 1  <=>  v(Bx) >= shift + v(x) - v(x) when v(x) = 0
      if (vector_norm(R, x) == Norm::one(p) && vector_norm(R, z) > Norm(p, shift)) stable = false;
    }
  } else {
    splits = false;
    stable = k >= 0;
  }
  cert.norm_splits = splits;
  cert.unit_ball_stable = stable;

  cert.conditions_agree = cert.norm_one == cert.unit_ball_stable && cert.norm_one == cert.norm_splits &&
                          cert.norm_one == cert.reduction_idempotent;
  cert.valid = cert.idempotent && cert.norm_one && cert.unit_ball_stable && cert.norm_splits &&
               cert.reduction_idempotent;
  if (!cert.idempotent) {
    cert.failure = "idempotency defect " + cert.idempotency_defect.to_string();
  } else if (!cert.norm_one) {
    cert.failure = "|pi| = " + cert.norm_of_pi.to_string();
  } else if (!cert.unit_ball_stable) {
    cert.failure = "unit ball not preserved";
  } else if (!cert.norm_splits) {
    cert.failure = "norm does not split as max(|pi x|, |(I-pi) x|)";
  } else if (!cert.reduction_idempotent) {
    cert.failure = "reduction mod p is not idempotent";
  }
  return cert;
}

inline ProjectionCertificate certify_orthogonal_projection(const ZpMatrix& pi, int samples, std::uint64_t seed = 0) {
  return certify_orthogonal_projection(ScaledMatrix<Zp>{0, pi}, samples, seed);
}

/// Columns of U are p-adically orthonormal: U in GL_n(Z_p), and
/// |sum c_i X_i| = max |c_i| on sampled coefficient vectors.
template <class Ring>
bool is_orthonormal_columns(const UMatrix<Ring>& u, int samples, std::uint64_t seed = 0) {
  if (!is_gl_zp(u)) return false;
  const Ring& R = u.ring();
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const auto c = sampling::random_vector(R, u.size(), rng, R.m() - 1);
    if (vector_norm(R, u.apply(c)) != vector_norm(R, c)) return false;
  }
  return true;
}

}  // namespace padic
