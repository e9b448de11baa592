#pragma once

#include <optional>
#include <string>
#include <vector>

#include "padic/zp.hpp"

namespace padic {

enum class OrbitKind { TopNilpotent, Periodic, QuasiPeriodic, ChaosAtPrecision };

inline std::string to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::TopNilpotent: return "TopNilpotent";
    case OrbitKind::Periodic: return "Periodic";
    case OrbitKind::QuasiPeriodic: return "QuasiPeriodic";
    case OrbitKind::ChaosAtPrecision: return "ChaosAtPrecision";
  }
  return "?";
}

/// Verdict of iterating the Frobenius on an element.
/// `period` is meaningful for Periodic/QuasiPeriodic; `limit` is the cycle
/// point reached along sigma^(kN) (for TopNilpotent: zero).
template <class T>
struct OrbitVerdict {
  OrbitKind kind = OrbitKind::ChaosAtPrecision;
  int period = 0;
  int tail = 0;   // first orbit index inside the cycle
  int steps = 0;  // Frobenius applications performed
  std::optional<T> limit;
};

/// Iterates `sigma` from x, recording the orbit until it hits zero or closes
/// a cycle of length <= n_max, within `budget` applications.
///
/// The first repetition found while scanning periods in increasing order is
/// at index tail + period with the minimal period, so the verdict is exact
/// for the finite ring the orbit lives in.
template <class T, class Sigma, class IsZero>
OrbitVerdict<T> classify_orbit_with(const T& x, int n_max, int budget, Sigma sigma, IsZero is_zero) {
  OrbitVerdict<T> out;
  if (is_zero(x)) {
    // zero is a Teichmueller element of every period
    out.kind = OrbitKind::Periodic;
    out.period = 1;
    out.limit = x;
    return out;
  }
  std::vector<T> orbit{x};
  for (int j = 1; j <= budget; ++j) {
    T next = sigma(orbit.back());
    out.steps = j;
    if (is_zero(next)) {
      out.kind = OrbitKind::TopNilpotent;
      out.tail = j;
      out.limit = std::move(next);
      return out;
    }
    orbit.push_back(std::move(next));
    for (int n = 1; n <= n_max && n <= j; ++n) {
      if (orbit[static_cast<std::size_t>(j)] == orbit[static_cast<std::size_t>(j - n)]) {
        const int tail = j - n;
        out.kind = tail == 0 ? OrbitKind::Periodic : OrbitKind::QuasiPeriodic;
        out.period = n;
        out.tail = tail;
        const int anchor = ((tail + n - 1) / n) * n;
        out.limit = orbit[static_cast<std::size_t>(anchor)];
        return out;
      }
    }
  }
  out.kind = OrbitKind::ChaosAtPrecision;
  return out;
}

/// Orbit classification of a scalar with |x| <= 1.
inline OrbitVerdict<PadicScalar> classify_orbit(const PadicScalar& x, int n_max) {
  if (!x.is_integral()) throw std::domain_error("classify_orbit: |x| > 1");
  const Zp ring(x.context());
  auto v = classify_orbit_with<std::uint64_t>(
      x.residue(), n_max, x.context().budget_for(n_max), [&](std::uint64_t a) { return ring.frobenius(a); },
      [](std::uint64_t a) { return a == 0; });
  OrbitVerdict<PadicScalar> out;
  out.kind = v.kind;
  out.period = v.period;
  out.tail = v.tail;
  out.steps = v.steps;
  if (v.limit) out.limit = PadicScalar::from_residue(x.context(), *v.limit);
  return out;
}

}  // namespace padic
