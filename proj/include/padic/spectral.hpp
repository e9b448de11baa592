#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "padic/matrix.hpp"
#include "padic/unramified.hpp"

namespace padic {

/// Raised when an input that must satisfy sigma^N(x) = x does not.
class NotTeichmuller : public std::domain_error {
 public:
  NotTeichmuller(const std::string& what, Norm defect) : std::domain_error(what), defect_(defect) {}
  Norm defect() const { return defect_; }

 private:
  Norm defect_;
};

/// No period N <= N_max makes the Frobenius orbit stabilize at this precision.
class PeriodExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection from the Hermite digit peel. `stage` counts digits from 1.
struct NotHermite {
  int stage = 0;
  Norm defect;
  std::string reason;
};

/// T_N(K) at precision m together with the ring it lives in.
struct TeichmullerTable {
  ExtRing ring;
  std::vector<ExtScalar> points;

  TeichmullerTable(const PrecisionContext& ctx, int degree)
      : ring(ctx, degree), points(enumerate_teichmuller(ring)) {}
};

// ---------------------------------------------------------------------------
// Idempotent lifting

/// Iterates y <- sigma^N(y) until sigma^N(y) = y; nullopt when the budget of
/// ctx.max_iters() applications of sigma^N runs out.
template <class Ring>
std::optional<UMatrix<Ring>> teichmuller_limit(const UMatrix<Ring>& seed, int period) {
  UMatrix<Ring> y = seed;
  const int budget = seed.ring().context().max_iters();
  for (int i = 0; i <= budget; ++i) {
    UMatrix<Ring> next = frobenius_power(y, period);
    if (next == y) return y;
    y = std::move(next);
  }
  return std::nullopt;
}

/// The unique sigma-fixed idempotent congruent to `a` mod p.
template <class Ring>
UMatrix<Ring> lift_idempotent(const UMatrix<Ring>& a) {
  if (!((a * a - a).valuation() >= 1)) throw std::domain_error("lift_idempotent: input is not idempotent mod p");
  auto lim = teichmuller_limit(a, 1);
  if (!lim) throw std::logic_error("lift_idempotent: sigma iteration did not stabilize");
  return *lim;
}

/// Lifts a family that is complete and orthogonal mod p. The k-th member is
/// lifted inside the complement of the members already lifted, which keeps
/// the lifted family orthogonal.
template <class Ring>
std::vector<UMatrix<Ring>> lift_idempotent_family(const std::vector<UMatrix<Ring>>& family) {
  std::vector<UMatrix<Ring>> out;
  if (family.empty()) return out;
  const Ring& R = family.front().ring();
  const std::size_t n = family.front().size();
  UMatrix<Ring> complement = UMatrix<Ring>::identity(R, n);
  for (const auto& a : family) {
    UMatrix<Ring> lifted = lift_idempotent(complement * a * complement);
    complement -= lifted;
    out.push_back(std::move(lifted));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lagrange spectral decomposition

struct SpectralPoint {
  std::size_t index;  // position in the Teichmueller table
  ExtScalar lambda;
  ExtMatrix projector;
};

struct SpectralDecomposition {
  int period = 1;
  std::vector<SpectralPoint> points;
  Norm residual_identity_defect;  // |sum pi - I|
  Norm reconstruction_defect;     // |sum lambda pi - x|
};

/// prod_{j in nodes, j != k} (x - w_j) / (w_k - w_j). Every denominator must
/// be a unit; a non-unit means two nodes share a residue.
inline ExtMatrix lagrange_projector(const ExtMatrix& x, std::size_t k, const std::vector<ExtScalar>& nodes) {
  const ExtRing& R = x.ring();
  const std::size_t n = x.size();
  ExtMatrix pi = ExtMatrix::identity(R, n);
  ExtScalar denom = R.one();
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (j == k) continue;
    const ExtScalar diff = R.sub(nodes[k], nodes[j]);
    if (!R.is_unit(diff)) throw std::logic_error("lagrange_projector: denominator is not a unit");
    denom = R.mul(denom, diff);
    pi = pi * (x - ExtMatrix::identity(R, n).scaled(nodes[j]));
  }
  return pi.scaled(R.inverse(denom));
}

/// Spectral decomposition of a period-N Teichmueller matrix over O_K.
///
/// Lagrange interpolation runs over the points w of T_N(K) at which
/// x - w is singular mod p; every other point has a zero projector, and
/// restricting the node set does not change the nonzero ones.
inline SpectralDecomposition teichmuller_spectral(const ExtMatrix& x, const TeichmullerTable& table) {
  const ExtRing& R = table.ring;
  if (!(x.ring() == R)) throw std::invalid_argument("teichmuller_spectral: ring mismatch");
  const int period = R.degree();
  const std::size_t n = x.size();
  const ExtMatrix fx = frobenius_power(x, period);
  if (!(fx == x)) {
    const Norm d = (fx - x).norm();
    throw NotTeichmuller("teichmuller_spectral: sigma^N(x) != x, defect " + d.to_string(), d);
  }

  std::vector<std::size_t> candidates;
  std::vector<ExtScalar> nodes;
  const ExtMatrix id = ExtMatrix::identity(R, n);
  for (std::size_t k = 0; k < table.points.size(); ++k) {
    const ExtScalar det = determinant(x - id.scaled(table.points[k]));
    if (R.valuation(det) > 0) {
      candidates.push_back(k);
      nodes.push_back(table.points[k]);
    }
  }

  SpectralDecomposition out;
  out.period = period;
  ExtMatrix sum_pi(R, n);
  ExtMatrix sum_lambda_pi(R, n);
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    ExtMatrix pi = lagrange_projector(x, c, nodes);
    if (pi.is_zero()) continue;
    sum_pi += pi;
    sum_lambda_pi += pi.scaled(nodes[c]);
    out.points.push_back(SpectralPoint{candidates[c], nodes[c], std::move(pi)});
  }
  out.residual_identity_defect = (sum_pi - id).norm();
  out.reconstruction_defect = (sum_lambda_pi - x).norm();
  return out;
}

inline SpectralDecomposition teichmuller_spectral(const ZpMatrix& x, const TeichmullerTable& table) {
  return teichmuller_spectral(embed(table.ring, x), table);
}

inline SpectralDecomposition teichmuller_spectral(const ZpMatrix& x, int period) {
  const ZpMatrix fx = frobenius_power(x, period);
  if (!(fx == x)) {
    const Norm d = (fx - x).norm();
    throw NotTeichmuller("teichmuller_spectral: sigma^N(x) != x, defect " + d.to_string(), d);
  }
  return teichmuller_spectral(x, TeichmullerTable(x.ring().context(), period));
}

// ---------------------------------------------------------------------------
// Hermite digit peel

using BallAddress = std::vector<std::size_t>;

/// A ball of the spectral measure: digit indices, the prefix sum
/// sum_j w_{i_j} p^j, and the product of the nested projectors.
struct MeasureNode {
  BallAddress address;
  ExtScalar center;
  ExtMatrix projector;
};

struct HermiteDigitsMatrix {
  std::int64_t lead_valuation = 0;
  int period = 1;
  std::vector<ZpMatrix> digits;

  // sum_i x_i p^i, the body of A at precision m
  ZpMatrix reassemble() const {
    ZpMatrix acc(digits.front().ring(), digits.front().size());
    for (std::size_t i = 0; i < digits.size(); ++i) acc += digits[i].mul_p_power(static_cast<int>(i));
    return acc;
  }
};

namespace detail {

struct PeelOutcome {
  std::optional<NotHermite> failure;
  std::vector<ZpMatrix> digits;
  std::vector<std::vector<MeasureNode>> levels;  // levels[j]: balls after digit j
  std::shared_ptr<const TeichmullerTable> table;
};

// B_0 = body. At stage i the residue B_i is first pinched to sum_e e B_i e
// over the current balls; this changes B_i only in digits that are lost to
// the division by p^i anyway, and keeps every digit exactly commuting with
// the earlier ones. Then S_i = lim sigma^{kN}(B_i) is the digit, and
// B_{i+1} = (B_i - S_i) / p provided B_i - S_i vanishes mod p.
inline PeelOutcome hermite_peel(const ZpMatrix& body, int period) {
  const Zp& R = body.ring();
  const std::size_t n = body.size();
  const int m = R.m();
  PeelOutcome out;
  out.table = std::make_shared<const TeichmullerTable>(R.context(), period);
  const TeichmullerTable& table = *out.table;
  const ExtRing& E = table.ring;

  ZpMatrix b = body;
  for (int i = 0; i < m; ++i) {
    if (i > 0) {
      const ExtMatrix be = embed(E, b);
      ExtMatrix pinched(E, n);
      for (const auto& node : out.levels.back()) pinched += node.projector * be * node.projector;
      auto back = to_base(pinched);
      if (!back) throw std::logic_error("hermite_peel: pinched residue left Z_p");
      if ((*back - b).valuation() < m - i) throw std::logic_error("hermite_peel: pinch changed known digits");
      b = std::move(*back);
    }
    auto s = teichmuller_limit(b, period);
    if (!s) {
      const ZpMatrix f = frobenius_power(b, period);
      out.failure = NotHermite{i + 1, (f - b).norm(),
                               "no sigma^N-fixed limit at digit " + std::to_string(i + 1)};
      return out;
    }
    const ZpMatrix rest = b - *s;
    if (rest.valuation() < 1) {
      out.failure = NotHermite{i + 1, rest.norm(), "nilpotent residue at digit " + std::to_string(i + 1)};
      return out;
    }

    const SpectralDecomposition dec = teichmuller_spectral(*s, table);
    if (!dec.residual_identity_defect.is_zero() || !dec.reconstruction_defect.is_zero()) {
      throw std::logic_error("hermite_peel: digit decomposition is incomplete");
    }
    std::vector<MeasureNode> level;
    if (i == 0) {
      for (const auto& pt : dec.points) level.push_back(MeasureNode{{pt.index}, pt.lambda, pt.projector});
    } else {
      for (const auto& parent : out.levels.back()) {
        for (const auto& pt : dec.points) {
          ExtMatrix prod = parent.projector * pt.projector;
          if (prod.is_zero()) continue;
          BallAddress addr = parent.address;
          addr.push_back(pt.index);
          level.push_back(MeasureNode{std::move(addr), E.add(parent.center, E.mul_p_power(pt.lambda, i)),
                                      std::move(prod)});
        }
      }
    }
    out.levels.push_back(std::move(level));
    out.digits.push_back(*s);
    if (i + 1 < m) b = rest.div_p_power(1);
  }
  return out;
}

}  // namespace detail

using HermiteResult = std::variant<HermiteDigitsMatrix, NotHermite>;

/// Teichmueller digit expansion A = sum_i x_i p^{k+i} with sigma^N-fixed,
/// pairwise commuting digits, or the stage where it breaks down.
inline HermiteResult hermite_digits_matrix(const ScaledMatrix<Zp>& a, int period) {
  detail::PeelOutcome peel = detail::hermite_peel(a.body, period);
  if (peel.failure) return *peel.failure;
  return HermiteDigitsMatrix{a.lead_valuation, period, std::move(peel.digits)};
}

inline HermiteResult hermite_digits_matrix(const ZpMatrix& a, int period) {
  return hermite_digits_matrix(ScaledMatrix<Zp>{0, a}, period);
}

// ---------------------------------------------------------------------------
// Spectral measure

struct SpectralMeasure {
  int depth = 0;
  int period = 1;
  std::int64_t lead_valuation = 0;
  std::shared_ptr<const TeichmullerTable> table;
  std::vector<std::vector<MeasureNode>> levels;  // levels[j] for j < depth

  const ExtRing& ring() const { return table->ring; }
  const std::vector<MeasureNode>& level(int j) const { return levels.at(static_cast<std::size_t>(j)); }
  std::map<BallAddress, const MeasureNode*> nodes() const {
    std::map<BallAddress, const MeasureNode*> out;
    for (const auto& lvl : levels) {
      for (const auto& node : lvl) out.emplace(node.address, &node);
    }
    return out;
  }
};

using MeasureResult = std::variant<SpectralMeasure, NotHermite>;

inline MeasureResult spectral_measure(const ScaledMatrix<Zp>& a, int depth, int period = 1) {
  const int m = a.body.ring().m();
  if (depth < 1 || depth > m) throw std::invalid_argument("spectral_measure: depth must lie in [1, m]");
  detail::PeelOutcome peel = detail::hermite_peel(a.body, period);
  if (peel.failure) return *peel.failure;
  SpectralMeasure out;
  out.depth = depth;
  out.period = period;
  out.lead_valuation = a.lead_valuation;
  out.table = peel.table;
  peel.levels.resize(static_cast<std::size_t>(depth));
  out.levels = std::move(peel.levels);
  return out;
}

inline MeasureResult spectral_measure(const ZpMatrix& a, int depth, int period = 1) {
  return spectral_measure(ScaledMatrix<Zp>{0, a}, depth, period);
}

/// identity_check = sum of the deepest projectors; reconstruction is the body
/// sum center * projector, so A is approximated by p^k * reconstruction.
struct SpectralIntegral {
  std::int64_t lead_valuation = 0;
  ExtMatrix identity_check;
  ExtMatrix reconstruction;
};

inline SpectralIntegral spectral_integral(const SpectralMeasure& measure) {
  const ExtRing& E = measure.ring();
  const auto& deepest = measure.levels.back();
  const std::size_t n = deepest.front().projector.size();
  ExtMatrix id(E, n);
  ExtMatrix rec(E, n);
  for (const auto& node : deepest) {
    id += node.projector;
    rec += node.projector.scaled(node.center);
  }
  return SpectralIntegral{measure.lead_valuation, std::move(id), std::move(rec)};
}

// ---------------------------------------------------------------------------
// Jordan decomposition

template <class Ring>
struct JordanPair {
  UMatrix<Ring> semisimple;
  UMatrix<Ring> nilpotent;
  int period = 1;
  int steps_to_kill = 0;
};

/// Teichmueller part of the Frobenius orbit of `seed`: the cycle point reached
/// along sigma^{kN}, N the detected minimal period <= n_max.
template <class Ring>
UMatrix<Ring> semisimple_limit(const UMatrix<Ring>& seed, int n_max, int* period_out = nullptr) {
  const auto verdict = classify_orbit(seed, n_max);
  if (verdict.kind == OrbitKind::ChaosAtPrecision) {
    throw PeriodExceeded("no period <= " + std::to_string(n_max) + " stabilizes within the iteration budget");
  }
  if (period_out) *period_out = verdict.kind == OrbitKind::TopNilpotent ? 1 : verdict.period;
  return *verdict.limit;
}

template <class Ring>
JordanPair<Ring> jordan_from_semisimple(const UMatrix<Ring>& a, UMatrix<Ring> s, int period) {
  UMatrix<Ring> nil = a - s;
  const int budget = a.ring().context().budget_for(period);
  int steps = 0;
  UMatrix<Ring> y = nil;
  while (!y.is_zero()) {
    if (steps >= budget) throw std::logic_error("jordan_decompose: nilpotent part did not vanish within budget");
    y = frobenius(y);
    ++steps;
  }
  return JordanPair<Ring>{std::move(s), std::move(nil), period, steps};
}

/// A = A_s + A_n with sigma^N(A_s) = A_s and sigma^k(A_n) -> 0.
template <class Ring>
JordanPair<Ring> jordan_decompose(const UMatrix<Ring>& a, int n_max) {
  int period = 1;
  UMatrix<Ring> s = semisimple_limit(a, n_max, &period);
  return jordan_from_semisimple(a, std::move(s), period);
}

// ---------------------------------------------------------------------------
// Spectrum diameter and the uncertainty inequality

struct SpectrumReport {
  std::int64_t lead_valuation = 0;
  std::vector<ExtScalar> spectrum;  // body eigenvalues (ball centers at depth m)
  Norm diameter;
  Norm spectral_radius;  // max |lambda|
  Norm operator_norm;    // |A|
  bool norm_law_holds = false;         // |A| = max |lambda|
  bool translation_law_holds = false;  // |A - mu| = diam(A) for mu in Spec A
};

using SpectrumResult = std::variant<SpectrumReport, NotHermite>;

inline SpectrumResult spectrum_diameter(const ScaledMatrix<Zp>& a, int period = 1) {
  const int m = a.body.ring().m();
  const std::uint64_t p = a.body.ring().p();
  MeasureResult mr = spectral_measure(a, m, period);
  if (auto* nh = std::get_if<NotHermite>(&mr)) return *nh;
  const SpectralMeasure& meas = std::get<SpectralMeasure>(mr);
  const ExtRing& E = meas.ring();
  const std::int64_t k = a.lead_valuation;
  auto scale = [&](int v) { return v >= m ? Norm::zero(p) : Norm(p, v + k); };

  SpectrumReport rep;
  rep.lead_valuation = k;
  int radius_v = m;
  int diam_v = m;
  for (const auto& node : meas.levels.back()) {
    rep.spectrum.push_back(node.center);
    radius_v = std::min(radius_v, E.valuation(node.center));
  }
  for (std::size_t i = 0; i < rep.spectrum.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.spectrum.size(); ++j) {
      diam_v = std::min(diam_v, E.valuation(E.sub(rep.spectrum[i], rep.spectrum[j])));
    }
  }
  rep.diameter = scale(diam_v);
  rep.spectral_radius = scale(radius_v);
  rep.operator_norm = a.norm();
  rep.norm_law_holds = rep.operator_norm == rep.spectral_radius;

  const ExtMatrix ae = embed(E, a.body);
  const ExtMatrix id = ExtMatrix::identity(E, a.body.size());
  rep.translation_law_holds = true;
  for (const auto& mu : rep.spectrum) {
    const Norm expected = diam_v >= m ? Norm::zero(p) : Norm(p, diam_v);
    if (!((ae - id.scaled(mu)).norm() == expected)) rep.translation_law_holds = false;
  }
  return rep;
}

inline SpectrumResult spectrum_diameter(const ZpMatrix& a, int period = 1) {
  return spectrum_diameter(ScaledMatrix<Zp>{0, a}, period);
}

struct UncertaintyResult {
  Norm lhs;  // |[A,B] psi|
  Norm rhs;  // diam(A) diam(B)
  Norm diam_a;
  Norm diam_b;
  bool holds = false;
};

using UncertaintyOutcome = std::variant<UncertaintyResult, NotHermite>;

inline UncertaintyOutcome uncertainty_check(const ScaledMatrix<Zp>& a, const ScaledMatrix<Zp>& b,
                                            const std::vector<std::uint64_t>& psi, int period = 1) {
  const Zp& R = a.body.ring();
  if (psi.size() != a.body.size() || b.body.size() != a.body.size()) {
    throw std::invalid_argument("uncertainty_check: dimension mismatch");
  }
  if (!(vector_norm(R, psi) == Norm::one(R.p()))) throw std::invalid_argument("uncertainty_check: |psi| != 1");
  SpectrumResult da = spectrum_diameter(a, period);
  if (auto* nh = std::get_if<NotHermite>(&da)) return *nh;
  SpectrumResult db = spectrum_diameter(b, period);
  if (auto* nh = std::get_if<NotHermite>(&db)) return *nh;

  const ZpMatrix comm = a.body * b.body - b.body * a.body;
  const Norm c = vector_norm(R, comm.apply(psi));
  UncertaintyResult out;
  out.lhs = c.is_zero() ? c : Norm(R.p(), c.valuation() + a.lead_valuation + b.lead_valuation);
  out.diam_a = std::get<SpectrumReport>(da).diameter;
  out.diam_b = std::get<SpectrumReport>(db).diameter;
  out.rhs = out.diam_a * out.diam_b;
  out.holds = out.lhs <= out.rhs;
  return out;
}

inline UncertaintyOutcome uncertainty_check(const ZpMatrix& a, const ZpMatrix& b, const std::vector<std::uint64_t>& psi,
                                            int period = 1) {
  return uncertainty_check(ScaledMatrix<Zp>{0, a}, ScaledMatrix<Zp>{0, b}, psi, period);
}

}  // namespace padic
