#include <catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "padic/projection.hpp"
#include "padic/spectral.hpp"

using namespace padic;

namespace {

ZpMatrix mat(const Zp& R, std::size_t n, std::vector<std::int64_t> v) { return ZpMatrix::from_ints(R, n, v); }

ZpMatrix base_of(const ExtMatrix& a) {
  auto b = to_base(a);
  REQUIRE(b.has_value());
  return *b;
}

// U diag(d) U^{-1} with the d_i drawn from `values`.
ZpMatrix conjugated_diagonal(const Zp& R, std::size_t n, std::mt19937_64& rng, const std::vector<std::uint64_t>& values) {
  std::vector<std::uint64_t> d(n);
  for (auto& e : d) e = values[rng() % values.size()];
  const ZpMatrix u = sampling::random_gl(R, n, rng);
  return u * ZpMatrix::diagonal(R, d) * inverse(u);
}

void check_decomposition(const ExtMatrix& x, const SpectralDecomposition& dec) {
  const ExtRing& E = x.ring();
  const std::size_t n = x.size();
  ExtMatrix sum(E, n);
  ExtMatrix sum_l(E, n);
  for (std::size_t i = 0; i < dec.points.size(); ++i) {
    const ExtMatrix& pi = dec.points[i].projector;
    CHECK(pi * pi == pi);
    CHECK(pi.norm() == Norm::one(E.p()));
    for (std::size_t j = 0; j < dec.points.size(); ++j) {
      if (i != j) CHECK((pi * dec.points[j].projector).is_zero());
    }
    sum += pi;
    sum_l += pi.scaled(dec.points[i].lambda);
  }
  CHECK(sum == ExtMatrix::identity(E, n));
  CHECK(sum_l == x);
  CHECK(dec.residual_identity_defect.is_zero());
  CHECK(dec.reconstruction_defect.is_zero());
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("lift_idempotent examples") {
  const Zp R(PrecisionContext(3, 4));
  CHECK(lift_idempotent(ZpMatrix::identity(R, 3)) == ZpMatrix::identity(R, 3));

  const ZpMatrix a = mat(R, 2, {1, 3, 0, 0});
  const ZpMatrix pi = lift_idempotent(a);
  CHECK(pi * pi == pi);
  CHECK(frobenius(pi) == pi);
  CHECK((pi - mat(R, 2, {1, 0, 0, 0})).valuation() >= 1);

  const ZpMatrix e = mat(R, 2, {0, 1, 0, 1});
  CHECK(e * e == e);
  CHECK(lift_idempotent(e) == e);

  CHECK_THROWS_AS(lift_idempotent(mat(R, 2, {1, 1, 0, 1})), std::domain_error);
}

TEST_CASE("lifting is unique for perturbations commuting with the representative") {
  std::mt19937_64 rng(31);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const Zp R(PrecisionContext(p, 5));
    for (int t = 0; t < 30; ++t) {
      const ZpMatrix a = conjugated_diagonal(R, 3, rng, {0, 1});
      const ZpMatrix base = lift_idempotent(a);
      ZpMatrix poly = ZpMatrix::identity(R, 3).scaled(rng() % R.modulus()) + a.scaled(rng() % R.modulus()) +
                      (a * a * a).scaled(rng() % R.modulus());
      CHECK(lift_idempotent(a + poly.mul_p_power(1)) == base);
    }
  }
}

TEST_CASE("non-commuting perturbations can change the lift") {
  // E11 and E11 + p E12 are both exact sigma-fixed idempotents, congruent mod p
  const Zp R(PrecisionContext(3, 3));
  const ZpMatrix a = mat(R, 2, {1, 0, 0, 0});
  const ZpMatrix b = mat(R, 2, {1, 3, 0, 0});
  CHECK(b * b == b);
  CHECK(lift_idempotent(a) == a);
  CHECK(lift_idempotent(b) == b);
  CHECK_FALSE(a == b);
}

TEST_CASE("lifted families stay complete and orthogonal") {
  std::mt19937_64 rng(32);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const Zp R(PrecisionContext(p, 4));
    for (int t = 0; t < 20; ++t) {
      const std::size_t n = 4;
      const ZpMatrix u = sampling::random_gl(R, n, rng);
      const ZpMatrix ui = inverse(u);
      // blocks {0}, {1, 2}, {3}
      const std::vector<std::vector<std::uint64_t>> masks{{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}};
      std::vector<ZpMatrix> fam;
      for (const auto& mask : masks) {
        // arbitrary noise of valuation >= 1
        fam.push_back(u * ZpMatrix::diagonal(R, mask) * ui + sampling::random_matrix(R, n, rng).mul_p_power(1));
      }
      const auto lifted = lift_idempotent_family(fam);
      ZpMatrix sum(R, n);
      for (std::size_t i = 0; i < lifted.size(); ++i) {
        CHECK(lifted[i] * lifted[i] == lifted[i]);
        CHECK(frobenius(lifted[i]) == lifted[i]);
        CHECK((lifted[i] - fam[i]).valuation() >= 1);
        for (std::size_t j = 0; j < lifted.size(); ++j) {
          if (i != j) CHECK((lifted[i] * lifted[j]).is_zero());
        }
        sum += lifted[i];
      }
      CHECK(sum == ZpMatrix::identity(R, n));
    }
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("teichmuller_spectral examples") {
  {
    const Zp R(PrecisionContext(3, 3));
    const auto dec = teichmuller_spectral(ZpMatrix::identity(R, 2), 1);
    REQUIRE(dec.points.size() == 1);
    CHECK(dec.points[0].lambda.coords[0] == 1);
    CHECK(base_of(dec.points[0].projector) == ZpMatrix::identity(R, 2));
  }
  {
    const PrecisionContext ctx(3, 4);
    const Zp R(ctx);
    const ZpMatrix x = mat(R, 2, {0, 1, 1, 0});
    CHECK(x.pow(3) == x);
    const auto dec = teichmuller_spectral(x, 1);
    REQUIRE(dec.points.size() == 2);
    const std::uint64_t half = scalar_from_rational(1, 2, ctx).residue();
    const ZpMatrix id = ZpMatrix::identity(R, 2);
    CHECK(dec.points[0].index == 1);
    CHECK(dec.points[0].lambda.coords[0] == 1);
    CHECK(base_of(dec.points[0].projector) == (id + x).scaled(half));
    CHECK(dec.points[1].index == 2);
    CHECK(dec.points[1].lambda.coords[0] == R.modulus() - 1);
    CHECK(base_of(dec.points[1].projector) == (id - x).scaled(half));
  }
  {
    const PrecisionContext ctx(5, 2);
    const Zp R(ctx);
    const ZpMatrix x = ZpMatrix::diagonal(R, {1, 7});
    const auto dec = teichmuller_spectral(x, 1);
    REQUIRE(dec.points.size() == 2);
    CHECK(dec.points[0].lambda.coords[0] == 1);
    CHECK(base_of(dec.points[0].projector) == ZpMatrix::diagonal(R, {1, 0}));
    CHECK(dec.points[1].lambda.coords[0] == 7);
    CHECK(base_of(dec.points[1].projector) == ZpMatrix::diagonal(R, {0, 1}));
  }
}

TEST_CASE("teichmuller_spectral rejects non-teichmuller input") {
  const Zp R(PrecisionContext(3, 3));
  try {
    teichmuller_spectral(mat(R, 2, {1, 1, 0, 1}), 1);
    FAIL("expected NotTeichmuller");
  } catch (const NotTeichmuller& e) {
    CHECK(e.defect() == Norm::one(3));
  }
}

TEST_CASE("restricting the Lagrange nodes does not change the projectors") {
  std::mt19937_64 rng(41);
  for (std::uint64_t p : {3u, 5u, 7u}) {
    const PrecisionContext ctx(p, 3);
    const Zp R(ctx);
    const TeichmullerTable table(ctx, 1);
    std::vector<std::uint64_t> omegas;
    for (const auto& w : table.points) omegas.push_back(w.coords[0]);
    for (int t = 0; t < 10; ++t) {
      const ZpMatrix x = conjugated_diagonal(R, 3, rng, omegas);
      const ExtMatrix xe = embed(table.ring, x);
      const auto dec = teichmuller_spectral(x, table);
      std::set<std::size_t> present;
      for (const auto& pt : dec.points) {
        present.insert(pt.index);
        CHECK(lagrange_projector(xe, pt.index, table.points) == pt.projector);
      }
      for (std::size_t k = 0; k < table.points.size(); ++k) {
        if (!present.count(k)) CHECK(lagrange_projector(xe, k, table.points).is_zero());
      }
    }
  }
}

TEST_CASE("spectral decomposition over an unramified extension") {
  // eigenvalues +-i live in T_2 over Z_3
  const PrecisionContext ctx(3, 3);
  const Zp R(ctx);
  const ZpMatrix x = mat(R, 2, {0, -1, 1, 0});
  CHECK_THROWS_AS(teichmuller_spectral(x, 1), NotTeichmuller);
  const TeichmullerTable table(ctx, 2);
  const auto dec = teichmuller_spectral(x, table);
  REQUIRE(dec.points.size() == 2);
  check_decomposition(embed(table.ring, x), dec);
  for (const auto& pt : dec.points) {
    CHECK_FALSE(table.ring.base_part(pt.lambda).has_value());
    CHECK(table.ring.mul(pt.lambda, pt.lambda) == table.ring.from_int(-1));
  }
}

TEST_CASE("spectral decomposition of random teichmuller matrices") {
  std::mt19937_64 rng(42);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const PrecisionContext ctx(p, 4);
    const Zp R(ctx);
    const TeichmullerTable table(ctx, 1);
    std::vector<std::uint64_t> omegas;
    for (const auto& w : table.points) omegas.push_back(w.coords[0]);
    for (int t = 0; t < 10; ++t) {
      const ZpMatrix x = conjugated_diagonal(R, 2 + static_cast<std::size_t>(t % 4), rng, omegas);
      const auto dec = teichmuller_spectral(x, table);
      check_decomposition(embed(table.ring, x), dec);
      for (const auto& pt : dec.points) {
        CHECK(certify_orthogonal_projection(base_of(pt.projector), 8, static_cast<std::uint64_t>(t)).valid);
      }
    }
  }
}

TEST_CASE("projector images are the eigenspaces found by exhaustive search") {
  const PrecisionContext ctx(3, 2);
  const Zp R(ctx);
  const TeichmullerTable table(ctx, 1);
  const ZpMatrix x = mat(R, 2, {0, 1, 1, 0});
  const auto dec = teichmuller_spectral(x, table);
  for (const auto& pt : dec.points) {
    const ZpMatrix pi = base_of(pt.projector);
    const std::uint64_t lam = pt.lambda.coords[0];
    std::set<std::vector<std::uint64_t>> kernel, image;
    for (std::uint64_t a = 0; a < 9; ++a) {
      for (std::uint64_t b = 0; b < 9; ++b) {
        const std::vector<std::uint64_t> v{a, b};
        const auto xv = x.apply(v);
        if (xv[0] == (lam * a) % 9 && xv[1] == (lam * b) % 9) kernel.insert(v);
        image.insert(pi.apply(v));
      }
    }
    CHECK(kernel == image);
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("hermite_digits_matrix examples") {
  const Zp R(PrecisionContext(3, 4));
  {
    const auto r = hermite_digits_matrix(mat(R, 2, {1, 3, 0, 4}), 1);
    REQUIRE(std::holds_alternative<HermiteDigitsMatrix>(r));
    const auto& h = std::get<HermiteDigitsMatrix>(r);
    REQUIRE(h.digits.size() == 4);
    CHECK(h.digits[0] == ZpMatrix::identity(R, 2));
    CHECK(h.digits[1] == mat(R, 2, {0, 1, 0, 1}));
    CHECK(h.digits[2].is_zero());
    CHECK(h.digits[3].is_zero());
    CHECK(h.reassemble() == mat(R, 2, {1, 3, 0, 4}));
  }
  {
    const auto r = hermite_digits_matrix(mat(R, 2, {1, 1, 0, 1}), 1);
    REQUIRE(std::holds_alternative<NotHermite>(r));
    const auto& nh = std::get<NotHermite>(r);
    CHECK(nh.stage == 1);
    CHECK(nh.reason == "nilpotent residue at digit 1");
    CHECK(nh.defect == Norm::one(3));
  }
  {
    // diagonal: digits are the scalar digit expansions entrywise
    const PrecisionContext ctx(5, 3);
    const Zp S(ctx);
    const std::vector<std::uint64_t> d{2, 17, 100};
    const auto r = hermite_digits_matrix(ZpMatrix::diagonal(S, d), 1);
    REQUIRE(std::holds_alternative<HermiteDigitsMatrix>(r));
    const auto& h = std::get<HermiteDigitsMatrix>(r);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const TeichDigits td = teichmuller_digits(PadicScalar::from_residue(ctx, d[i]));
      const int shift = static_cast<int>(td.lead_valuation);
      for (int j = 0; j < 3; ++j) {
        const std::uint64_t expected = j < shift ? 0 : td.digits[static_cast<std::size_t>(j - shift)].residue();
        CHECK(h.digits[static_cast<std::size_t>(j)](i, i) == expected);
      }
    }
  }
}

TEST_CASE("hermite digits of conjugated diagonals") {
  std::mt19937_64 rng(51);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const PrecisionContext ctx(p, 4);
    const Zp R(ctx);
    for (int t = 0; t < 15; ++t) {
      std::vector<std::uint64_t> vals;
      for (int i = 0; i < 4; ++i) vals.push_back(rng() % ctx.modulus());
      const ZpMatrix a = conjugated_diagonal(R, 3, rng, vals);
      const auto r = hermite_digits_matrix(a, 1);
      REQUIRE(std::holds_alternative<HermiteDigitsMatrix>(r));
      const auto& h = std::get<HermiteDigitsMatrix>(r);
      CHECK(h.reassemble() == a);
      for (const auto& x : h.digits) {
        CHECK(frobenius(x) == x);
        for (const auto& y : h.digits) CHECK(x * y == y * x);
      }
    }
  }
}

TEST_CASE("non-diagonalizable perturbations are rejected at the right stage") {
  std::mt19937_64 rng(52);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const PrecisionContext ctx(p, 4);
    const Zp R(ctx);
    for (int j = 0; j < 4; ++j) {
      const std::uint64_t lam = rng() % ctx.modulus();
      ZpMatrix core = ZpMatrix::diagonal(R, {lam, lam, rng() % ctx.modulus()});
      core(0, 1) = R.mul_p_power(1, j);
      const ZpMatrix u = sampling::random_gl(R, 3, rng);
      const auto r = hermite_digits_matrix(u * core * inverse(u), 1);
      REQUIRE(std::holds_alternative<NotHermite>(r));
      CHECK(std::get<NotHermite>(r).stage == j + 1);
    }
  }
}

TEST_CASE("hermite with negative lead valuation and period two") {
  const PrecisionContext ctx(3, 3);
  const Zp R(ctx);
  const auto r = hermite_digits_matrix(ScaledMatrix<Zp>{-1, mat(R, 2, {1, 3, 0, 4})}, 1);
  REQUIRE(std::holds_alternative<HermiteDigitsMatrix>(r));
  CHECK(std::get<HermiteDigitsMatrix>(r).lead_valuation == -1);

  const ZpMatrix rot = mat(R, 2, {0, -1, 1, 0});
  CHECK(std::holds_alternative<NotHermite>(hermite_digits_matrix(rot, 1)));
  const auto r2 = hermite_digits_matrix(rot + ZpMatrix::identity(R, 2).scaled(3), 2);
  REQUIRE(std::holds_alternative<HermiteDigitsMatrix>(r2));
  const auto& h = std::get<HermiteDigitsMatrix>(r2);
  CHECK(h.digits[0] == rot);
  CHECK(h.digits[1] == ZpMatrix::identity(R, 2));
}

TEST_CASE("sums and products of commuting hermite operators are hermite") {
  std::mt19937_64 rng(53);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const PrecisionContext ctx(p, 4);
    const Zp R(ctx);
    for (int t = 0; t < 10; ++t) {
      const ZpMatrix u = sampling::random_gl(R, 3, rng);
      const ZpMatrix ui = inverse(u);
      const ZpMatrix a = u * ZpMatrix::diagonal(R, {rng() % 81, rng() % 81, rng() % 81}) * ui;
      const ZpMatrix b = u * ZpMatrix::diagonal(R, {rng() % 81, rng() % 81, rng() % 81}) * ui;
      CHECK(std::holds_alternative<HermiteDigitsMatrix>(hermite_digits_matrix(a + b, 1)));
      CHECK(std::holds_alternative<HermiteDigitsMatrix>(hermite_digits_matrix(a * b, 1)));
    }
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("spectral_measure examples") {
  {
    const PrecisionContext ctx(5, 3);
    const Zp R(ctx);
    const std::uint64_t w2 = teichmuller_lift(2, ctx).residue();
    const auto r = spectral_measure(ZpMatrix::identity(R, 2).scaled(w2), 2);
    REQUIRE(std::holds_alternative<SpectralMeasure>(r));
    const auto& m = std::get<SpectralMeasure>(r);
    REQUIRE(m.level(0).size() == 1);
    REQUIRE(m.level(1).size() == 1);
    CHECK(m.level(0)[0].address == BallAddress{2});
    CHECK(m.level(1)[0].address == BallAddress{2, 0});
    CHECK(base_of(m.level(1)[0].projector) == ZpMatrix::identity(R, 2));
  }
  {
    const PrecisionContext ctx(3, 3);
    const Zp R(ctx);
    const auto r = spectral_measure(ZpMatrix::diagonal(R, {1, 4}), 2);
    REQUIRE(std::holds_alternative<SpectralMeasure>(r));
    const auto& m = std::get<SpectralMeasure>(r);
    REQUIRE(m.level(0).size() == 1);
    CHECK(m.level(0)[0].address == BallAddress{1});
    CHECK(base_of(m.level(0)[0].projector) == ZpMatrix::identity(R, 2));
    REQUIRE(m.level(1).size() == 2);
    CHECK(m.level(1)[0].address == BallAddress{1, 0});
    CHECK(base_of(m.level(1)[0].projector) == ZpMatrix::diagonal(R, {1, 0}));
    CHECK(m.level(1)[1].address == BallAddress{1, 1});
    CHECK(base_of(m.level(1)[1].projector) == ZpMatrix::diagonal(R, {0, 1}));
    CHECK(m.nodes().size() == 3);
  }
  {
    const PrecisionContext ctx(3, 3);
    const Zp R(ctx);
    const ZpMatrix s = mat(R, 2, {1, 1, 0, 1});
    const ZpMatrix si = inverse(s);
    const auto r = spectral_measure(mat(R, 2, {1, 3, 0, 4}), 2);
    REQUIRE(std::holds_alternative<SpectralMeasure>(r));
    const auto& m = std::get<SpectralMeasure>(r);
    REQUIRE(m.level(1).size() == 2);
    CHECK(base_of(m.level(1)[0].projector) == s * ZpMatrix::diagonal(R, {1, 0}) * si);
    CHECK(base_of(m.level(1)[1].projector) == s * ZpMatrix::diagonal(R, {0, 1}) * si);
  }
}

TEST_CASE("spectral measure invariants") {
  std::mt19937_64 rng(61);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const PrecisionContext ctx(p, 4);
    const Zp R(ctx);
    for (int t = 0; t < 8; ++t) {
      std::vector<std::uint64_t> vals;
      for (int i = 0; i < 4; ++i) vals.push_back(rng() % ctx.modulus());
      const std::size_t n = 4;
      const ZpMatrix a = conjugated_diagonal(R, n, rng, vals);
      const auto r = spectral_measure(a, 4);
      REQUIRE(std::holds_alternative<SpectralMeasure>(r));
      const auto& m = std::get<SpectralMeasure>(r);
      std::size_t prev = 0;
      for (int j = 0; j < m.depth; ++j) {
        const auto& lvl = m.level(j);
        CHECK(lvl.size() >= prev);
        CHECK(lvl.size() <= n);
        prev = lvl.size();
        ExtMatrix sum(m.ring(), n);
        for (std::size_t i = 0; i < lvl.size(); ++i) {
          sum += lvl[i].projector;
          CHECK(lvl[i].projector * lvl[i].projector == lvl[i].projector);
          CHECK(lvl[i].projector.norm() == Norm::one(p));
          for (std::size_t k = i + 1; k < lvl.size(); ++k) CHECK((lvl[i].projector * lvl[k].projector).is_zero());
        }
        CHECK(sum == ExtMatrix::identity(m.ring(), n));
        if (j == 0) continue;
        for (const auto& parent : m.level(j - 1)) {
          ExtMatrix children(m.ring(), n);
          for (const auto& child : lvl) {
            if (std::equal(parent.address.begin(), parent.address.end(), child.address.begin())) children += child.projector;
          }
          CHECK(children == parent.projector);
        }
      }
    }
  }
}

TEST_CASE("spectral_integral examples") {
  const PrecisionContext ctx(3, 3);
  const Zp R(ctx);
  {
    const auto m = std::get<SpectralMeasure>(spectral_measure(ZpMatrix::identity(R, 2), 2));
    const auto integral = spectral_integral(m);
    CHECK(base_of(integral.identity_check) == ZpMatrix::identity(R, 2));
    CHECK(base_of(integral.reconstruction) == ZpMatrix::identity(R, 2));
  }
  const ZpMatrix a = ZpMatrix::diagonal(R, {1, 4});
  const auto i2 = spectral_integral(std::get<SpectralMeasure>(spectral_measure(a, 2)));
  CHECK((base_of(i2.reconstruction) - a).valuation() >= 2);
  const auto i1 = spectral_integral(std::get<SpectralMeasure>(spectral_measure(a, 1)));
  CHECK((base_of(i1.reconstruction) - a).norm() <= Norm(3, 1));
  CHECK((base_of(i2.reconstruction) - a).norm() <= Norm(3, 2));
}

TEST_CASE("spectral measure propagates NotHermite") {
  const Zp R(PrecisionContext(3, 3));
  const auto r = spectral_measure(mat(R, 2, {1, 1, 0, 1}), 2);
  REQUIRE(std::holds_alternative<NotHermite>(r));
  CHECK(std::get<NotHermite>(r).stage == 1);
  CHECK_THROWS_AS(spectral_measure(ZpMatrix::identity(R, 2), 4), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST_CASE("jordan_decompose examples") {
  const Zp R(PrecisionContext(3, 4));
  {
    const ZpMatrix a = mat(R, 2, {1, 1, 0, 1});
    // sigma^k(A) = [[1, 3^k], [0, 1]]
    CHECK(frobenius_power(a, 2) == mat(R, 2, {1, 9, 0, 1}));
    const auto jp = jordan_decompose(a, 4);
    CHECK(jp.semisimple == ZpMatrix::identity(R, 2));
    CHECK(jp.nilpotent == mat(R, 2, {0, 1, 0, 0}));
    CHECK(jp.period == 1);
  }
  {
    const ZpMatrix a = mat(R, 2, {0, 1, 1, 0});
    const auto jp = jordan_decompose(a, 4);
    CHECK(jp.semisimple == a);
    CHECK(jp.nilpotent.is_zero());
    CHECK(jp.steps_to_kill == 0);
  }
  {
    const ZpMatrix a = mat(R, 3, {0, 1, 2, 0, 0, 5, 0, 0, 0});
    const auto jp = jordan_decompose(a, 4);
    CHECK(jp.semisimple.is_zero());
    CHECK(jp.nilpotent == a);
  }
  CHECK_THROWS_AS(jordan_decompose(mat(R, 2, {0, -1, 1, 0}), 1), PeriodExceeded);
  const auto rot = jordan_decompose(mat(R, 2, {0, -1, 1, 0}), 2);
  CHECK(rot.period == 2);
}

TEST_CASE("jordan decomposition is independent of the intermediate lift") {
  std::mt19937_64 rng(71);
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const Zp R(PrecisionContext(p, 4));
    for (int t = 0; t < 15; ++t) {
      const ZpMatrix a = sampling::random_matrix(R, 3, rng);
      const auto jp = jordan_decompose(a, 6);
      CHECK(jp.semisimple + jp.nilpotent == a);
      CHECK(frobenius_power(jp.semisimple, jp.period) == jp.semisimple);
      CHECK(jp.semisimple * a == a * jp.semisimple);
      const ZpMatrix poly = ZpMatrix::identity(R, 3).scaled(rng() % 81) + a.scaled(rng() % 81) + (a * a).scaled(rng() % 81);
      const ZpMatrix seed = frobenius_power(a, jp.period * 2) + poly.mul_p_power(1);
      CHECK(jordan_from_semisimple(a, semisimple_limit(seed, 6), jp.period).semisimple == jp.semisimple);
    }
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("spectrum_diameter examples") {
  const Zp R(PrecisionContext(3, 3));
  {
    const auto rep = std::get<SpectrumReport>(spectrum_diameter(ZpMatrix::identity(R, 2).scaled(5)));
    CHECK(rep.diameter.is_zero());
    CHECK(rep.norm_law_holds);
  }
  {
    const auto rep = std::get<SpectrumReport>(spectrum_diameter(ZpMatrix::diagonal(R, {1, 4})));
    CHECK(rep.diameter == Norm(3, 1));
    CHECK(rep.norm_law_holds);
    CHECK(rep.translation_law_holds);
  }
  {
    const auto rep = std::get<SpectrumReport>(spectrum_diameter(ZpMatrix::diagonal(R, {1, R.modulus() - 1})));
    CHECK(rep.diameter == Norm::one(3));
  }
  {
    const auto rep = std::get<SpectrumReport>(spectrum_diameter(ScaledMatrix<Zp>{-1, ZpMatrix::diagonal(R, {3, 6})}));
    CHECK(rep.diameter == Norm::one(3));
    CHECK(rep.operator_norm == Norm::one(3));
    CHECK(rep.norm_law_holds);
  }
  CHECK(std::holds_alternative<NotHermite>(spectrum_diameter(mat(R, 2, {1, 1, 0, 1}))));
}

TEST_CASE("uncertainty_check examples") {
  const Zp R(PrecisionContext(3, 3));
  const ZpMatrix a = ZpMatrix::diagonal(R, {1, R.modulus() - 1});
  const ZpMatrix b = mat(R, 2, {0, 1, 1, 0});
  const auto u = std::get<UncertaintyResult>(uncertainty_check(a, b, {1, 0}));
  CHECK(u.lhs == Norm::one(3));
  CHECK(u.rhs == Norm::one(3));
  CHECK(u.holds);

  const auto c = std::get<UncertaintyResult>(uncertainty_check(a, a * a, {1, 1}));
  CHECK(c.lhs.is_zero());
  CHECK(c.holds);

  const auto s = std::get<UncertaintyResult>(uncertainty_check(ZpMatrix::identity(R, 2).scaled(4), b, {0, 1}));
  CHECK(s.lhs.is_zero());
  CHECK(s.rhs.is_zero());
  CHECK(s.holds);

  CHECK_THROWS_AS(uncertainty_check(a, b, {3, 0}), std::invalid_argument);
  CHECK(std::holds_alternative<NotHermite>(uncertainty_check(mat(R, 2, {1, 1, 0, 1}), b, {1, 0})));
}
