#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padic/function_ops.hpp"
#include "padic/io.hpp"
#include "padic/matrix.hpp"
#include "padic/orbit.hpp"
#include "padic/projection.hpp"
#include "padic/spectral.hpp"
#include "padic/unramified.hpp"
#include "padic/zp.hpp"

namespace padic::cli {

using json = nlohmann::json;

enum ExitCode : int { kSuccess = 0, kRejected = 1, kMalformed = 2, kInternal = 3 };

struct Options {
  std::string in;
  std::string out;
  std::optional<std::uint64_t> p;
  std::optional<int> m;
  std::optional<int> N;
  std::optional<int> depth;
  std::optional<int> M;
  std::optional<std::uint64_t> residue;
  std::optional<std::string> value;
  std::uint64_t seed = 0;
  std::optional<int> samples;
};

/// Flags override fields of the problem file.
class Problem {
 public:
  Problem(const Options& opt, json doc) : opt_(opt), doc_(std::move(doc)) {}

  const json& doc() const { return doc_; }
  const Options& options() const { return opt_; }
  bool has(const std::string& key) const { return doc_.is_object() && doc_.contains(key); }
  const json& at(const std::string& key) const {
    if (!has(key)) throw io::InputError(key, "missing field");
    return doc_.at(key);
  }

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> flag, std::optional<std::int64_t> fallback) const {
    if (flag) return *flag;
    if (has(key)) {
      if (!doc_.at(key).is_number_integer()) throw io::InputError(key, "expected an integer");
      return doc_.at(key).get<std::int64_t>();
    }
    if (fallback) return *fallback;
    throw io::InputError(key, "missing field");
  }

  PrecisionContext context() const {
    std::optional<std::int64_t> pf;
    if (opt_.p) pf = static_cast<std::int64_t>(*opt_.p);
    std::optional<std::int64_t> mf;
    if (opt_.m) mf = *opt_.m;
    std::optional<std::int64_t> m_default;
    if (const char* env = std::getenv("PADIC_DEFAULT_M")) m_default = io::parse_signed("PADIC_DEFAULT_M", env);
    const std::int64_t p = integer("p", pf, std::nullopt);
    const std::int64_t m = integer("m", mf, m_default);
    if (p < 2) throw io::InputError("p", "must be a prime >= 2");
    if (m < 1 || m > 64) throw io::InputError("m", "must lie in [1, 64]");
    try {
      return PrecisionContext(static_cast<std::uint64_t>(p), static_cast<int>(m));
    } catch (const std::invalid_argument& e) {
      throw io::InputError("p/m", e.what());
    }
  }

  int period(int fallback) const {
    std::optional<std::int64_t> f;
    if (opt_.N) f = *opt_.N;
    const std::int64_t n = integer("N", f, fallback);
    if (n < 1 || n > 64) throw io::InputError("N", "must lie in [1, 64]");
    return static_cast<int>(n);
  }

 private:
  Options opt_;
  json doc_;
};

namespace detail {

struct Outcome {
  int code = kSuccess;
  json doc;
};

inline json header(const std::string& command, const PrecisionContext& ctx) {
  return json{{"command", command}, {"p", ctx.p()}, {"m", ctx.m()}};
}

inline void check_table_size(const PrecisionContext& ctx, int period) {
  const std::uint64_t q = padic::detail::checked_pow(ctx.p(), period);
  if (q == 0 || q > (std::uint64_t{1} << 20)) throw io::InputError("N", "p^N exceeds 2^20");
}

inline json matrix_field(const Problem& pr) {
  if (pr.has("entries")) return pr.at("entries");
  if (pr.has("A")) return pr.at("A");
  throw io::InputError("entries", "missing field");
}

inline Outcome cmd_lift(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  std::optional<std::int64_t> flag;
  if (pr.options().residue) flag = static_cast<std::int64_t>(*pr.options().residue);
  const std::int64_t r = pr.integer("residue", flag, std::nullopt);
  if (r < 0 || static_cast<std::uint64_t>(r) >= ctx.p()) throw io::InputError("residue", "must lie in [0, p)");
  json doc = header("lift", ctx);
  doc["residue"] = r;
  doc["lift"] = io::scalar_to_json(teichmuller_lift(static_cast<std::uint64_t>(r), ctx));
  return {kSuccess, doc};
}

inline PadicScalar value_of(const Problem& pr, const PrecisionContext& ctx) {
  if (pr.options().value) return io::scalar_from_json(json(*pr.options().value), ctx, "value");
  return io::scalar_from_json(pr.at("value"), ctx, "value");
}

inline Outcome cmd_digits(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const PadicScalar x = value_of(pr, ctx);
  const TeichDigits d = teichmuller_digits(x);
  json doc = header("digits", ctx);
  doc["value"] = io::scalar_to_json(x);
  doc["lead_valuation"] = d.lead_valuation;
  doc["digits"] = json::array();
  for (const auto& digit : d.digits) doc["digits"].push_back(io::scalar_to_json(digit));
  return {kSuccess, doc};
}

template <class T, class ToJson>
json verdict_to_json(const OrbitVerdict<T>& v, ToJson to_json) {
  json j{{"kind", to_string(v.kind)}, {"steps", v.steps}};
  if (v.kind == OrbitKind::Periodic || v.kind == OrbitKind::QuasiPeriodic) {
    j["period"] = v.period;
    j["tail"] = v.tail;
  }
  if (v.kind == OrbitKind::TopNilpotent) j["tail"] = v.tail;
  if (v.limit) j["limit"] = to_json(*v.limit);
  return j;
}

inline Outcome cmd_classify(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const int n_max = pr.period(6);
  json doc = header("classify", ctx);
  doc["N_max"] = n_max;
  OrbitKind kind;
  if (pr.has("entries")) {
    const ZpMatrix a = io::integral_matrix_from_json(pr.at("entries"), ctx, "entries");
    const auto v = classify_orbit(a, n_max);
    kind = v.kind;
    doc["verdict"] = verdict_to_json(v, [](const ZpMatrix& x) { return io::matrix_to_json(x); });
  } else {
    const PadicScalar x = value_of(pr, ctx);
    if (!x.is_integral()) throw std::domain_error("classify: |x| > 1");
    const auto v = classify_orbit(x, n_max);
    kind = v.kind;
    doc["verdict"] = verdict_to_json(v, [](const PadicScalar& s) { return io::scalar_to_json(s); });
  }
  return {kind == OrbitKind::ChaosAtPrecision ? kRejected : kSuccess, doc};
}

inline Outcome cmd_spectral(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const int period = pr.period(1);
  check_table_size(ctx, period);
  const ZpMatrix x = io::integral_matrix_from_json(matrix_field(pr), ctx, "entries");
  const SpectralDecomposition dec = teichmuller_spectral(x, period);
  const ExtRing ring(ctx, period);
  json doc = header("spectral", ctx);
  doc["N"] = period;
  doc["points"] = json::array();
  for (const auto& pt : dec.points) {
    doc["points"].push_back(json{{"index", pt.index},
                                 {"lambda", io::ext_scalar_to_json(ring, pt.lambda)},
                                 {"projector", io::projector_to_json(pt.projector)}});
  }
  doc["residual_identity_defect"] = io::norm_to_json(dec.residual_identity_defect);
  doc["reconstruction_defect"] = io::norm_to_json(dec.reconstruction_defect);
  return {kSuccess, doc};
}

inline Outcome cmd_hermite(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const int period = pr.period(1);
  check_table_size(ctx, period);
  const ScaledMatrix<Zp> a = io::matrix_from_json(matrix_field(pr), ctx, "entries");
  const HermiteResult r = hermite_digits_matrix(a, period);
  json doc = header("hermite", ctx);
  doc["N"] = period;
  if (const auto* nh = std::get_if<NotHermite>(&r)) {
    doc.update(io::not_hermite_to_json(*nh));
    return {kRejected, doc};
  }
  const auto& h = std::get<HermiteDigitsMatrix>(r);
  doc["status"] = "Hermite";
  doc["lead_valuation"] = h.lead_valuation;
  doc["digits"] = json::array();
  for (const auto& d : h.digits) doc["digits"].push_back(io::matrix_to_json(d));
  return {kSuccess, doc};
}

inline int depth_of(const Problem& pr, const PrecisionContext& ctx) {
  std::optional<std::int64_t> f;
  if (pr.options().depth) f = *pr.options().depth;
  const std::int64_t d = pr.integer("depth", f, ctx.m());
  if (d < 1 || d > ctx.m()) throw io::InputError("depth", "must lie in [1, m]");
  return static_cast<int>(d);
}

inline Outcome cmd_measure(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const int period = pr.period(1);
  check_table_size(ctx, period);
  const int depth = depth_of(pr, ctx);
  const ScaledMatrix<Zp> a = io::matrix_from_json(matrix_field(pr), ctx, "entries");
  const MeasureResult r = spectral_measure(a, depth, period);
  json doc = header("measure", ctx);
  doc["N"] = period;
  doc["depth"] = depth;
  if (const auto* nh = std::get_if<NotHermite>(&r)) {
    doc.update(io::not_hermite_to_json(*nh));
    return {kRejected, doc};
  }
  const auto& meas = std::get<SpectralMeasure>(r);
  doc["lead_valuation"] = meas.lead_valuation;
  doc["nodes"] = json::array();
  for (std::size_t j = 0; j < meas.levels.size(); ++j) {
    for (const auto& node : meas.levels[j]) {
      doc["nodes"].push_back(json{{"level", j},
                                  {"address", node.address},
                                  {"center", io::ext_scalar_to_json(meas.ring(), node.center, meas.lead_valuation)},
                                  {"projector", io::projector_to_json(node.projector)}});
    }
  }
  return {kSuccess, doc};
}

inline Outcome cmd_integral(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const int period = pr.period(1);
  check_table_size(ctx, period);
  const int depth = depth_of(pr, ctx);
  const ScaledMatrix<Zp> a = io::matrix_from_json(matrix_field(pr), ctx, "entries");
  const MeasureResult r = spectral_measure(a, depth, period);
  json doc = header("integral", ctx);
  doc["N"] = period;
  doc["depth"] = depth;
  if (const auto* nh = std::get_if<NotHermite>(&r)) {
    doc.update(io::not_hermite_to_json(*nh));
    return {kRejected, doc};
  }
  const auto& meas = std::get<SpectralMeasure>(r);
  const SpectralIntegral integral = spectral_integral(meas);
  const Norm err = (integral.reconstruction - embed(meas.ring(), a.body)).norm();
  doc["lead_valuation"] = integral.lead_valuation;
  doc["identity_check"] = io::projector_to_json(integral.identity_check);
  if (auto base = to_base(integral.reconstruction)) {
    doc["reconstruction"] = io::matrix_to_json(ScaledMatrix<Zp>{integral.lead_valuation, *base});
  } else {
    doc["reconstruction"] = io::ext_matrix_to_json(integral.reconstruction);
  }
  doc["reconstruction_error"] =
      io::norm_to_json(err.is_zero() ? err : Norm(ctx.p(), err.valuation() + integral.lead_valuation));
  return {kSuccess, doc};
}

inline Outcome cmd_jordan(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  std::optional<std::int64_t> f;
  if (pr.options().N) f = *pr.options().N;
  const std::int64_t n_max = pr.integer("N_max", f, 6);
  if (n_max < 1 || n_max > 64) throw io::InputError("N_max", "must lie in [1, 64]");
  const ZpMatrix a = io::integral_matrix_from_json(matrix_field(pr), ctx, "entries");
  json doc = header("jordan", ctx);
  doc["N_max"] = n_max;
  try {
    const auto jp = jordan_decompose(a, static_cast<int>(n_max));
    doc["A_s"] = io::matrix_to_json(jp.semisimple);
    doc["A_n"] = io::matrix_to_json(jp.nilpotent);
    doc["period"] = jp.period;
    doc["steps_to_kill"] = jp.steps_to_kill;
    return {kSuccess, doc};
  } catch (const PeriodExceeded& e) {
    doc["status"] = "PeriodExceeded";
    doc["reason"] = e.what();
    return {kRejected, doc};
  }
}

inline Outcome cmd_diam(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const int period = pr.period(1);
  check_table_size(ctx, period);
  const ScaledMatrix<Zp> a = io::matrix_from_json(matrix_field(pr), ctx, "entries");
  const SpectrumResult r = spectrum_diameter(a, period);
  json doc = header("diam", ctx);
  if (const auto* nh = std::get_if<NotHermite>(&r)) {
    doc.update(io::not_hermite_to_json(*nh));
    return {kRejected, doc};
  }
  const auto& rep = std::get<SpectrumReport>(r);
  const ExtRing ring(ctx, period);
  doc["diameter"] = io::norm_to_json(rep.diameter);
  doc["operator_norm"] = io::norm_to_json(rep.operator_norm);
  doc["spectral_radius"] = io::norm_to_json(rep.spectral_radius);
  doc["norm_law_holds"] = rep.norm_law_holds;
  doc["translation_law_holds"] = rep.translation_law_holds;
  doc["spectrum"] = json::array();
  for (const auto& l : rep.spectrum) doc["spectrum"].push_back(io::ext_scalar_to_json(ring, l, rep.lead_valuation));
  return {kSuccess, doc};
}

inline Outcome cmd_uncertainty(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const int period = pr.period(1);
  check_table_size(ctx, period);
  const ScaledMatrix<Zp> a = io::matrix_from_json(pr.at("A"), ctx, "A");
  const ScaledMatrix<Zp> b = io::matrix_from_json(pr.at("B"), ctx, "B");
  if (a.body.size() != b.body.size()) throw io::InputError("B", "dimension differs from A");
  const Zp ring(ctx);
  std::vector<std::vector<std::uint64_t>> psis;
  if (pr.has("psi")) {
    const json& pj = pr.at("psi");
    if (!pj.is_array() || pj.size() != a.body.size()) throw io::InputError("psi", "expected one scalar per row");
    std::vector<std::uint64_t> psi;
    for (std::size_t i = 0; i < pj.size(); ++i) {
      const PadicScalar s = io::scalar_from_json(pj[i], ctx, "psi[" + std::to_string(i) + "]");
      if (!s.is_integral()) throw io::InputError("psi", "|psi| must be 1");
      psi.push_back(s.residue());
    }
    if (!(vector_norm(ring, psi) == Norm::one(ctx.p()))) throw io::InputError("psi", "|psi| must be 1");
    psis.push_back(std::move(psi));
  } else {
    std::mt19937_64 rng(pr.options().seed);
    const int count = pr.options().samples.value_or(10);
    for (int s = 0; s < count; ++s) psis.push_back(sampling::random_unit_vector(ring, a.body.size(), rng));
  }
  json doc = header("uncertainty", ctx);
  doc["checks"] = json::array();
  int violations = 0;
  for (const auto& psi : psis) {
    const UncertaintyOutcome r = uncertainty_check(a, b, psi, period);
    if (const auto* nh = std::get_if<NotHermite>(&r)) {
      doc.update(io::not_hermite_to_json(*nh));
      return {kRejected, doc};
    }
    const auto& u = std::get<UncertaintyResult>(r);
    json psi_json = json::array();
    for (auto c : psi) psi_json.push_back(io::scalar_to_json(PadicScalar::from_residue(ctx, c)));
    doc["checks"].push_back(json{{"psi", psi_json},
                                 {"lhs", io::norm_to_json(u.lhs)},
                                 {"rhs", io::norm_to_json(u.rhs)},
                                 {"holds", u.holds}});
    if (!u.holds) ++violations;
  }
  doc["violations"] = violations;
  return {violations == 0 ? kSuccess : kRejected, doc};
}

inline std::size_t truncation_of(const Problem& pr) {
  std::optional<std::int64_t> f;
  if (pr.options().M) f = *pr.options().M;
  const std::int64_t M = pr.integer("M", f, 16);
  if (M < 2 || M > 4096) throw io::InputError("M", "must lie in [2, 4096]");
  return static_cast<std::size_t>(M);
}

template <class Tag>
CoeffVector<Tag> coeffs_of(const Problem& pr, const PrecisionContext& ctx, std::size_t M) {
  const json& cj = pr.at("coeffs");
  if (!cj.is_array() || cj.size() > M) throw io::InputError("coeffs", "expected at most M scalars");
  CoeffVector<Tag> v(ctx, M);
  for (std::size_t i = 0; i < cj.size(); ++i) v.coeffs[i] = io::scalar_from_json(cj[i], ctx, "coeffs[" + std::to_string(i) + "]");
  return v;
}

template <class Tag>
json coeffs_to_json(const CoeffVector<Tag>& v) {
  json a = json::array();
  for (const auto& c : v.coeffs) a.push_back(io::scalar_to_json(c));
  return json{{"coeffs", a}, {"truncated", v.truncated}, {"norm", io::norm_to_json(v.norm())}};
}

inline Outcome cmd_kochubei(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const std::size_t M = truncation_of(pr);
  json doc = header("kochubei", ctx);
  doc["M"] = M;
  bool eigen_ok = true;
  for (std::size_t n = 0; n + 1 < M; ++n) {
    const MahlerVector e = MahlerVector::basis(ctx, M, n);
    if (!(number_operator(e) == e.scaled(PadicScalar::from_integer(ctx, static_cast<std::int64_t>(n))))) eigen_ok = false;
  }
  const Norm kd = commutator_defect<MahlerTag>(kochubei_raise, kochubei_lower, ctx, M);
  doc["eigen_relation_holds"] = eigen_ok;
  doc["commutator_defect_kochubei"] = io::norm_to_json(kd);
  // the shift a* plays the lowering role in [a*, a+] = 1
  const Norm sd2 = commutator_defect<MahlerTag>(kochubei_raise, shift_operator, ctx, M);
  doc["commutator_defect_shift"] = io::norm_to_json(sd2);
  if (pr.has("coeffs")) {
    const MahlerVector f = coeffs_of<MahlerTag>(pr, ctx, M);
    doc["raise"] = coeffs_to_json(kochubei_raise(f));
    doc["lower"] = coeffs_to_json(kochubei_lower(f));
    doc["number"] = coeffs_to_json(number_operator(f));
    doc["shift"] = coeffs_to_json(shift_operator(f));
    doc["times_x"] = coeffs_to_json(multiplication_by_x(f));
  }
  const bool ok = eigen_ok && kd.is_zero() && sd2.is_zero();
  return {ok ? kSuccess : kRejected, doc};
}

inline Outcome cmd_euler(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const std::size_t M = truncation_of(pr);
  std::vector<PadicScalar> h;
  if (pr.has("h")) {
    const json& hj = pr.at("h");
    if (!hj.is_array()) throw io::InputError("h", "expected an array of scalars");
    for (std::size_t i = 0; i < hj.size(); ++i) h.push_back(io::scalar_from_json(hj[i], ctx, "h[" + std::to_string(i) + "]"));
    for (const auto& c : h) {
      if (!c.is_integral()) throw io::InputError("h", "|h| must be <= 1");
    }
  }
  json doc = header("euler", ctx);
  doc["M"] = M;
  bool eigen_ok = true;
  for (std::size_t k = 0; k < M; ++k) {
    const TateVector e = TateVector::basis(ctx, M, k);
    if (!(euler_operator(e) == e.scaled(PadicScalar::from_integer(ctx, static_cast<std::int64_t>(k))))) eigen_ok = false;
  }
  const Norm d = commutator_defect<TateTag>([&h](const TateVector& f) { return euler_raise(f, h); }, euler_lower, ctx, M);
  doc["eigen_relation_holds"] = eigen_ok;
  doc["commutator_defect"] = io::norm_to_json(d);
  if (pr.has("coeffs")) {
    const TateVector f = coeffs_of<TateTag>(pr, ctx, M);
    doc["euler"] = coeffs_to_json(euler_operator(f));
    doc["raise"] = coeffs_to_json(euler_raise(f, h));
    doc["lower"] = coeffs_to_json(euler_lower(f));
  }
  return {eigen_ok && d.is_zero() ? kSuccess : kRejected, doc};
}

inline Outcome cmd_certify_projection(const Problem& pr) {
  const PrecisionContext ctx = pr.context();
  const ScaledMatrix<Zp> pi = io::matrix_from_json(matrix_field(pr), ctx, "entries");
  const int samples = pr.options().samples.value_or(32);
  if (samples < 0) throw io::InputError("samples", "must be >= 0");
  const ProjectionCertificate c = certify_orthogonal_projection(pi, samples, pr.options().seed);
  json doc = header("certify-projection", ctx);
  doc["idempotency_defect"] = io::norm_to_json(c.idempotency_defect);
  doc["norm"] = io::norm_to_json(c.norm_of_pi);
  doc["idempotent"] = c.idempotent;
  doc["norm_one"] = c.norm_one;
  doc["unit_ball_stable"] = c.unit_ball_stable;
  doc["norm_splits"] = c.norm_splits;
  doc["reduction_idempotent"] = c.reduction_idempotent;
  doc["conditions_agree"] = c.conditions_agree;
  doc["samples_checked"] = c.samples_checked;
  doc["seed"] = pr.options().seed;
  doc["valid"] = c.valid;
  if (!c.valid) doc["failure"] = c.failure;
  return {c.valid ? kSuccess : kRejected, doc};
}

inline const std::map<std::string, std::function<Outcome(const Problem&)>>& commands() {
  static const std::map<std::string, std::function<Outcome(const Problem&)>> table{
      {"lift", cmd_lift},
      {"digits", cmd_digits},
      {"classify", cmd_classify},
      {"spectral", cmd_spectral},
      {"measure", cmd_measure},
      {"integral", cmd_integral},
      {"jordan", cmd_jordan},
      {"hermite", cmd_hermite},
      {"diam", cmd_diam},
      {"uncertainty", cmd_uncertainty},
      {"kochubei", cmd_kochubei},
      {"euler", cmd_euler},
      {"certify-projection", cmd_certify_projection},
  };
  return table;
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name. The JSON document
/// goes to `out` (or --out FILE); diagnostics go to `err`.
/// Exit status: 0 success, 1 mathematical rejection, 2 malformed input,
/// 3 internal error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact p-adic arithmetic and operator-theory engine"};
  app.require_subcommand(1);
  Options opt;
  std::string command;
  for (const auto& [name, fn] : detail::commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--in", opt.in, "problem file (JSON)");
    sub->add_option("--out", opt.out, "output file (default: standard output)");
    sub->add_option("--p", opt.p, "prime");
    sub->add_option("--m", opt.m, "absolute precision");
    sub->add_option("--N", opt.N, "period (N_max for classify and jordan)");
    sub->add_option("--depth", opt.depth, "measure depth");
    sub->add_option("--M", opt.M, "truncation length for kochubei and euler");
    sub->add_option("--residue", opt.residue, "residue in [0, p) for lift");
    sub->add_option("--value", opt.value, "scalar for digits and classify: integer or a/b");
    sub->add_option("--seed", opt.seed, "seed for sampled checks");
    sub->add_option("--samples", opt.samples, "number of sampled vectors");
    sub->callback([&command, n = name] { command = n; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kMalformed;
  }

  json result;
  int code = kSuccess;
  try {
    json doc = json::object();
    if (!opt.in.empty()) {
      std::ifstream f(opt.in);
      if (!f) throw io::InputError("--in", "cannot open " + opt.in);
      try {
        doc = json::parse(f);
      } catch (const json::parse_error& e) {
        throw io::InputError("--in", std::string("invalid JSON: ") + e.what());
      }
      if (!doc.is_object()) throw io::InputError("--in", "top level must be an object");
    }
    detail::Outcome o = detail::commands().at(command)(Problem(opt, doc));
    result = std::move(o.doc);
    code = o.code;
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::domain_error& e) {
    result = json{{"command", command}, {"status", "rejected"}, {"reason", e.what()}};
    code = kRejected;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }

  const std::string text = result.dump(2) + "\n";
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    if (!f) {
      err << "error: --out: cannot open " << opt.out << "\n";
      return kMalformed;
    }
    f << text;
  } else {
    out << text;
  }
  if (code == kRejected && result.contains("reason")) err << "rejected: " << result["reason"].get<std::string>() << "\n";
  return code;
}

}  // namespace padic::cli
