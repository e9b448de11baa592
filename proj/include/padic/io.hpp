#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "padic/matrix.hpp"
#include "padic/spectral.hpp"

namespace padic::io {

using json = nlohmann::json;

/// Malformed input; `field` names the offending JSON field or flag.
class InputError : public std::invalid_argument {
 public:
  InputError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline constexpr std::size_t kMaxDimension = 64;

// ---------------------------------------------------------------------------
// Scalars: {"v": valuation, "u": "unit residue"}; zero is {"v": null, "u": "0"}.

inline json norm_to_json(const Norm& n) {
  json j;
  j["v"] = n.is_zero() ? json(nullptr) : json(n.valuation());
  j["text"] = n.to_string();
  return j;
}

inline json scalar_to_json(const PadicScalar& x) {
  if (x.is_zero()) return json{{"v", nullptr}, {"u", "0"}};
  return json{{"v", x.valuation()}, {"u", std::to_string(x.unit())}};
}

// p^k * r for a residue r mod p^m.
inline json scaled_residue_to_json(const Zp& ring, std::int64_t k, std::uint64_t r) {
  if (r == 0) return json{{"v", nullptr}, {"u", "0"}};
  const int v = ring.valuation(r);
  return json{{"v", k + v}, {"u", std::to_string(ring.div_p_power(r, v))}};
}

inline std::uint64_t parse_decimal(const std::string& field, const std::string& s) {
  if (s.empty()) throw InputError(field, "empty number");
  std::uint64_t acc = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw InputError(field, "expected a decimal string, got \"" + s + "\"");
    const std::uint64_t d = static_cast<std::uint64_t>(c - '0');
    if (acc > (UINT64_MAX - d) / 10) throw InputError(field, "number out of range");
    acc = acc * 10 + d;
  }
  return acc;
}

inline std::int64_t parse_signed(const std::string& field, const std::string& s) {
  const bool neg = !s.empty() && s[0] == '-';
  const std::uint64_t mag = parse_decimal(field, neg ? s.substr(1) : s);
  if (mag > static_cast<std::uint64_t>(INT64_MAX)) throw InputError(field, "number out of range");
  return neg ? -static_cast<std::int64_t>(mag) : static_cast<std::int64_t>(mag);
}

/// Accepts {"v", "u"} objects, JSON integers, and strings "a" or "a/b".
inline PadicScalar scalar_from_json(const json& j, const PrecisionContext& ctx, const std::string& field) {
  if (j.is_object()) {
    if (!j.contains("u")) throw InputError(field, "scalar object needs \"u\"");
    const json& u = j.at("u");
    std::uint64_t unit = 0;
    if (u.is_string()) {
      unit = parse_decimal(field + ".u", u.get<std::string>());
    } else if (u.is_number_unsigned()) {
      unit = u.get<std::uint64_t>();
    } else {
      throw InputError(field + ".u", "expected a decimal string");
    }
    if (unit == 0) return PadicScalar(ctx);
    if (!j.contains("v") || !j.at("v").is_number_integer()) throw InputError(field + ".v", "expected an integer");
    const std::int64_t v = j.at("v").get<std::int64_t>();
    if (v < -64 || v > 64) throw InputError(field + ".v", "valuation out of range");
    return PadicScalar::from_parts(ctx, v, unit);
  }
  if (j.is_number_integer()) return PadicScalar::from_integer(ctx, j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return PadicScalar::from_integer(ctx, parse_signed(field, s));
    const std::int64_t den = parse_signed(field, s.substr(slash + 1));
    if (den == 0) throw InputError(field, "zero denominator");
    return scalar_from_rational(parse_signed(field, s.substr(0, slash)), den, ctx);
  }
  throw InputError(field, "expected a scalar");
}

// ---------------------------------------------------------------------------
// Matrices: arrays of rows (a flat row-major array of n^2 entries is also read).

inline std::vector<json> matrix_cells(const json& j, const std::string& field, std::size_t& n) {
  if (!j.is_array() || j.empty()) throw InputError(field, "expected a non-empty array");
  std::vector<json> cells;
  if (j.front().is_array()) {
    n = j.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!j[i].is_array() || j[i].size() != n) throw InputError(field, "matrix must be square");
      for (const auto& c : j[i]) cells.push_back(c);
    }
  } else {
    std::size_t r = 0;
    while (r * r < j.size()) ++r;
    if (r * r != j.size()) throw InputError(field, "flat entry count is not a square");
    n = r;
    for (const auto& c : j) cells.push_back(c);
  }
  if (n > kMaxDimension) throw InputError(field, "dimension exceeds 64");
  return cells;
}

/// p^k * body with k = min(0, min entry valuation).
inline ScaledMatrix<Zp> matrix_from_json(const json& j, const PrecisionContext& ctx, const std::string& field) {
  std::size_t n = 0;
  const auto cells = matrix_cells(j, field, n);
  std::vector<PadicScalar> entries;
  std::int64_t k = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    entries.push_back(scalar_from_json(cells[i], ctx, field + "[" + std::to_string(i) + "]"));
    if (!entries.back().is_zero()) k = std::min(k, entries.back().valuation());
  }
  const Zp ring(ctx);
  ScaledMatrix<Zp> out{k, ZpMatrix(ring, n)};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const PadicScalar& e = entries[i];
    if (e.is_zero()) continue;
    out.body(i / n, i % n) = ring.mul_p_power(e.unit() % ctx.modulus(), static_cast<int>(e.valuation() - k));
  }
  return out;
}

/// Integral matrices only; a negative valuation is a field error.
inline ZpMatrix integral_matrix_from_json(const json& j, const PrecisionContext& ctx, const std::string& field) {
  ScaledMatrix<Zp> s = matrix_from_json(j, ctx, field);
  if (s.lead_valuation < 0) throw InputError(field, "entries must be integral");
  return s.body;
}

inline json matrix_to_json(const ScaledMatrix<Zp>& a) {
  const Zp& R = a.body.ring();
  json rows = json::array();
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.body.size(); ++j) row.push_back(scaled_residue_to_json(R, a.lead_valuation, a.body(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json matrix_to_json(const ZpMatrix& a) { return matrix_to_json(ScaledMatrix<Zp>{0, a}); }

// O_K scalars: arrays of Z_p coordinates, constant first.
inline json ext_scalar_to_json(const ExtRing& ring, const ExtScalar& x, std::int64_t k = 0) {
  json a = json::array();
  for (auto c : x.coords) a.push_back(scaled_residue_to_json(ring.base(), k, c));
  return a;
}

inline json ext_matrix_to_json(const ExtMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.size(); ++j) row.push_back(ext_scalar_to_json(a.ring(), a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// O_K matrices whose entries lie in Z_p are written as plain matrices.
inline json projector_to_json(const ExtMatrix& a) {
  if (auto base = to_base(a)) return matrix_to_json(*base);
  return ext_matrix_to_json(a);
}

inline json not_hermite_to_json(const NotHermite& nh) {
  return json{{"status", "NotHermite"}, {"stage", nh.stage}, {"defect", norm_to_json(nh.defect)}, {"reason", nh.reason}};
}

}  // namespace padic::io
