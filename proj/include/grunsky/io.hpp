#ifndef GRUNSKY_IO_HPP
#define GRUNSKY_IO_HPP

// JSON ingestion of the library's descriptors and deterministic report
// emission: JSON with 17 significant digits, CSV in full-precision scientific
// notation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "grunsky/beltrami.hpp"
#include "grunsky/domain.hpp"
#include "grunsky/errors.hpp"
#include "grunsky/grunsky_operator.hpp"
#include "grunsky/series.hpp"

namespace grunsky::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- parsing

/// Rejects keys outside `allowed`; `where` names the object in messages.
inline void expect_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw validation_error(where + ": expected a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) throw validation_error(where + ": unknown field \"" + key + "\"");
}

inline const json& require_key(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw validation_error(where + ": missing required field \"" + std::string(key) + "\"");
  return j.at(key);
}

inline double parse_real(const json& j, const std::string& where) {
  if (!j.is_number()) throw validation_error(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw validation_error(where + ": non-finite number");
  return v;
}

inline std::size_t parse_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw validation_error(where + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

/// [re, im] or a bare real number.
inline complex parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {parse_real(j, where), 0.0};
  if (j.is_array() && j.size() == 2) return {parse_real(j[0], where + "[0]"), parse_real(j[1], where + "[1]")};
  throw validation_error(where + ": expected [re, im] or a number");
}

inline std::vector<complex> parse_complex_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw validation_error(where + ": expected an array of [re, im] pairs");
  std::vector<complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

struct ParsedFunction {
  LaurentFunction f;
  bool exact = true;  // no declared "order": coefficients beyond b are exactly zero
};

/// {"leading": c, "b": [[re, im], ...], "order": N?}
inline ParsedFunction parse_laurent(const json& j, const std::string& where = "function") {
  expect_keys(j, {"leading", "b", "order"}, where);
  const double leading = j.contains("leading") ? parse_real(j.at("leading"), where + ".leading") : 1.0;
  std::vector<complex> b = parse_complex_list(require_key(j, "b", where), where + ".b");
  std::optional<std::size_t> order;
  if (j.contains("order")) order = parse_count(j.at("order"), where + ".order");
  return {LaurentFunction(leading, std::move(b), order), !order.has_value()};
}

inline RationalFunction parse_rational(const json& j, const std::string& where) {
  expect_keys(j, {"num", "den"}, where);
  std::vector<complex> num = parse_complex_list(require_key(j, "num", where), where + ".num");
  std::vector<complex> den = j.contains("den") ? parse_complex_list(j.at("den"), where + ".den") : std::vector<complex>{1.0};
  return {std::move(num), std::move(den)};
}

inline DomainSpec parse_domain(const json& j, const std::string& where = "domain") {
  if (!j.is_object()) throw validation_error(where + ": expected a JSON object");
  const json& type = require_key(j, "type", where);
  if (!type.is_string()) throw validation_error(where + ".type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "disk") {
    expect_keys(j, {"type"}, where);
    return DomainSpec::unit_disk();
  }
  if (t == "ellipse") {
    expect_keys(j, {"type", "a", "b"}, where);
    return DomainSpec::ellipse(parse_real(require_key(j, "a", where), where + ".a"),
                               parse_real(require_key(j, "b", where), where + ".b"));
  }
  if (t == "cassini") {
    expect_keys(j, {"type", "c"}, where);
    return DomainSpec::cassini(parse_real(require_key(j, "c", where), where + ".c"));
  }
  if (t == "conformal") {
    expect_keys(j, {"type", "g", "chi_inv"}, where);
    TaylorSeries g(parse_complex_list(require_key(j, "g", where), where + ".g"), expansion_point::zero);
    return DomainSpec::conformal_image(std::move(g), parse_laurent(require_key(j, "chi_inv", where), where + ".chi_inv").f);
  }
  throw validation_error(where + ".type: unknown domain type \"" + t + "\"");
}

inline BeltramiSpec parse_beltrami(const json& j, const std::string& where = "beltrami") {
  if (!j.is_object()) throw validation_error(where + ": expected a JSON object");
  const json& type = require_key(j, "type", where);
  if (!type.is_string()) throw validation_error(where + ".type: expected a string");
  const std::string t = type.get<std::string>();
  const DomainSpec support = j.contains("support") ? parse_domain(j.at("support"), where + ".support") : DomainSpec{};
  if (t == "constant") {
    expect_keys(j, {"type", "value", "support"}, where);
    return BeltramiSpec::constant(parse_complex(require_key(j, "value", where), where + ".value"), support);
  }
  if (t == "teichmuller") {
    expect_keys(j, {"type", "k", "psi", "support"}, where);
    return BeltramiSpec::teichmuller(parse_real(require_key(j, "k", where), where + ".k"),
                                     parse_rational(require_key(j, "psi", where), where + ".psi"), support);
  }
  if (t == "harmonic") {
    expect_keys(j, {"type", "phi"}, where);
    return BeltramiSpec::harmonic(
        TaylorSeries(parse_complex_list(require_key(j, "phi", where), where + ".phi"), expansion_point::infinity));
  }
  if (t == "grid") {
    expect_keys(j, {"type", "radii", "radial_weights", "n_theta", "values"}, where);
    GridSampleMu g;
    for (const auto& x : require_key(j, "radii", where)) g.radii.push_back(parse_real(x, where + ".radii"));
    for (const auto& x : require_key(j, "radial_weights", where))
      g.radial_weights.push_back(parse_real(x, where + ".radial_weights"));
    g.n_theta = parse_count(require_key(j, "n_theta", where), where + ".n_theta");
    g.values = parse_complex_list(require_key(j, "values", where), where + ".values");
    return BeltramiSpec::grid(std::move(g));
  }
  throw validation_error(where + ".type: unknown Beltrami type \"" + t + "\"");
}

// ---------------------------------------------------------------- building

inline json to_json(complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(std::span<const complex> v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline json to_json(const LaurentFunction& f) {
  json j;
  j["leading"] = f.leading();
  j["b"] = to_json(f.coefficients());
  j["order"] = f.order();
  return j;
}

inline json to_json(const NormEstimate& e) {
  json j;
  j["value"] = e.value;
  j["order"] = e.order;
  json h = json::array();
  for (const auto& [n, v] : e.history) h.push_back(json::array({n, v}));
  j["history"] = std::move(h);
  j["converged"] = e.converged;
  j["tolerance"] = e.tolerance;
  j["converged_at"] = e.converged_at ? json(*e.converged_at) : json(nullptr);
  return j;
}

inline json to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(complex(m(i, k))));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const DomainSpec& d) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        json j;
        if constexpr (std::is_same_v<T, UnitDisk>) {
          j["type"] = "disk";
        } else if constexpr (std::is_same_v<T, EllipseInterior>) {
          j["type"] = "ellipse";
          j["a"] = v.a;
          j["b"] = v.b;
        } else if constexpr (std::is_same_v<T, CassiniInterior>) {
          j["type"] = "cassini";
          j["c"] = v.c;
        } else {
          j["type"] = "conformal";
          j["g"] = to_json(v.g.coefficients());
          j["chi_inv"] = to_json(v.chi_inv);
        }
        return j;
      },
      d.variant());
}

// ---------------------------------------------------------------- printing

inline std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // no signed zeros in reports
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_csv_double(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

namespace detail {

inline bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

inline bool flat_array(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (!is_scalar(e) && !(e.is_array() && std::all_of(e.begin(), e.end(), [](const json& x) { return is_scalar(x); })))
      return false;
  return true;
}

inline void print(std::ostream& os, const json& j, int indent, bool compact) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::null: os << "null"; break;
    case json::value_t::boolean: os << (j.get<bool>() ? "true" : "false"); break;
    case json::value_t::number_integer: os << j.get<long long>(); break;
    case json::value_t::number_unsigned: os << j.get<unsigned long long>(); break;
    case json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) os << format_double(x);
      else os << "null";
      break;
    }
    case json::value_t::string: os << j.dump(); break;
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        break;
      }
      const bool one_line = compact || (flat_array(j) && std::all_of(j.begin(), j.end(), [](const json& e) { return is_scalar(e); }));
      if (one_line) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          print(os, j[i], indent, true);
        }
        os << ']';
        break;
      }
      const bool rows_compact = flat_array(j);
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << inner;
        print(os, j[i], indent + 1, rows_compact);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      os << pad << ']';
      break;
    }
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        break;
      }
      os << "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : j.items()) {
        os << inner << json(key).dump() << ": ";
        print(os, value, indent + 1, false);
        os << (++i < j.size() ? ",\n" : "\n");
      }
      os << pad << '}';
      break;
    }
    default: throw validation_error("report printer: unsupported JSON value");
  }
}

} // namespace detail

/// Deterministic JSON text: two-space indentation, doubles with %.17g,
/// non-finite doubles as null, key order as inserted.
inline std::string dump(const json& j) {
  std::ostringstream os;
  detail::print(os, j, 0, false);
  os << '\n';
  return os.str();
}

/// CSV writer with a fixed header; doubles in %.17e.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << '\n';
  }

  struct Cell {
    std::string text;
    Cell(double x) : text(format_csv_double(x)) {}                    // NOLINT
    Cell(std::size_t n) : text(std::to_string(n)) {}                  // NOLINT
    Cell(int n) : text(std::to_string(n)) {}                          // NOLINT
    Cell(const std::string& s) : text(s) {}                           // NOLINT
    Cell(const char* s) : text(s) {}                                  // NOLINT
    Cell(bool b) : text(b ? "true" : "false") {}                      // NOLINT
  };

  CsvWriter& row(std::initializer_list<Cell> cells) {
    require_width(cells.size());
    std::size_t i = 0;
    for (const auto& c : cells) os_ << (i++ ? "," : "") << c.text;
    os_ << '\n';
    return *this;
  }

  std::string str() const { return os_.str(); }

private:
  void require_width(std::size_t n) const {
    if (n != columns_) throw std::logic_error("CsvWriter: row width does not match the header");
  }
  std::size_t columns_;
  std::ostringstream os_;
};

} // namespace grunsky::io

#endif // GRUNSKY_IO_HPP
