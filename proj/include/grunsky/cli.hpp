#ifndef GRUNSKY_CLI_HPP
#define GRUNSKY_CLI_HPP

// Command dispatch for the grunsky command-line tool: a JSON run
// configuration, flag overrides, one report per run and coded exit statuses.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "grunsky/beltrami.hpp"
#include "grunsky/errors.hpp"
#include "grunsky/fredholm.hpp"
#include "grunsky/grunsky_operator.hpp"
#include "grunsky/homotopy.hpp"
#include "grunsky/io.hpp"
#include "grunsky/quasidomain.hpp"
#include "grunsky/series.hpp"

namespace grunsky::cli {

using io::json;

enum exit_code : int {
  exit_ok = 0,
  exit_io = 1,
  exit_validation = 2,
  exit_numerical = 3,
  exit_invariant = 4,
};

enum class command { coeffs, norm, alpha, bound_check, variational, moser, domain_basis, generalized, fredholm, homotopy };

inline const std::map<std::string, command>& command_names() {
  static const std::map<std::string, command> names = {
      {"coeffs", command::coeffs},           {"norm", command::norm},
      {"alpha", command::alpha},             {"bound-check", command::bound_check},
      {"variational", command::variational}, {"moser", command::moser},
      {"domain-basis", command::domain_basis}, {"generalized", command::generalized},
      {"fredholm", command::fredholm},       {"homotopy", command::homotopy},
  };
  return names;
}

inline std::string to_string(command c) {
  for (const auto& [name, value] : command_names())
    if (value == c) return name;
  return "?";
}

struct Tolerances {
  double norm = default_norm_tolerance;  // successive kappa_N stopping rule
  double quadrature = 1e-10;             // absolute, on (1/pi)-scaled moments
  double eps = 1e-9;                     // bound-check truncation allowance
  double homogeneity = 1e-10;
  double profile = 1e-9;                 // ratio = 1 detection
};

struct OutputSpec {
  std::optional<std::string> path;
  std::string format = "json";
};

/// Flag overrides applied on top of the configuration file.
struct Overrides {
  std::optional<std::size_t> order;
  std::optional<double> tol;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

inline constexpr std::size_t default_order = 16;
inline constexpr const char* tolerance_env = "GRUNSKY_TOL";

struct RunConfig {
  command cmd = command::norm;
  std::optional<io::ParsedFunction> function;
  std::optional<BeltramiSpec> beltrami;
  std::optional<DomainSpec> domain;
  std::size_t order = default_order;
  Tolerances tol;
  OutputSpec output;
  json params = json::object();
};

namespace detail {

struct CommandShape {
  std::vector<const char*> required;
  std::vector<const char*> optional;
  std::vector<const char*> params;
};

inline const CommandShape& shape(command c) {
  static const std::map<command, CommandShape> shapes = {
      {command::coeffs, {{"function"}, {}, {"oracle"}}},
      {command::norm, {{"function"}, {}, {"orders", "maximizer"}}},
      {command::alpha, {{"beltrami"}, {"domain"}, {"route"}}},
      {command::bound_check, {{"function", "beltrami"}, {}, {}}},
      {command::variational, {{"beltrami"}, {}, {}}},
      {command::moser, {{}, {}, {"psi", "k", "c"}}},
      {command::domain_basis, {{"domain"}, {}, {"basis"}}},
      {command::generalized, {{"function", "domain"}, {}, {}}},
      {command::fredholm, {{"function"}, {}, {"qL"}}},
      {command::homotopy, {{"function"}, {}, {"t", "grid", "k_model"}}},
  };
  return shapes.at(c);
}

inline bool contains(const std::vector<const char*>& v, const std::string& s) {
  return std::any_of(v.begin(), v.end(), [&](const char* x) { return s == x; });
}

inline double env_tolerance(double fallback) {
  const char* raw = std::getenv(tolerance_env);
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !std::isfinite(v) || v <= 0.0)
    throw validation_error(std::string(tolerance_env) + ": expected a positive number, got \"" + raw + "\"");
  return v;
}

} // namespace detail

/// Validates the whole configuration (all command-specific fields) before any computation.
inline RunConfig parse_config(const json& j, const Overrides& ov = {}) {
  io::expect_keys(j, {"command", "function", "beltrami", "domain", "order", "tolerances", "output", "params"}, "config");
  const json& cmd = io::require_key(j, "command", "config");
  if (!cmd.is_string() || !command_names().count(cmd.get<std::string>()))
    throw validation_error("config.command: unknown command " + cmd.dump());
  RunConfig rc;
  rc.cmd = command_names().at(cmd.get<std::string>());
  const detail::CommandShape& sh = detail::shape(rc.cmd);
  for (const char* key : {"function", "beltrami", "domain"}) {
    const bool present = j.contains(key);
    if (present && !detail::contains(sh.required, key) && !detail::contains(sh.optional, key))
      throw validation_error("config." + std::string(key) + ": not used by command " + to_string(rc.cmd));
    if (!present && detail::contains(sh.required, key))
      throw validation_error("config: command " + to_string(rc.cmd) + " requires \"" + key + "\"");
  }
  if (j.contains("function")) rc.function = io::parse_laurent(j.at("function"));
  if (j.contains("domain")) rc.domain = io::parse_domain(j.at("domain"));
  if (j.contains("beltrami")) rc.beltrami = io::parse_beltrami(j.at("beltrami"));
  if (j.contains("order")) rc.order = io::parse_count(j.at("order"), "config.order");
  if (ov.order) rc.order = *ov.order;
  if (rc.order < 1) throw validation_error("config.order: must be at least 1");

  rc.tol.norm = detail::env_tolerance(rc.tol.norm);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    io::expect_keys(t, {"norm", "quadrature", "eps", "homogeneity", "profile"}, "config.tolerances");
    auto get = [&](const char* key, double& slot) {
      if (!t.contains(key)) return;
      slot = io::parse_real(t.at(key), std::string("config.tolerances.") + key);
      if (slot < 0.0) throw validation_error(std::string("config.tolerances.") + key + ": must be nonnegative");
    };
    get("norm", rc.tol.norm);
    get("quadrature", rc.tol.quadrature);
    get("eps", rc.tol.eps);
    get("homogeneity", rc.tol.homogeneity);
    get("profile", rc.tol.profile);
  }
  if (ov.tol) {
    if (!(*ov.tol > 0.0)) throw validation_error("--tol: must be positive");
    rc.tol.norm = *ov.tol;
  }
  if (rc.tol.quadrature <= 0.0) throw validation_error("config.tolerances.quadrature: must be positive");

  if (j.contains("output")) {
    const json& o = j.at("output");
    io::expect_keys(o, {"path", "format"}, "config.output");
    if (o.contains("path")) {
      if (!o.at("path").is_string()) throw validation_error("config.output.path: expected a string");
      rc.output.path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) throw validation_error("config.output.format: expected a string");
      rc.output.format = o.at("format").get<std::string>();
    }
  }
  if (ov.out) rc.output.path = *ov.out;
  if (ov.format) rc.output.format = *ov.format;
  if (rc.output.format != "json" && rc.output.format != "csv")
    throw validation_error("output format must be \"json\" or \"csv\", got \"" + rc.output.format + "\"");

  if (j.contains("params")) {
    const json& p = j.at("params");
    if (!p.is_object()) throw validation_error("config.params: expected a JSON object");
    for (const auto& [key, value] : p.items())
      if (!detail::contains(sh.params, key))
        throw validation_error("config.params: unknown field \"" + key + "\" for command " + to_string(rc.cmd));
    rc.params = p;
  }

  // Command-specific parameter checks, still before computation.
  const json& p = rc.params;
  switch (rc.cmd) {
    case command::coeffs:
      if (p.contains("oracle") && !p.at("oracle").is_boolean()) throw validation_error("params.oracle: expected a boolean");
      break;
    case command::norm:
      if (p.contains("maximizer") && !p.at("maximizer").is_boolean())
        throw validation_error("params.maximizer: expected a boolean");
      if (p.contains("orders")) {
        if (!p.at("orders").is_array() || p.at("orders").empty()) throw validation_error("params.orders: expected a nonempty array");
        for (const auto& x : p.at("orders")) io::parse_count(x, "params.orders");
      }
      break;
    case command::alpha:
      if (p.contains("route")) {
        const json& r = p.at("route");
        if (!r.is_string() || (r.get<std::string>() != "direct" && r.get<std::string>() != "pullback"))
          throw validation_error("params.route: expected \"direct\" or \"pullback\"");
      }
      break;
    case command::moser:
      for (const char* key : {"psi", "k", "c"})
        if (!p.contains(key)) throw validation_error(std::string("params: command moser requires \"") + key + "\"");
      io::parse_rational(p.at("psi"), "params.psi");
      io::parse_real(p.at("k"), "params.k");
      if (p.at("c").is_array() && !p.at("c").empty() && p.at("c")[0].is_array()) io::parse_complex_list(p.at("c"), "params.c");
      else io::parse_complex(p.at("c"), "params.c");
      break;
    case command::domain_basis:
      if (p.contains("basis")) {
        const json& b = p.at("basis");
        if (!b.is_string() || (b.get<std::string>() != "milin" && b.get<std::string>() != "chebyshev"))
          throw validation_error("params.basis: expected \"milin\" or \"chebyshev\"");
        if (b.get<std::string>() == "chebyshev" && !std::holds_alternative<EllipseInterior>(rc.domain->variant()))
          throw validation_error("params.basis: the Chebyshev basis requires an ellipse domain");
      }
      break;
    case command::fredholm:
      if (p.contains("qL")) io::parse_real(p.at("qL"), "params.qL");
      break;
    case command::homotopy:
      if (p.contains("t") == p.contains("grid")) throw validation_error("params: homotopy needs exactly one of \"t\" or \"grid\"");
      if (p.contains("t")) io::parse_complex(p.at("t"), "params.t");
      if (p.contains("grid")) {
        if (!p.at("grid").is_array() || p.at("grid").empty()) throw validation_error("params.grid: expected a nonempty array");
        for (const auto& x : p.at("grid")) io::parse_real(x, "params.grid");
      }
      if (p.contains("k_model")) {
        if (!p.contains("grid")) throw validation_error("params.k_model: only used with \"grid\"");
        io::expect_keys(p.at("k_model"), {"scale", "exponent"}, "params.k_model");
        io::parse_real(io::require_key(p.at("k_model"), "scale", "params.k_model"), "params.k_model.scale");
        io::parse_real(io::require_key(p.at("k_model"), "exponent", "params.k_model"), "params.k_model.exponent");
      }
      break;
    default: break;
  }
  return rc;
}

/// A finished report: JSON document and CSV rendering, plus an optional
/// invariant failure message (exit status 4 after the report is written).
struct Report {
  json doc;
  std::string csv;
  std::optional<std::string> violation;
};

namespace detail {

inline LaurentFunction function_at(const RunConfig& rc, std::size_t n) {
  const auto& pf = *rc.function;
  return pf.exact ? pf.f.with_order(std::max(n, pf.f.order())) : pf.f;
}

inline json header(const RunConfig& rc) {
  json j;
  j["command"] = to_string(rc.cmd);
  j["order"] = rc.order;
  return j;
}

inline std::string kernel_csv(const KernelMatrix& k) {
  io::CsvWriter w({"m", "n", "re", "im"});
  for (std::size_t m = 1; m <= k.order(); ++m)
    for (std::size_t n = 1; n <= k.order(); ++n) w.row({m, n, k(m, n).real(), k(m, n).imag()});
  return w.str();
}

inline std::string fields_csv(const json& j) {
  io::CsvWriter w({"field", "value"});
  for (const auto& [key, value] : j.items()) {
    if (value.is_number_float()) w.row({key, value.get<double>()});
    else if (value.is_null()) w.row({key, "null"});
    else if (value.is_string()) w.row({key, value.get<std::string>()});
    else w.row({key, value.dump()});
  }
  return w.str();
}

inline std::string history_csv(const NormEstimate& e) {
  io::CsvWriter w({"order", "value"});
  for (const auto& [n, v] : e.history) w.row({n, v});
  return w.str();
}

inline Report run_coeffs(const RunConfig& rc) {
  const LaurentFunction f = function_at(rc, rc.order);
  const KernelMatrix k = series_log_ratio(f, rc.order);
  Report r;
  r.doc = header(rc);
  r.doc["kind"] = "classical";
  r.doc["entries"] = io::to_json(k.entries());
  if (rc.params.value("oracle", false)) {
    const KernelMatrix o = kernel_oracle_sampling(f, rc.order);
    r.doc["oracle_discrepancy"] = (k.entries() - o.entries()).cwiseAbs().maxCoeff();
  }
  r.csv = kernel_csv(k);
  return r;
}

inline Report run_norm(const RunConfig& rc) {
  std::vector<std::size_t> orders;
  if (rc.params.contains("orders"))
    for (const auto& x : rc.params.at("orders")) orders.push_back(x.get<std::size_t>());
  else
    for (std::size_t k = 1; k <= rc.order; ++k) orders.push_back(k);
  const std::size_t top = *std::max_element(orders.begin(), orders.end());
  const NormEstimate e = norm_convergence(function_at(rc, top), orders, rc.tol.norm);
  Report r;
  r.doc = header(rc);
  r.doc["estimate"] = io::to_json(e);
  if (rc.params.value("maximizer", false)) {
    const Eigen::VectorXcd x = form_maximizer(build_form(series_log_ratio(function_at(rc, top), top)));
    json v = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) v.push_back(io::to_json(complex(x(i))));
    r.doc["maximizer"] = std::move(v);
  }
  r.csv = history_csv(e);
  return r;
}

inline Report run_alpha(const RunConfig& rc) {
  const BeltramiSpec& mu = *rc.beltrami;
  const DomainSpec d = rc.domain ? *rc.domain : mu.support();
  QuadratureOptions q;
  q.tolerance = rc.tol.quadrature;
  const std::string route = rc.params.value("route", std::string("direct"));
  Report r;
  r.doc = header(rc);
  r.doc["domain"] = io::to_json(d);
  r.doc["k"] = mu.sup_norm();
  r.doc["route"] = route;
  if (d.is_unit_disk() && route == "direct") {
    const MomentVector c = disk_moments(mu.with_support(d), 2 * rc.order - 2, q);
    NormEstimate e = alpha_functional(mu.with_support(d), rc.order, q);
    e.tolerance = rc.tol.norm;
    grunsky::detail::mark_convergence(e);
    r.doc["alpha"] = io::to_json(e);
    json m = json::array();
    io::CsvWriter w({"p", "re", "im"});
    for (int p = c.first; p <= c.last(); ++p) {
      m.push_back(json::array({p, c[p].real(), c[p].imag()}));
      w.row({p, c[p].real(), c[p].imag()});
    }
    r.doc["moments"] = std::move(m);
    r.csv = w.str();
  } else {
    NormEstimate e = alpha_functional_domain(mu, d, rc.order, route == "pullback" ? alpha_route::pullback : alpha_route::direct, q);
    e.tolerance = rc.tol.norm;
    grunsky::detail::mark_convergence(e);
    r.doc["alpha"] = io::to_json(e);
    r.csv = history_csv(e);
  }
  return r;
}

inline Report run_bound_check(const RunConfig& rc) {
  QuadratureOptions q;
  q.tolerance = rc.tol.quadrature;
  const BoundReport b = bound_check(function_at(rc, rc.order), *rc.beltrami, rc.order, rc.tol.eps, q);
  Report r;
  r.doc = header(rc);
  r.doc["kappa"] = b.kappa;
  r.doc["k"] = b.k;
  r.doc["alpha"] = b.alpha;
  r.doc["lower"] = b.lower;
  r.doc["upper"] = b.upper;
  r.doc["eps"] = b.eps;
  r.doc["lower_applicable"] = b.lower_applicable;
  r.doc["lower_ok"] = b.lower_ok;
  r.doc["upper_ok"] = b.upper_ok;
  r.doc["ok"] = b.ok();
  r.csv = fields_csv(r.doc);
  if (!b.upper_ok)
    r.violation = "bound-check: kappa_N = " + io::format_double(b.kappa) + " exceeds the strengthened bound " +
                  io::format_double(b.upper) + " by more than eps = " + io::format_double(b.eps);
  else if (!b.lower_ok)
    r.violation = "bound-check: kappa_N = " + io::format_double(b.kappa) + " is below the lower bound alpha k = " +
                  io::format_double(b.lower) + " by more than eps = " + io::format_double(b.eps);
  return r;
}

inline Report run_variational(const RunConfig& rc) {
  QuadratureOptions q;
  q.tolerance = rc.tol.quadrature;
  const LaurentFunction f = variational_map(*rc.beltrami, rc.order, q);
  Report r;
  r.doc = header(rc);
  r.doc["function"] = io::to_json(f);
  io::CsvWriter w({"n", "re", "im"});
  for (std::size_t n = 0; n <= f.order(); ++n) w.row({n, f.b(n).real(), f.b(n).imag()});
  r.csv = w.str();
  return r;
}

inline Report run_moser(const RunConfig& rc) {
  QuadratureOptions q;
  q.tolerance = rc.tol.quadrature;
  const RationalFunction psi = io::parse_rational(rc.params.at("psi"), "params.psi");
  const double k = io::parse_real(rc.params.at("k"), "params.k");
  std::vector<complex> cs;
  const json& cj = rc.params.at("c");
  if (cj.is_array() && !cj.empty() && cj[0].is_array()) cs = io::parse_complex_list(cj, "params.c");
  else cs.push_back(io::parse_complex(cj, "params.c"));
  const double alpha_limit = alpha_functional(BeltramiSpec::teichmuller(k, psi), rc.order, q).value;
  Report r;
  r.doc = header(rc);
  r.doc["k"] = k;
  r.doc["alpha_limit"] = alpha_limit;
  json list = json::array();
  io::CsvWriter w({"c_re", "c_im", "alpha", "bound", "strict"});
  bool all_strict = true;
  for (const complex& c : cs) {
    const MoserReport m = moser_approximant(psi, k, c, rc.order, q).second;
    json e;
    e["c"] = io::to_json(c);
    e["alpha"] = m.alpha;
    e["bound"] = m.bound;
    e["strict"] = m.strict;
    list.push_back(std::move(e));
    w.row({c.real(), c.imag(), m.alpha, m.bound, m.strict});
    all_strict = all_strict && m.strict;
  }
  r.doc["approximants"] = std::move(list);
  r.doc["all_strict"] = all_strict;
  r.csv = w.str();
  if (!all_strict) r.violation = "moser: an approximant's strengthened bound is not below k";
  return r;
}

inline Report run_domain_basis(const RunConfig& rc) {
  const DomainSpec& d = *rc.domain;
  const std::string kind = rc.params.value("basis", std::string("milin"));
  Report r;
  r.doc = header(rc);
  r.doc["domain"] = io::to_json(d);
  r.doc["basis"] = kind;
  MilinBasis b;
  if (kind == "chebyshev") {
    const auto& e = std::get<EllipseInterior>(d.variant());
    EllipseBasis eb = ellipse_basis(e.a, e.b, rc.order);
    b = eb.basis;
    r.doc["forced"] = eb.forced;
    r.doc["nominal"] = eb.nominal;
    r.doc["ratio"] = eb.ratio;
  } else {
    b = milin_polynomials(d, rc.order);
    r.doc["contour_radius"] = b.contour_radius;
    r.doc["fit_residual"] = b.fit_residual;
    r.doc["raw_gram_error"] = b.raw_orthonormality_error();
  }
  r.doc["gram_error"] = b.orthonormality_error();
  json polys = json::array();
  io::CsvWriter w({"n", "j", "re", "im"});
  for (std::size_t n = 1; n <= b.order; ++n) {
    polys.push_back(io::to_json(std::span<const complex>(b.polys[n - 1])));
    for (std::size_t j = 0; j < b.polys[n - 1].size(); ++j) w.row({n, j, b.polys[n - 1][j].real(), b.polys[n - 1][j].imag()});
  }
  r.doc["polys"] = std::move(polys);
  r.csv = w.str();
  if (b.orthonormality_error() > 1e-7)
    r.violation = "domain-basis: Gram matrix deviates from pi * identity by " + io::format_double(b.orthonormality_error());
  return r;
}

inline Report run_generalized(const RunConfig& rc) {
  const KernelMatrix k = generalized_coefficients(function_at(rc, rc.order), *rc.domain, rc.order);
  Report r;
  r.doc = header(rc);
  r.doc["domain"] = io::to_json(*rc.domain);
  r.doc["kind"] = "generalized";
  r.doc["entries"] = io::to_json(k.entries());
  r.doc["norm"] = form_norm(build_form(k), rc.tol.norm).value;
  r.csv = kernel_csv(k);
  return r;
}

inline Report run_fredholm(const RunConfig& rc) {
  std::optional<double> q_l;
  if (rc.params.contains("qL")) q_l = rc.params.at("qL").get<double>();
  const FredholmReport f = fredholm_eigenvalue(function_at(rc, rc.order), rc.order, q_l);
  Report r;
  r.doc = header(rc);
  r.doc["kappa"] = f.kappa;
  r.doc["rho"] = f.rho ? json(*f.rho) : json(nullptr);
  r.doc["firstorder"] = f.firstorder;
  r.doc["bnorm"] = f.bnorm;
  r.doc["qL"] = f.q_l ? json(*f.q_l) : json(nullptr);
  r.doc["ahlfors_ok"] = f.ahlfors_ok;
  r.doc["reciprocity_ok"] = f.reciprocity_ok;
  r.csv = fields_csv(r.doc);
  if (!f.ahlfors_ok) r.violation = "fredholm: 1/rho exceeds the supplied qL";
  else if (!f.reciprocity_ok) r.violation = "fredholm: rho * kappa differs from 1";
  return r;
}

inline Report run_homotopy(const RunConfig& rc) {
  const LaurentFunction f = function_at(rc, rc.order);
  Report r;
  r.doc = header(rc);
  if (rc.params.contains("t")) {
    const complex t = io::parse_complex(rc.params.at("t"), "params.t");
    const HomogeneityReport h = homogeneity_check(f, t, rc.order, rc.tol.homogeneity);
    r.doc["t"] = io::to_json(t);
    r.doc["function"] = io::to_json(homotopy_map(f, t));
    r.doc["max_residual"] = h.max_residual;
    r.doc["tolerance"] = h.tolerance;
    r.doc["ok"] = h.ok;
    io::CsvWriter w({"field", "value"});
    w.row({"max_residual", h.max_residual}).row({"tolerance", h.tolerance}).row({"ok", h.ok});
    r.csv = w.str();
    if (!h.ok) r.violation = "homotopy: homogeneity residual " + io::format_double(h.max_residual) + " above tolerance";
    return r;
  }
  std::vector<double> grid;
  for (const auto& x : rc.params.at("grid")) grid.push_back(x.get<double>());
  std::function<double(double)> model;
  if (rc.params.contains("k_model")) {
    const double scale = rc.params.at("k_model").at("scale").get<double>();
    const double exponent = rc.params.at("k_model").at("exponent").get<double>();
    model = [scale, exponent](double t) { return scale * std::pow(t, exponent); };
  }
  const HomotopyProfile p = norm_profile(f, grid, rc.order, model, rc.tol.profile);
  r.doc["grid"] = p.t_grid;
  r.doc["kappa"] = p.kappa;
  r.doc["k_known"] = p.k_known ? json(*p.k_known) : json(nullptr);
  r.doc["ratio"] = p.ratio ? json(*p.ratio) : json(nullptr);
  r.doc["monotone"] = p.monotone;
  r.doc["level_property_ok"] = p.level_property_ok;
  r.doc["reconstruction_residual"] = p.reconstruction_residual;
  io::CsvWriter w({"r", "kappa", "k_known", "ratio"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (p.k_known) w.row({grid[i], p.kappa[i], (*p.k_known)[i], (*p.ratio)[i]});
    else w.row({grid[i], p.kappa[i], "", ""});
  }
  r.csv = w.str();
  if (!p.monotone) r.violation = "homotopy: kappa profile is not nondecreasing";
  else if (!p.level_property_ok) r.violation = "homotopy: ratio reaches 1 at a radius but not below it";
  return r;
}

} // namespace detail

inline Report execute(const RunConfig& rc) {
  switch (rc.cmd) {
    case command::coeffs: return detail::run_coeffs(rc);
    case command::norm: return detail::run_norm(rc);
    case command::alpha: return detail::run_alpha(rc);
    case command::bound_check: return detail::run_bound_check(rc);
    case command::variational: return detail::run_variational(rc);
    case command::moser: return detail::run_moser(rc);
    case command::domain_basis: return detail::run_domain_basis(rc);
    case command::generalized: return detail::run_generalized(rc);
    case command::fredholm: return detail::run_fredholm(rc);
    case command::homotopy: return detail::run_homotopy(rc);
  }
  throw validation_error("unknown command");
}

inline std::string render(const RunConfig& rc, const Report& r) {
  return rc.output.format == "csv" ? r.csv : io::dump(r.doc);
}

/// Parses, validates, runs and emits; returns the exit status.  Diagnostics go
/// to `err` verbatim; the report goes to the configured path or to `out`.
inline int run(const std::string& config_text, const Overrides& ov, std::ostream& out, std::ostream& err) {
  json j;
  try {
    j = json::parse(config_text);
  } catch (const json::parse_error& e) {
    err << "error: configuration is not valid JSON: " << e.what() << '\n';
    return exit_io;
  }
  RunConfig rc;
  Report report;
  try {
    rc = parse_config(j, ov);
    report = execute(rc);
  } catch (const validation_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const numerical_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
  const std::string text = render(rc, report);
  if (rc.output.path) {
    std::ofstream f(*rc.output.path, std::ios::binary);
    if (!f) {
      err << "error: cannot open output file " << *rc.output.path << '\n';
      return exit_io;
    }
    f << text;
    if (!f) {
      err << "error: failed writing " << *rc.output.path << '\n';
      return exit_io;
    }
  } else {
    out << text;
  }
  if (report.violation) {
    err << "invariant violation: " << *report.violation << '\n';
    return exit_invariant;
  }
  return exit_ok;
}

inline int main_entry(int argc, char** argv) {
  CLI::App app{"Grunsky operators, norms and extremal functionals"};
  std::string config_path;
  std::size_t order = 0;
  double tol = 0.0;
  std::string out_path, format;
  app.add_option("config", config_path, "JSON run configuration")->required();
  auto* o_order = app.add_option("--order", order, "truncation order N (overrides the config)");
  auto* o_tol = app.add_option("--tol", tol, "norm stopping tolerance (overrides config and " + std::string(tolerance_env) + ")");
  auto* o_out = app.add_option("--out", out_path, "output path (default: standard output)");
  auto* o_fmt = app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_validation;
  }
  Overrides ov;
  if (*o_order) ov.order = order;
  if (*o_tol) ov.tol = tol;
  if (*o_out) ov.out = out_path;
  if (*o_fmt) ov.format = format;
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read configuration " << config_path << '\n';
    return exit_io;
  }
  std::ostringstream text;
  text << in.rdbuf();
  return run(text.str(), ov, std::cout, std::cerr);
}

} // namespace grunsky::cli

#endif // GRUNSKY_CLI_HPP
