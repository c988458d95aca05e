#include "dezin/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace dezin {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

double num(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
  return d;
}

double num_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? num(obj, key, where) : fallback;
}

int integer(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

int integer_or(const json& obj, const char* key, int fallback, const std::string& where) {
  return obj.contains(key) ? integer(obj, key, where) : fallback;
}

std::vector<double> num_array(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + ": expected an array");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) throw ConfigError(where + "." + key + ": expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string type_of(const json& spec, const std::string& where) {
  if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string())
    throw ConfigError(where + ": function needs a string 'type'");
  return spec.at("type").get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  if (!std::filesystem::exists(path)) throw ConfigError("table file not found: " + path.string());
  return path;
}

double poly_at(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::forward: return "forward";
    case RunMode::inverse: return "inverse";
    case RunMode::analyze: return "analyze";
    case RunMode::ml: return "ml";
    case RunMode::selftest: return "selftest";
  }
  return "unknown";
}

RunMode parse_mode(const std::string& s) {
  if (s == "forward") return RunMode::forward;
  if (s == "inverse") return RunMode::inverse;
  if (s == "analyze") return RunMode::analyze;
  if (s == "ml") return RunMode::ml;
  if (s == "selftest") return RunMode::selftest;
  throw ConfigError("unknown mode '" + s + "'");
}

void RunConfig::validate() const {
  try {
    problem.validate();
    domain.validate();
    quad.validate();
    ml.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (t0 && !(*t0 > 0.0 && *t0 < problem.beta)) throw ConfigError("problem.t0 must lie in (0, beta)");
  if (!(c0 > 0.0)) throw ConfigError("problem.c0 must be > 0");
  if (!(orth_rel_tol >= 0.0)) throw ConfigError("problem.orth_rel_tol must be >= 0");
  if (grid.x_points < 2) throw ConfigError("grid.x_points must be >= 2");
  if (grid.t_points < 2) throw ConfigError("grid.t_points must be >= 2");
  if (projection.panels < 0 || projection.points < 1) throw ConfigError("projection settings out of range");
  for (const auto& [k, v] : free_coefficients)
    if (k < 1) throw ConfigError("free_coefficients: indices are 1-based");
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  check_keys(doc, "config",
             {"mode", "problem", "domain", "functions", "free_coefficients", "grid", "quadrature",
              "projection", "ml", "output_dir"});
  RunConfig c;
  c.base_dir = base_dir;
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) throw ConfigError("mode: expected a string");
    c.mode = parse_mode(doc.at("mode").get<std::string>());
  }
  if (doc.contains("problem")) {
    const json& p = doc.at("problem");
    check_keys(p, "problem", {"rho", "alpha", "beta", "lambda", "modes", "zero_tol", "t0", "c0", "orth_rel_tol"});
    c.problem.rho = num_or(p, "rho", c.problem.rho, "problem");
    c.problem.alpha = num_or(p, "alpha", c.problem.alpha, "problem");
    c.problem.beta = num_or(p, "beta", c.problem.beta, "problem");
    c.problem.lambda = num_or(p, "lambda", c.problem.lambda, "problem");
    c.problem.mode_count = integer_or(p, "modes", c.problem.mode_count, "problem");
    c.problem.zero_tol = num_or(p, "zero_tol", c.problem.zero_tol, "problem");
    if (p.contains("t0")) c.t0 = num(p, "t0", "problem");
    c.c0 = num_or(p, "c0", c.c0, "problem");
    c.orth_rel_tol = num_or(p, "orth_rel_tol", c.orth_rel_tol, "problem");
  }
  if (doc.contains("domain")) {
    const json& d = doc.at("domain");
    check_keys(d, "domain", {"lengths"});
    const auto lengths = num_array(d, "lengths", "domain");
    try {
      c.domain = BoxDomain::make(lengths);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("domain: ") + e.what());
    }
  }
  if (doc.contains("functions")) {
    const json& f = doc.at("functions");
    check_keys(f, "functions", {"f", "g", "phi0"});
    if (f.contains("f")) c.f = f.at("f");
    if (f.contains("g")) c.g = f.at("g");
    if (f.contains("phi0")) c.phi0 = f.at("phi0");
  }
  if (doc.contains("free_coefficients")) {
    const json& fc = doc.at("free_coefficients");
    if (!fc.is_object()) throw ConfigError("free_coefficients: expected an object of index -> value");
    for (auto it = fc.begin(); it != fc.end(); ++it) {
      int k = 0;
      try {
        std::size_t used = 0;
        k = std::stoi(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("free_coefficients: key '" + it.key() + "' is not an integer");
      }
      if (!it.value().is_number()) throw ConfigError("free_coefficients: values must be numbers");
      c.free_coefficients[k] = it.value().get<double>();
    }
  }
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    check_keys(g, "grid", {"x_points", "t_points", "write_csv"});
    c.grid.x_points = integer_or(g, "x_points", c.grid.x_points, "grid");
    c.grid.t_points = integer_or(g, "t_points", c.grid.t_points, "grid");
    if (g.contains("write_csv")) {
      if (!g.at("write_csv").is_boolean()) throw ConfigError("grid.write_csv: expected a boolean");
      c.grid.write_csv = g.at("write_csv").get<bool>();
    }
  }
  if (doc.contains("quadrature")) {
    const json& q = doc.at("quadrature");
    check_keys(q, "quadrature", {"panels", "order", "grading"});
    c.quad.panels = integer_or(q, "panels", c.quad.panels, "quadrature");
    c.quad.order = integer_or(q, "order", c.quad.order, "quadrature");
    c.quad.grading = num_or(q, "grading", c.quad.grading, "quadrature");
  }
  if (doc.contains("projection")) {
    const json& q = doc.at("projection");
    check_keys(q, "projection", {"panels", "points"});
    c.projection.panels = integer_or(q, "panels", c.projection.panels, "projection");
    c.projection.points = integer_or(q, "points", c.projection.points, "projection");
  }
  if (doc.contains("ml")) {
    const json& m = doc.at("ml");
    check_keys(m, "ml", {"abs_tol", "series_cutoff", "asym_terms", "queries"});
    c.ml.abs_tol = num_or(m, "abs_tol", c.ml.abs_tol, "ml");
    c.ml.series_cutoff = num_or(m, "series_cutoff", c.ml.series_cutoff, "ml");
    c.ml.asym_terms = integer_or(m, "asym_terms", c.ml.asym_terms, "ml");
    if (m.contains("queries")) {
      if (!m.at("queries").is_array()) throw ConfigError("ml.queries: expected an array");
      for (const json& q : m.at("queries")) {
        check_keys(q, "ml.queries[]", {"rho", "mu", "z"});
        c.ml_queries.push_back(MLQuery{num(q, "rho", "ml.queries[]"), num(q, "mu", "ml.queries[]"),
                                       num(q, "z", "ml.queries[]")});
      }
    }
  }
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw ConfigError("output_dir: expected a string");
    c.output_dir = doc.at("output_dir").get<std::string>();
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(doc, path.parent_path());
}

TimeFunction make_time_function(const json& spec, const std::filesystem::path& base_dir) {
  const std::string where = "time function";
  const std::string type = type_of(spec, where);
  const double scale = num_or(spec, "scale", 1.0, where);
  try {
    if (type == "const") {
      check_keys(spec, where, {"type", "value", "scale"});
      return TimeFunction::constant(scale * num(spec, "value", where));
    }
    if (type == "poly") {
      check_keys(spec, where, {"type", "coeffs", "scale"});
      auto c = num_array(spec, "coeffs", where);
      if (c.empty()) throw ConfigError(where + ": poly needs at least one coefficient");
      for (double& v : c) v *= scale;
      return TimeFunction::polynomial(std::move(c));
    }
    if (type == "exp") {
      check_keys(spec, where, {"type", "a", "b", "scale"});
      return TimeFunction::exponential(scale * num(spec, "a", where), num(spec, "b", where));
    }
    if (type == "table") {
      check_keys(spec, where, {"type", "path", "order", "scale"});
      if (!spec.contains("path") || !spec.at("path").is_string()) throw ConfigError(where + ": table needs a 'path'");
      const auto path = resolve(base_dir, spec.at("path").get<std::string>());
      return scaled(TimeFunction::from_table_file(path.string(), integer_or(spec, "order", 1, where)), scale);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": unknown type '" + type + "'");
}

SpatialFunction make_spatial_function(const json& spec, const BoxDomain& domain,
                                      const std::filesystem::path& base_dir) {
  const std::string where = "spatial function";
  const std::string type = type_of(spec, where);
  const double scale = num_or(spec, "scale", 1.0, where);
  const int dims = domain.dims;
  if (type == "const") {
    check_keys(spec, where, {"type", "value", "scale"});
    const double v = scale * num(spec, "value", where);
    return [v](std::span<const double>) { return v; };
  }
  if (type == "poly") {
    // Same polynomial on every axis, multiplied together.
    check_keys(spec, where, {"type", "coeffs", "scale"});
    const auto c = num_array(spec, "coeffs", where);
    return [c, scale, dims](std::span<const double> x) {
      double v = scale;
      for (int i = 0; i < dims; ++i) v *= poly_at(c, x[i]);
      return v;
    };
  }
  if (type == "exp") {
    check_keys(spec, where, {"type", "a", "b", "scale"});
    const double a = scale * num(spec, "a", where), b = num(spec, "b", where);
    return [a, b, dims](std::span<const double> x) {
      double s = 0.0;
      for (int i = 0; i < dims; ++i) s += x[i];
      return a * std::exp(b * s);
    };
  }
  if (type == "table") {
    check_keys(spec, where, {"type", "path", "order", "scale"});
    if (dims != 1) throw ConfigError(where + ": tables are supported on 1-D domains only");
    if (!spec.contains("path") || !spec.at("path").is_string()) throw ConfigError(where + ": table needs a 'path'");
    const auto path = resolve(base_dir, spec.at("path").get<std::string>());
    TimeFunction tab;
    try {
      tab = scaled(TimeFunction::from_table_file(path.string(), integer_or(spec, "order", 1, where)), scale);
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (tab.support_lo() > 0.0 || tab.support_hi() < domain.lengths[0])
      throw ConfigError(where + ": table does not cover the interval");
    return [tab](std::span<const double> x) { return tab(x[0]); };
  }
  if (type == "sum") {
    check_keys(spec, where, {"type", "terms", "scale"});
    if (!spec.contains("terms") || !spec.at("terms").is_array()) throw ConfigError(where + ": sum needs 'terms'");
    std::vector<SpatialFunction> parts;
    for (const json& t : spec.at("terms")) parts.push_back(make_spatial_function(t, domain, base_dir));
    return [parts, scale](std::span<const double> x) {
      double s = 0.0;
      for (const auto& p : parts) s += p(x);
      return scale * s;
    };
  }
  if (type == "sine_mode" || type == "coefficients")
    throw ConfigError(where + ": '" + type + "' cannot be combined with pointwise terms");
  throw ConfigError(where + ": unknown type '" + type + "'");
}

SpectralField make_spatial_field(const json& spec, std::shared_ptr<const ModeSet> basis,
                                 const std::filesystem::path& base_dir, const ProjectionSpec& proj) {
  const std::string where = "spatial function";
  const std::string type = type_of(spec, where);
  const double scale = num_or(spec, "scale", 1.0, where);
  SpectralField out = SpectralField::zero(basis);
  if (type == "sine_mode") {
    check_keys(spec, where, {"type", "index", "multi_index", "scale"});
    if (spec.contains("index")) {
      const int k = integer(spec, "index", where);
      if (k < 1 || k > static_cast<int>(basis->size()))
        throw ConfigError(where + ": sine_mode index outside the retained modes");
      out.coeffs[k - 1] = scale;
      return out;
    }
    if (!spec.contains("multi_index") || !spec.at("multi_index").is_array())
      throw ConfigError(where + ": sine_mode needs 'index' or 'multi_index'");
    std::array<int, kMaxDims> n{1, 1, 1};
    const json& mi = spec.at("multi_index");
    if (static_cast<int>(mi.size()) != basis->domain.dims) throw ConfigError(where + ": multi_index has the wrong length");
    for (std::size_t i = 0; i < mi.size(); ++i) {
      if (!mi[i].is_number_integer()) throw ConfigError(where + ": multi_index entries must be integers");
      n[i] = mi[i].get<int>();
    }
    for (std::size_t k = 0; k < basis->size(); ++k)
      if ((*basis)[k].multi_index == n) {
        out.coeffs[k] = scale;
        return out;
      }
    throw ConfigError(where + ": multi_index is not among the retained modes");
  }
  if (type == "coefficients") {
    check_keys(spec, where, {"type", "values", "scale"});
    const auto v = num_array(spec, "values", where);
    if (v.size() > basis->size()) throw ConfigError(where + ": more coefficients than retained modes");
    for (std::size_t k = 0; k < v.size(); ++k) out.coeffs[k] = scale * v[k];
    return out;
  }
  if (type == "sum") {
    // Sums may mix exact and projected terms.
    check_keys(spec, where, {"type", "terms", "scale"});
    if (!spec.contains("terms") || !spec.at("terms").is_array()) throw ConfigError(where + ": sum needs 'terms'");
    for (const json& t : spec.at("terms")) {
      const SpectralField part = make_spatial_field(t, basis, base_dir, proj);
      for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] += scale * part.coeffs[k];
    }
    return out;
  }
  return project(make_spatial_function(spec, basis->domain, base_dir), basis, proj);
}

}  // namespace dezin
