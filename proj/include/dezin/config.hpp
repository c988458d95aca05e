#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dezin/eigenbasis.hpp"
#include "dezin/forward.hpp"
#include "dezin/mlf.hpp"
#include "dezin/time_function.hpp"
#include "dezin/transforms.hpp"

namespace dezin {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { forward, inverse, analyze, ml, selftest };
const char* to_string(RunMode m);
RunMode parse_mode(const std::string& s);

struct GridSpec {
  int x_points = 101;  // per axis, boundary included
  int t_points = 201;  // spanning [-alpha, beta]
  bool write_csv = true;
};

/// Parsed configuration file. Function declarations stay as JSON until the
/// mode set is known, since spatial data are projected onto it.
struct RunConfig {
  std::optional<RunMode> mode;
  ProblemParams problem;
  std::optional<double> t0;
  double c0 = 1.0;
  double orth_rel_tol = 1e-9;
  BoxDomain domain;
  std::optional<nlohmann::json> f;
  std::optional<nlohmann::json> g;
  std::optional<nlohmann::json> phi0;
  std::map<int, double> free_coefficients;
  GridSpec grid;
  QuadratureSpec quad;
  ProjectionSpec projection;
  MLConfig ml;
  std::vector<MLQuery> ml_queries;
  std::string output_dir = "dezin-out";
  std::filesystem::path base_dir;  // relative table paths resolve against this

  void validate() const;
};

RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Time function from {"type": "const" | "poly" | "exp" | "table", ...}.
TimeFunction make_time_function(const nlohmann::json& spec, const std::filesystem::path& base_dir);

/// Spatial function as coefficients against basis. "sine_mode" and
/// "coefficients" are exact; other kinds are projected.
SpectralField make_spatial_field(const nlohmann::json& spec, std::shared_ptr<const ModeSet> basis,
                                 const std::filesystem::path& base_dir, const ProjectionSpec& proj);

/// Pointwise evaluator for projectable spatial kinds (const, poly, exp, table, sum).
SpatialFunction make_spatial_function(const nlohmann::json& spec, const BoxDomain& domain,
                                      const std::filesystem::path& base_dir);

}  // namespace dezin
