#pragma once

#include <array>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dezin/forward.hpp"
#include "dezin/inverse.hpp"
#include "dezin/mlf.hpp"

namespace dezin {

/// Shortest decimal form with 17 significant digits ("%.17g").
std::string fmt17(double v);

/// Structured text report: "[section]" headers followed by "key = value"
/// lines. Arrays print as "key = [a, b, c]", strings are double-quoted.
class ReportWriter {
 public:
  explicit ReportWriter(std::ostream& out) : out_(out) {}

  void section(const std::string& name);
  void put(const std::string& key, double v);
  void put(const std::string& key, int v);
  void put(const std::string& key, bool v);
  void put(const std::string& key, const std::string& v);
  void put(const std::string& key, const char* v) { put(key, std::string(v)); }
  void put(const std::string& key, std::span<const double> v);
  void put(const std::string& key, std::span<const int> v);
  void put(const std::string& key, const std::vector<std::string>& v);

 private:
  std::ostream& out_;
  bool first_section_ = true;
};

void write_params(ReportWriter& w, const ProblemParams& p, const ModeSet& modes);
void write_solvability(ReportWriter& w, const SolvabilityReport& r);
void write_forward(ReportWriter& w, const ForwardSolution& sol);
void write_denominators(ReportWriter& w, const DenominatorReport& r);
void write_bounds(ReportWriter& w, const BoundTable& t);
void write_conditions(ReportWriter& w, const ConditionReport& c);

/// Grid points per axis including the boundary, axis 0 varying slowest.
std::vector<std::array<double, kMaxDims>> spatial_grid(const BoxDomain& domain, int points_per_axis);

/// n points spanning [-alpha, beta].
std::vector<double> time_levels(double alpha, double beta, int n);

/// CSV "x,t,u" (or "x1,x2,...,t,u"), time in the outer loop.
void write_u_csv(std::ostream& out, const ForwardSolution& sol, int x_points, int t_points);

/// CSV "x,f" (or "x1,x2,...,f").
void write_field_csv(std::ostream& out, const SpectralField& f, int x_points);

/// CSV "rho,mu,z,value".
void write_ml_csv(std::ostream& out, std::span<const MLQuery> queries, std::span<const double> values);

}  // namespace dezin
