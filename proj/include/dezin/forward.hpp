#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dezin/eigenbasis.hpp"
#include "dezin/mlf.hpp"
#include "dezin/time_function.hpp"
#include "dezin/transforms.hpp"

namespace dezin {

/// Scalar data of one problem instance:
///   D_t^rho u - Lap u = F on t in (0, beta], u_t + Lap u = F on t in [-alpha, 0),
///   u(x, -alpha) = lambda u(x, 0), u = 0 on the boundary, u continuous at t = 0.
struct ProblemParams {
  double rho = 0.5;
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = -1.0;
  int mode_count = 10;
  double zero_tol = 1e-12;

  void validate() const;
};

enum class LambdaClass { neg, ge_one, unit_interval };
const char* to_string(LambdaClass c);

struct SolvabilityReport {
  std::vector<double> delta;  // delta_k = e^{-lambda_k alpha} - lambda
  LambdaClass lambda_class = LambdaClass::neg;
  std::optional<double> lambda0;  // eigenvalue level -ln(lambda)/alpha, 0 < lambda < 1 only
  std::vector<int> resonant_set;  // 1-based k with delta_k = 0 to zero_tol
  /// Bound on |delta_k| that actually holds: |lambda| for lambda < 0,
  /// lambda - e^{-lambda_1 alpha} for lambda >= 1, lambda/2 for k >= k0 otherwise.
  double lower_bound = 0.0;
  /// The lambda < 0 constant |lambda| + e^{-lambda_1 alpha} as usually quoted; it
  /// exceeds every |delta_k| when more than one mode is present.
  double quoted_bound = 0.0;
  /// 0 < lambda < 1: first 1-based index with e^{-lambda_k alpha} <= lambda/2
  /// (mode_count + 1 when no retained mode qualifies); 1 otherwise.
  int k0 = 1;
  double min_abs_delta = 0.0;
};

SolvabilityReport analyze_solvability(const ProblemParams& params, const ModeSet& modes);

/// Either F = f(x) g(t) or independent per-mode sources F_k(t).
class SourceTerm {
 public:
  static SourceTerm separable(SpectralField f, TimeFunction g);
  static SourceTerm per_mode(std::vector<TimeFunction> Fk);
  static SourceTerm none(std::size_t modes);

  bool is_separable() const { return separable_; }
  const SpectralField& f() const { return f_; }
  std::shared_ptr<const TimeFunction> g() const { return g_; }
  std::size_t size() const;
  /// F_k = scale * base for the 0-based mode i.
  double scale(std::size_t i) const;
  std::shared_ptr<const TimeFunction> base(std::size_t i) const;

 private:
  bool separable_ = false;
  SpectralField f_;
  std::shared_ptr<const TimeFunction> g_;
  std::vector<std::shared_ptr<const TimeFunction>> per_mode_;
};

/// T_k on both sides of t = 0.
struct ModeSolution {
  int k = 0;
  double lambda_k = 0.0;
  double delta = 0.0;
  double fstar = 0.0;  // F*_k
  double a = 0.0;      // T_k(0), shared by both branches
  bool is_free = false;
  double scale = 0.0;
  std::shared_ptr<const TimeFunction> source;  // F_k = scale * source
  double rho = 0.5;
  QuadratureSpec quad;
  MLConfig ml;

  /// a E_{rho,1}(-lambda_k t^rho) + int_0^t s^{rho-1} E_{rho,rho}(-lambda_k s^rho) F_k(t-s) ds, t >= 0.
  double pos(double t) const;
  /// a e^{lambda_k t} - int_t^0 F_k(s) e^{lambda_k (t-s)} ds, t <= 0.
  double neg(double t) const;
  double at(double t) const { return t > 0.0 ? pos(t) : neg(t); }
  TimeFunction source_function() const;
};

struct ForwardDiagnostics {
  /// sqrt of the share of sum a_k^2 carried by the last ceil(K/10) modes.
  double tail_mass = 0.0;
  /// Input smoothness proxy |c_k| lambda_k^{tau/2}, tau = N/2 + 1; warns when
  /// the tail exceeds the head.
  bool decay_warning = false;
  double decay_head = 0.0;
  double decay_tail = 0.0;
  std::vector<std::string> warnings;
};

struct ForwardSolution {
  ProblemParams params;
  std::shared_ptr<const ModeSet> modes;
  SolvabilityReport solvability;
  std::vector<ModeSolution> mode_solutions;
  ForwardDiagnostics diagnostics;
};

/// Raised when the data violate the orthogonality needed for a solution.
class NoSolution : public std::runtime_error {
 public:
  NoSolution(const std::string& what, std::vector<int> indices)
      : std::runtime_error(what), indices_(std::move(indices)) {}
  const std::vector<int>& indices() const { return indices_; }

 private:
  std::vector<int> indices_;
};

struct ForwardOptions {
  /// a_k for resonant modes (1-based); unspecified ones default to 0.
  std::map<int, double> free_coefficients;
  /// |F*_k| allowed for resonant k, relative to the Euclidean norm of F*.
  double orth_rel_tol = 1e-9;
  QuadratureSpec quad;
  MLConfig ml;
};

ForwardSolution solve_forward(const ProblemParams& params, std::shared_ptr<const ModeSet> modes,
                              const SourceTerm& source, const ForwardOptions& opts = {});

/// Truncated series sum_k T_k(t) v_k(x); throws std::out_of_range for t
/// outside [-alpha, beta] or x outside the box.
double eval_u(const ForwardSolution& sol, std::span<const double> x, double t);

/// T_k(t) for every retained mode.
std::vector<double> mode_values(const ForwardSolution& sol, double t);

struct ConditionOptions {
  int points_per_axis = 21;
  /// Steps of the oracle solves used for the per-mode residuals.
  int pde_steps = 1024;
  /// Closed-form samples are compared on every stride-th oracle node.
  int pde_stride = 16;
  /// Modes checked against the oracles (the first ones); 0 checks all.
  int pde_modes = 32;
};

struct ConditionReport {
  double dezin = 0.0;     // max |u(x,-alpha) - lambda u(x,0)|
  double gluing = 0.0;    // max |u(x,0+) - u(x,0-)| from the one-sided limits
  double gluing_eps6 = 0.0;  // max |u(x,1e-6) - u(x,-1e-6)|
  double gluing_eps9 = 0.0;  // max |u(x,1e-9) - u(x,-1e-9)|
  double boundary = 0.0;  // max |u| on the boundary over the sampled times
  double pde_pos = 0.0;   // max_k |T_k - L1 oracle| on (0, beta]
  double pde_neg = 0.0;   // max_k |T_k - exponential-integrator oracle| on [-alpha, 0)
  int pde_modes_checked = 0;
};

ConditionReport check_conditions(const ForwardSolution& sol, const ConditionOptions& opts = {});

/// Mesh exponent that restores the full L1 order for solutions behaving like t^rho.
double l1_grading(double rho);

}  // namespace dezin
