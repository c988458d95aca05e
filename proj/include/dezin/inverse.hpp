#pragma once

#include <map>
#include <string>
#include <vector>

#include "dezin/forward.hpp"

namespace dezin {

/// Recover f in F = f(x) g(t) from the extra datum u(x, t0) = phi0(x).
struct InverseProblem {
  ProblemParams params;
  TimeFunction g;
  double t0 = 0.5;
  SpectralField phi0;
  /// Constant in E_{rho,mu}(-t) <= C0 / (1 + t); only annotates the report.
  double c0 = 1.0;
  /// |phi0_k| allowed on the zero set, relative to the Euclidean norm of phi0.
  double orth_rel_tol = 1e-9;

  /// Also rejects a g that changes sign on [-alpha, beta].
  void validate() const;
};

/// The two terms of Delta_k(t0) for one mode.
struct DenominatorTerms {
  double ml = 0.0;       // E_{rho,1}(-lambda_k t0^rho)
  double i_alpha = 0.0;  // I_k(alpha)
  double i_rho = 0.0;    // I_{k,rho}(t0)
  double delta = 0.0;    // delta_k
  double term1 = 0.0;    // ml * i_alpha
  double term2 = 0.0;    // delta * i_rho
  double value = 0.0;    // Delta_k(t0)
};

DenominatorTerms denominator_terms(const InverseProblem& prob, const Mode& mode, double t0,
                                   const QuadratureSpec& quad = {}, const MLConfig& ml = {});

struct DenominatorReport {
  std::vector<double> Delta;
  std::vector<double> term1, term2;
  std::vector<double> delta;
  std::vector<int> K0;  // 1-based k with |Delta_k| <= zero_tol (|term1| + |term2|)
  /// 1-based k outside K0 whose |Delta_k| is within 1e3 zero_tol of the threshold.
  std::vector<int> precision_loss;
  SignClass g_sign = SignClass::positive;
  double m = 0.0;  // min |g| on [-alpha, beta]
  double M = 0.0;  // max |g| on [-alpha, beta]
  double c0 = 1.0;
  bool n1_satisfied = false;
  double n1_lhs = 0.0;  // t0^rho
  double n1_rhs = 0.0;  // C0 / lambda_1 (1 + M/m)
  /// First 1-based k with t0^rho > C0/lambda_k (1 + M/m); K + 1 if none.
  int k_l = 0;
  /// 0 < lambda < 1: first 1-based k with
  /// (lambda - e^{-lambda_k alpha}) m / lambda_k > C0/(lambda_k^2 t0^rho) (M (1 - e^{-lambda_k alpha}) + (lambda - e^{-lambda_k alpha}) m);
  /// K + 1 if none; 0 for other lambda.
  int k_r = 0;
};

DenominatorReport compute_denominators(const InverseProblem& prob, const ModeSet& modes,
                                       const QuadratureSpec& quad = {}, const MLConfig& ml = {});

struct InverseOptions {
  /// f_k for k in K0 (1-based); unspecified ones default to 0.
  std::map<int, double> free_f;
  QuadratureSpec quad;
  MLConfig ml;
};

struct InverseSolution {
  SpectralField f;
  ForwardSolution u;
  DenominatorReport report;
  std::vector<int> free_indices;
  std::vector<std::string> warnings;
};

InverseSolution solve_inverse(const InverseProblem& prob, std::shared_ptr<const ModeSet> modes,
                              const InverseOptions& opts = {});

/// max |u(x, t0) - phi0(x)| over a tensor grid with the given points per axis.
double verify_overdetermination(const InverseSolution& sol, const InverseProblem& prob,
                                int points_per_axis = 21);

struct BoundRow {
  int k = 0;
  double scaled = 0.0;       // |Delta_k| lambda_k
  bool in_regime = false;    // k lies where the lower bound is claimed
  bool violated = false;     // in regime but with the wrong sign or a zero value
};

struct BoundTable {
  std::vector<BoundRow> rows;
  int regime_start = 1;      // first 1-based k where the bound is claimed
  double empirical_c = 0.0;  // inf of |Delta_k| lambda_k over the regime (0 if empty)
  bool any_violation = false;
};

BoundTable bound_diagnostics(const DenominatorReport& report, const ModeSet& modes, double lambda);

/// Root of t0 -> Delta_k(t0) on (0, beta): scans a logarithmic grid for a
/// sign change and bisects it to an interval of width tol. Throws
/// std::runtime_error when no sign change is found.
double find_denominator_root(const InverseProblem& prob, const Mode& mode, double tol = 1e-14,
                             const QuadratureSpec& quad = {}, const MLConfig& ml = {});

}  // namespace dezin
