#pragma once

#include <functional>
#include <vector>

#include "dezin/time_function.hpp"

// Time-stepping references for a single mode, independent of the
// Mittag-Leffler code path.
namespace dezin {

/// Nodes t_j = t_start + (t_end - t_start) (j/n)^grading, j = 0..n.
/// grading = 1 gives a uniform grid.
struct TimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  int steps = 100;
  double grading = 1.0;

  void validate() const;
  double node(int j) const;
  std::vector<double> nodes() const;
  bool uniform() const { return grading == 1.0; }
};

struct ModeTrace {
  TimeGrid grid;
  std::vector<double> times;
  std::vector<double> values;
};

/// Implicit L1 scheme for D^rho T + lam T = q on [t_start, t_end], T(t_start) = T0.
ModeTrace l1_caputo_solve(double lam, double rho, const TimeFunction& q, double T0,
                          const TimeGrid& grid);

/// T' - lam T = q stepped backward from T(t_end) = T0 to t_start with the
/// exponential integrator (q linear on each step).
ModeTrace parabolic_solve(double lam, const TimeFunction& q, double T0, const TimeGrid& grid);

/// L1 approximation of the Caputo derivative at every node; the value at
/// the first node is set to 0.
ModeTrace caputo_l1_derivative(const ModeTrace& trace, double rho);

struct ErrorSummary {
  double max_abs = 0.0;
  double l2 = 0.0;     // trapezoid-weighted over the compared nodes
  double order = 0.0;  // log2(coarse / fine) when two resolutions were compared
  int compared = 0;
};

/// Error of a trace against a reference evaluator on every stride-th node
/// (the last node is always included).
ErrorSummary compare_mode(const std::function<double(double)>& closed, const ModeTrace& trace,
                          int stride = 1);

/// As above on two traces whose step counts differ by a factor of two; the
/// order is measured from the max-abs errors.
ErrorSummary compare_mode(const std::function<double(double)>& closed, const ModeTrace& coarse,
                          const ModeTrace& fine, int stride = 1);

}  // namespace dezin
