#include "dezin/selftest.hpp"

#include <cmath>
#include <numbers>

#include "dezin/forward.hpp"
#include "dezin/inverse.hpp"
#include "dezin/mlf.hpp"
#include "dezin/oracle.hpp"

namespace dezin {

namespace {

Check at_most(std::string name, double value, double limit) {
  return Check{std::move(name), value <= limit, value, limit};
}

Check at_least(std::string name, double value, double limit) {
  return Check{std::move(name), value >= limit, value, limit};
}

}  // namespace

std::vector<Check> run_selftest() {
  using std::numbers::pi;
  std::vector<Check> out;

  out.push_back(at_most("gamma(1/2) relative error", std::abs(gamma_fn(0.5) / std::sqrt(pi) - 1.0), 1e-13));

  double worst = 0.0;
  for (double t : {0.0, 0.1, 1.0, 2.0, 10.0, 50.0}) worst = std::max(worst, std::abs(ml_eval(1.0, 1.0, -t) - std::exp(-t)));
  out.push_back(at_most("E_{1,1}(-t) vs exp(-t)", worst, 1e-12));

  // E_{1/2,1}(-x) = exp(x^2) erfc(x)
  worst = 0.0;
  for (double x : {0.5, 1.0, 2.0, 3.0})
    worst = std::max(worst, std::abs(ml_eval(0.5, 1.0, -x) - std::exp(x * x) * std::erfc(x)));
  out.push_back(at_most("E_{1/2,1}(-x) vs exp(x^2) erfc(x)", worst, 1e-12));

  worst = 0.0;
  for (double rho : {0.3, 0.5, 0.8})
    for (double mu : {0.5, 1.0, 1.5})
      for (double t : {0.1, 1.0, 5.0, 20.0, 100.0}) {
        const double r = ml_eval(rho, mu, -t) - rgamma(mu) + t * ml_eval(rho, mu + rho, -t);
        worst = std::max(worst, std::abs(r));
      }
  out.push_back(at_most("recurrence residual", worst, 1e-11));

  // Regimes cross-checked where both apply.
  worst = 0.0;
  for (double rho : {0.3, 0.5, 0.8}) {
    double v = 0.0, e = 0.0;
    if (detail::ml_series(rho, 1.0, -0.5, 1e-12, v, e))
      worst = std::max(worst, std::abs(v - detail::ml_contour(rho, 1.0, -0.5)));
    else
      worst = 1.0;
    if (detail::ml_asymptotic(rho, 1.0, -80.0, 10, 1e-12, v, e))
      worst = std::max(worst, std::abs(v - detail::ml_contour(rho, 1.0, -80.0)));
    else
      worst = 1.0;
  }
  out.push_back(at_most("series/asymptotic vs contour", worst, 1e-10));

  int bad = 0;
  for (int i = 1; i <= 9; ++i) {
    const double rho = 0.1 * i;
    double prev = 1.0;
    for (int j = 0; j <= 200; ++j) {
      const double t = std::pow(10.0, -3.0 + 9.0 * j / 200);
      const double e = ml_eval(rho, 1.0, -t);
      if (!(e > 0.0 && e < prev)) ++bad;
      prev = e;
    }
  }
  out.push_back(at_most("E_rho(-t) positive and decreasing (failures)", bad, 0.0));

  // Graded L1 against the closed form; order estimated from n and 2n.
  for (double rho : {0.3, 0.5, 0.8}) {
    const double lam = pi * pi;
    const TimeFunction zero = TimeFunction::constant(0.0);
    TimeGrid g{0.0, 1.0, 512, l1_grading(rho)};
    TimeGrid g2 = g;
    g2.steps = 1024;
    auto closed = [&](double t) { return ml_eval(rho, 1.0, -lam * std::pow(t, rho)); };
    const ErrorSummary s = compare_mode(closed, l1_caputo_solve(lam, rho, zero, 1.0, g),
                                        l1_caputo_solve(lam, rho, zero, 1.0, g2), 1);
    out.push_back(at_least("L1 order rho=" + std::to_string(rho).substr(0, 3), s.order, 2.0 - rho - 0.2));
    out.push_back(at_most("L1 error rho=" + std::to_string(rho).substr(0, 3), s.max_abs, 5e-3));
  }

  {
    const ModeTrace tr = parabolic_solve(1.0, TimeFunction::constant(1.0), 0.0, TimeGrid{-1.0, 0.0, 64, 1.0});
    out.push_back(at_most("parabolic oracle, constant source", std::abs(tr.values[0] - std::expm1(-1.0)), 1e-13));
  }

  {
    ProblemParams p;
    p.rho = 0.5;
    p.lambda = -1.0;
    p.mode_count = 6;
    auto ms = make_mode_set(BoxDomain{}, p.mode_count);
    SpectralField f = SpectralField::zero(ms);
    f.coeffs = {1.0, -0.5, 0.25, 0.0, 0.125, 0.0};
    const TimeFunction g = TimeFunction::constant(1.0);
    InverseProblem prob{p, g, 0.5, SpectralField::zero(ms)};
    const ForwardSolution u = solve_forward(p, ms, SourceTerm::separable(f, g));
    prob.phi0.coeffs = mode_values(u, prob.t0);
    const InverseSolution inv = solve_inverse(prob, ms);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
      num += std::pow(inv.f.coeffs[i] - f.coeffs[i], 2);
      den += f.coeffs[i] * f.coeffs[i];
    }
    out.push_back(at_most("inverse round trip relative error", std::sqrt(num / den), 1e-6));
  }
  return out;
}

}  // namespace dezin
