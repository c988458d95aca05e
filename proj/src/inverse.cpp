#include "dezin/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dezin/kernels.hpp"

namespace dezin {

void InverseProblem::validate() const {
  params.validate();
  if (!(t0 > 0.0 && t0 < params.beta)) throw std::invalid_argument("t0 must lie in (0, beta)");
  if (!(c0 > 0.0)) throw std::invalid_argument("c0 must be > 0");
  if (!(orth_rel_tol >= 0.0)) throw std::invalid_argument("orthogonality tolerance must be >= 0");
  phi0.validate();
  if (sign_check(g, -params.alpha, params.beta).sign == SignClass::sign_changing)
    throw std::invalid_argument("g must not change sign on [-alpha, beta]");
}

DenominatorTerms denominator_terms(const InverseProblem& prob, const Mode& mode, double t0,
                                   const QuadratureSpec& quad, const MLConfig& ml) {
  const auto& p = prob.params;
  const double lk = mode.eigenvalue;
  DenominatorTerms d;
  d.ml = ml_eval(p.rho, 1.0, -lk * std::pow(t0, p.rho), ml);
  d.i_alpha = i_k_alpha(prob.g, lk, p.alpha);
  d.i_rho = i_k_rho(prob.g, lk, p.rho, t0, quad, ml);
  d.delta = std::exp(-lk * p.alpha) - p.lambda;
  d.term1 = d.ml * d.i_alpha;
  d.term2 = d.delta * d.i_rho;
  d.value = d.term1 + d.term2;
  return d;
}

DenominatorReport compute_denominators(const InverseProblem& prob, const ModeSet& modes,
                                       const QuadratureSpec& quad, const MLConfig& ml) {
  prob.validate();
  const auto& p = prob.params;
  const std::size_t K = modes.size();
  DenominatorReport r;
  r.Delta.resize(K);
  r.term1.resize(K);
  r.term2.resize(K);
  r.delta.resize(K);
  kernels::map_parallel(K, [&](std::size_t i) {
    const DenominatorTerms d = denominator_terms(prob, modes[i], prob.t0, quad, ml);
    r.Delta[i] = d.value;
    r.term1[i] = d.term1;
    r.term2[i] = d.term2;
    r.delta[i] = d.delta;
    return d.value;
  });
  for (std::size_t i = 0; i < K; ++i) {
    const double thr = p.zero_tol * (std::abs(r.term1[i]) + std::abs(r.term2[i]));
    const double a = std::abs(r.Delta[i]);
    if (a <= thr)
      r.K0.push_back(static_cast<int>(i) + 1);
    else if (a <= 1e3 * thr)
      r.precision_loss.push_back(static_cast<int>(i) + 1);
  }

  const SignReport s = sign_check(prob.g, -p.alpha, p.beta);
  r.g_sign = s.sign;
  r.m = s.sign == SignClass::negative ? -s.max : s.min;
  r.M = s.sign == SignClass::negative ? -s.min : s.max;
  r.c0 = prob.c0;
  const double ratio = 1.0 + r.M / r.m;
  r.n1_lhs = std::pow(prob.t0, p.rho);
  r.n1_rhs = prob.c0 / modes[0].eigenvalue * ratio;
  r.n1_satisfied = r.n1_lhs > r.n1_rhs;

  r.k_l = static_cast<int>(K) + 1;
  for (std::size_t i = 0; i < K; ++i)
    if (r.n1_lhs > prob.c0 / modes[i].eigenvalue * ratio) {
      r.k_l = static_cast<int>(i) + 1;
      break;
    }
  if (p.lambda > 0.0 && p.lambda < 1.0) {
    r.k_r = static_cast<int>(K) + 1;
    for (std::size_t i = 0; i < K; ++i) {
      const double lk = modes[i].eigenvalue;
      const double e = std::exp(-lk * p.alpha);
      const double lhs = (p.lambda - e) * r.m / lk;
      const double rhs = prob.c0 / (lk * lk * r.n1_lhs) * (r.M * (1.0 - e) + (p.lambda - e) * r.m);
      if (lhs > rhs) {
        r.k_r = static_cast<int>(i) + 1;
        break;
      }
    }
  }
  return r;
}

InverseSolution solve_inverse(const InverseProblem& prob, std::shared_ptr<const ModeSet> modes,
                              const InverseOptions& opts) {
  if (!modes) throw std::invalid_argument("solve_inverse: null mode set");
  prob.validate();
  if (prob.phi0.coeffs.size() != modes->size())
    throw std::invalid_argument("solve_inverse: phi0 has the wrong number of modes");
  const std::size_t K = modes->size();
  for (const auto& [k, v] : opts.free_f) {
    if (k < 1 || k > static_cast<int>(K)) throw std::invalid_argument("solve_inverse: free f index out of range");
    if (!std::isfinite(v)) throw std::invalid_argument("solve_inverse: free f value must be finite");
  }
  const SolvabilityReport sr = analyze_solvability(prob.params, *modes);
  if (!sr.resonant_set.empty())
    throw std::invalid_argument("inverse problem requires delta_k != 0 for every retained mode");

  InverseSolution sol;
  sol.report = compute_denominators(prob, *modes, opts.quad, opts.ml);
  const auto& rep = sol.report;

  const double tol = prob.orth_rel_tol * prob.phi0.l2_norm();
  std::vector<int> offending;
  for (int k : rep.K0)
    if (std::abs(prob.phi0.coeffs[k - 1]) > tol) offending.push_back(k);
  if (!offending.empty()) {
    std::ostringstream msg;
    msg << "no solution: phi0 not orthogonal to mode(s) with Delta_k(t0) = 0:";
    for (int k : offending) msg << ' ' << k;
    throw NoSolution(msg.str(), offending);
  }

  sol.f = SpectralField::zero(modes);
  for (std::size_t i = 0; i < K; ++i) {
    const int k = static_cast<int>(i) + 1;
    if (std::find(rep.K0.begin(), rep.K0.end(), k) != rep.K0.end()) {
      auto it = opts.free_f.find(k);
      sol.f.coeffs[i] = it == opts.free_f.end() ? 0.0 : it->second;
      sol.free_indices.push_back(k);
    } else {
      sol.f.coeffs[i] = rep.delta[i] * prob.phi0.coeffs[i] / rep.Delta[i];
    }
  }
  for (int k : rep.precision_loss) {
    std::ostringstream msg;
    msg << "precision loss: Delta_" << k << "(t0) is close to the zero threshold";
    sol.warnings.push_back(msg.str());
  }

  ForwardOptions fo;
  fo.quad = opts.quad;
  fo.ml = opts.ml;
  sol.u = solve_forward(prob.params, modes, SourceTerm::separable(sol.f, prob.g), fo);
  for (const auto& w : sol.u.diagnostics.warnings) sol.warnings.push_back(w);
  return sol;
}

double verify_overdetermination(const InverseSolution& sol, const InverseProblem& prob, int points_per_axis) {
  if (points_per_axis < 2) throw std::invalid_argument("verify_overdetermination: need >= 2 points per axis");
  const ModeSet& ms = *sol.u.modes;
  const int dims = ms.domain.dims;
  const auto T = mode_values(sol.u, prob.t0);
  std::vector<double> diff(T.size());
  for (std::size_t i = 0; i < T.size(); ++i) diff[i] = T[i] - prob.phi0.coeffs[i];
  const int n = points_per_axis;
  std::size_t total = 1;
  for (int i = 0; i < dims; ++i) total *= static_cast<std::size_t>(n);
  double worst = 0.0;
  std::array<double, kMaxDims> x{};
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (int i = dims - 1; i >= 0; --i) {
      const int j = static_cast<int>(r % n);
      r /= n;
      x[i] = ms.domain.lengths[i] * j / (n - 1);
    }
    double s = 0.0;
    for (std::size_t k = 0; k < diff.size(); ++k)
      s += diff[k] * eval_mode_unchecked(ms[k], std::span<const double>(x.data(), dims));
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

BoundTable bound_diagnostics(const DenominatorReport& report, const ModeSet& modes, double lambda) {
  BoundTable t;
  const int K = static_cast<int>(report.Delta.size());
  if (lambda < 0.0)
    t.regime_start = 1;
  else if (lambda >= 1.0)
    t.regime_start = report.n1_satisfied ? 1 : report.k_l;
  else
    t.regime_start = report.k_r;
  bool first = true;
  for (int k = 1; k <= K; ++k) {
    BoundRow row;
    row.k = k;
    const double D = report.Delta[k - 1];
    row.scaled = std::abs(D) * modes[k - 1].eigenvalue;
    row.in_regime = k >= t.regime_start;
    if (row.in_regime) {
      // lambda < 0: Delta_k > 0; otherwise the bound comes from Delta_k < 0.
      row.violated = lambda < 0.0 ? !(D > 0.0) : !(D < 0.0);
      t.any_violation = t.any_violation || row.violated;
      t.empirical_c = first ? row.scaled : std::min(t.empirical_c, row.scaled);
      first = false;
    }
    t.rows.push_back(row);
  }
  return t;
}

double find_denominator_root(const InverseProblem& prob, const Mode& mode, double tol,
                             const QuadratureSpec& quad, const MLConfig& ml) {
  prob.params.validate();
  const double beta = prob.params.beta;
  auto D = [&](double t0) { return denominator_terms(prob, mode, t0, quad, ml).value; };
  constexpr int n = 400;
  double lo = 0.0, hi = 0.0, flo = 0.0;
  double prev_t = beta * 1e-10, prev_f = D(prev_t);
  bool found = false;
  for (int i = 1; i <= n; ++i) {
    const double t = beta * std::pow(10.0, -10.0 + 10.0 * i / n) * (i == n ? (1.0 - 1e-12) : 1.0);
    const double f = D(t);
    if ((prev_f < 0.0) != (f < 0.0)) {
      lo = prev_t, hi = t, flo = prev_f;
      found = true;
      break;
    }
    prev_t = t, prev_f = f;
  }
  if (!found) throw std::runtime_error("find_denominator_root: no sign change of Delta_k on (0, beta)");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = D(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0))
      lo = mid, flo = fm;
    else
      hi = mid;
  }
  return std::abs(D(lo)) <= std::abs(D(hi)) ? lo : hi;
}

}  // namespace dezin
