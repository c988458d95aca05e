#include "dezin/forward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dezin/kernels.hpp"
#include "dezin/oracle.hpp"

namespace dezin {

void ProblemParams::validate() const {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (0, 1)");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be > 0");
  if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");
  if (lambda == 0.0) throw std::invalid_argument("lambda = 0 (the backward problem) is not supported");
  if (mode_count < 1) throw std::invalid_argument("mode count must be >= 1");
  if (!(zero_tol > 0.0)) throw std::invalid_argument("zero_tol must be > 0");
}

const char* to_string(LambdaClass c) {
  switch (c) {
    case LambdaClass::neg: return "neg";
    case LambdaClass::ge_one: return "ge_one";
    case LambdaClass::unit_interval: return "unit_interval";
  }
  return "unknown";
}

SolvabilityReport analyze_solvability(const ProblemParams& p, const ModeSet& modes) {
  p.validate();
  if (modes.size() == 0) throw std::invalid_argument("analyze_solvability: empty mode set");
  SolvabilityReport r;
  const double lam = p.lambda;
  r.delta.resize(modes.size());
  r.min_abs_delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double e = std::exp(-modes[i].eigenvalue * p.alpha);
    r.delta[i] = e - lam;
    r.min_abs_delta = std::min(r.min_abs_delta, std::abs(r.delta[i]));
    if (std::abs(r.delta[i]) <= p.zero_tol * (e + std::abs(lam))) r.resonant_set.push_back(static_cast<int>(i) + 1);
  }
  const double e1 = std::exp(-modes[0].eigenvalue * p.alpha);
  if (lam < 0.0) {
    r.lambda_class = LambdaClass::neg;
    r.lower_bound = -lam;
    r.quoted_bound = -lam + e1;
  } else if (lam >= 1.0) {
    r.lambda_class = LambdaClass::ge_one;
    r.lower_bound = r.quoted_bound = lam - e1;
  } else {
    r.lambda_class = LambdaClass::unit_interval;
    r.lambda0 = -std::log(lam) / p.alpha;
    r.lower_bound = r.quoted_bound = 0.5 * lam;
    r.k0 = static_cast<int>(modes.size()) + 1;
    for (std::size_t i = 0; i < modes.size(); ++i)
      if (std::exp(-modes[i].eigenvalue * p.alpha) <= 0.5 * lam) {
        r.k0 = static_cast<int>(i) + 1;
        break;
      }
  }
  return r;
}

// ---------------------------------------------------------------- sources

SourceTerm SourceTerm::separable(SpectralField f, TimeFunction g) {
  f.validate();
  SourceTerm s;
  s.separable_ = true;
  s.f_ = std::move(f);
  s.g_ = std::make_shared<const TimeFunction>(std::move(g));
  return s;
}

SourceTerm SourceTerm::per_mode(std::vector<TimeFunction> Fk) {
  SourceTerm s;
  for (auto& F : Fk) s.per_mode_.push_back(std::make_shared<const TimeFunction>(std::move(F)));
  return s;
}

SourceTerm SourceTerm::none(std::size_t modes) {
  return per_mode(std::vector<TimeFunction>(modes, TimeFunction::constant(0.0)));
}

std::size_t SourceTerm::size() const { return separable_ ? f_.coeffs.size() : per_mode_.size(); }

double SourceTerm::scale(std::size_t i) const { return separable_ ? f_.coeffs.at(i) : 1.0; }

std::shared_ptr<const TimeFunction> SourceTerm::base(std::size_t i) const {
  return separable_ ? g_ : per_mode_.at(i);
}

// ---------------------------------------------------------------- mode solutions

double ModeSolution::pos(double t) const {
  if (t < 0.0) throw std::out_of_range("ModeSolution::pos: t must be >= 0");
  if (t == 0.0) return a;
  double v = a == 0.0 ? 0.0 : a * ml_eval(rho, 1.0, -lambda_k * std::pow(t, rho), ml);
  if (scale != 0.0 && source) v += scale * duhamel(*source, lambda_k, rho, t, quad, ml);
  return v;
}

double ModeSolution::neg(double t) const {
  if (t > 0.0) throw std::out_of_range("ModeSolution::neg: t must be <= 0");
  if (t == 0.0) return a;
  double v = a * std::exp(lambda_k * t);
  if (scale != 0.0 && source) v -= scale * history_integral(*source, lambda_k, t);
  return v;
}

TimeFunction ModeSolution::source_function() const {
  if (!source || scale == 0.0) return TimeFunction::constant(0.0);
  return scaled(*source, scale);
}

ForwardSolution solve_forward(const ProblemParams& params, std::shared_ptr<const ModeSet> modes,
                              const SourceTerm& source, const ForwardOptions& opts) {
  params.validate();
  opts.quad.validate();
  opts.ml.validate();
  if (!modes) throw std::invalid_argument("solve_forward: null mode set");
  const std::size_t K = modes->size();
  if (source.size() != K) throw std::invalid_argument("solve_forward: source has the wrong number of modes");
  for (const auto& [k, v] : opts.free_coefficients) {
    if (k < 1 || k > static_cast<int>(K)) throw std::invalid_argument("solve_forward: free coefficient index out of range");
    if (!std::isfinite(v)) throw std::invalid_argument("solve_forward: free coefficient must be finite");
  }

  ForwardSolution sol;
  sol.params = params;
  sol.modes = modes;
  sol.solvability = analyze_solvability(params, *modes);

  // F*_k; a separable source shares g, so only I_k(alpha) differs per mode.
  const std::vector<double> fstar = kernels::map_parallel(K, [&](std::size_t i) {
    const double s = source.scale(i);
    if (s == 0.0) return 0.0;
    return s * fstar_k(*source.base(i), (*modes)[i].eigenvalue, params.alpha);
  });

  double norm = 0.0;
  for (double v : fstar) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<int> offending;
  for (int k : sol.solvability.resonant_set)
    if (std::abs(fstar[k - 1]) > opts.orth_rel_tol * norm) offending.push_back(k);
  if (!offending.empty()) {
    std::ostringstream msg;
    msg << "no solution: source not orthogonal to resonant mode(s)";
    for (int k : offending) msg << ' ' << k;
    throw NoSolution(msg.str(), offending);
  }

  const auto& res = sol.solvability.resonant_set;
  sol.mode_solutions.resize(K);
  for (std::size_t i = 0; i < K; ++i) {
    ModeSolution& m = sol.mode_solutions[i];
    m.k = static_cast<int>(i) + 1;
    m.lambda_k = (*modes)[i].eigenvalue;
    m.delta = sol.solvability.delta[i];
    m.fstar = fstar[i];
    m.is_free = std::find(res.begin(), res.end(), m.k) != res.end();
    if (m.is_free) {
      auto it = opts.free_coefficients.find(m.k);
      m.a = it == opts.free_coefficients.end() ? 0.0 : it->second;
    } else {
      m.a = fstar[i] / m.delta;
    }
    m.scale = source.scale(i);
    m.source = source.base(i);
    if (m.source && m.source->is_zero()) m.scale = 0.0;
    m.rho = params.rho;
    m.quad = opts.quad;
    m.ml = opts.ml;
  }

  // Diagnostics.
  ForwardDiagnostics& d = sol.diagnostics;
  const std::size_t tail = (K + 9) / 10;
  double total = 0.0, tail_sum = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    const double a2 = sol.mode_solutions[i].a * sol.mode_solutions[i].a;
    total += a2;
    if (i >= K - tail) tail_sum += a2;
  }
  d.tail_mass = total > 0.0 ? std::sqrt(tail_sum / total) : 0.0;

  const double tau = 0.5 * modes->domain.dims + 1.0;
  std::vector<double> weighted(K);
  for (std::size_t i = 0; i < K; ++i) {
    const double c = source.is_separable() ? source.f().coeffs[i] : fstar[i];
    weighted[i] = std::abs(c) * std::pow((*modes)[i].eigenvalue, 0.5 * tau);
  }
  const std::size_t half = std::max<std::size_t>(1, K / 2);
  for (std::size_t i = 0; i < K; ++i) {
    if (i < half) d.decay_head = std::max(d.decay_head, weighted[i]);
    if (i >= K - tail) d.decay_tail = std::max(d.decay_tail, weighted[i]);
  }
  if (K >= 2 && d.decay_tail > d.decay_head) {
    d.decay_warning = true;
    d.warnings.push_back("source coefficients do not decay: the truncated series may not converge");
  }
  if (!res.empty()) {
    std::ostringstream msg;
    msg << "resonant modes with free coefficients:";
    for (int k : res) msg << ' ' << k;
    d.warnings.push_back(msg.str());
  }
  return sol;
}

std::vector<double> mode_values(const ForwardSolution& sol, double t) {
  const auto& p = sol.params;
  if (!(t >= -p.alpha && t <= p.beta)) throw std::out_of_range("time outside [-alpha, beta]");
  std::vector<double> out(sol.mode_solutions.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sol.mode_solutions[i].at(t);
  return out;
}

double eval_u(const ForwardSolution& sol, std::span<const double> x, double t) {
  if (!sol.modes->domain.contains(x)) throw std::out_of_range("eval_u: point outside the box");
  const auto T = mode_values(sol, t);
  double s = 0.0;
  for (std::size_t i = 0; i < T.size(); ++i)
    if (T[i] != 0.0) s += T[i] * eval_mode_unchecked((*sol.modes)[i], x);
  return s;
}

double l1_grading(double rho) { return (2.0 - rho) / rho; }

ConditionReport check_conditions(const ForwardSolution& sol, const ConditionOptions& opts) {
  if (opts.points_per_axis < 2) throw std::invalid_argument("check_conditions: need >= 2 points per axis");
  const ModeSet& ms = *sol.modes;
  const auto& p = sol.params;
  const int dims = ms.domain.dims;
  const std::size_t K = ms.size();
  ConditionReport rep;

  // Tensor sample grid including the boundary.
  std::vector<std::array<double, kMaxDims>> pts;
  std::vector<bool> on_boundary;
  const int n = opts.points_per_axis;
  std::size_t total = 1;
  for (int i = 0; i < dims; ++i) total *= static_cast<std::size_t>(n);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::array<double, kMaxDims> x{};
    bool edge = false;
    std::size_t r = flat;
    for (int i = dims - 1; i >= 0; --i) {
      const int j = static_cast<int>(r % n);
      r /= n;
      x[i] = j == n - 1 ? ms.domain.lengths[i] : ms.domain.lengths[i] * j / (n - 1);
      edge = edge || j == 0 || j == n - 1;
    }
    pts.push_back(x);
    on_boundary.push_back(edge);
  }
  kernels::Table V{pts.size(), K, std::vector<double>(pts.size() * K)};
  for (std::size_t q = 0; q < pts.size(); ++q)
    for (std::size_t k = 0; k < K; ++k)
      V(q, k) = eval_mode_unchecked(ms[k], std::span<const double>(pts[q].data(), dims));

  const std::vector<double> times{-p.alpha, 0.0, 0.0, 1e-6, -1e-6, 1e-9, -1e-9, -0.5 * p.alpha, 0.5 * p.beta, p.beta};
  kernels::Table T = kernels::mode_time_table_parallel(K, times.size(), [&](std::size_t k, std::size_t j) {
    const ModeSolution& m = sol.mode_solutions[k];
    if (j == 1) return m.pos(0.0);
    if (j == 2) return m.neg(0.0);
    return m.at(times[j]);
  });
  const kernels::Table U = kernels::synthesize_parallel(V, T);
  for (std::size_t q = 0; q < pts.size(); ++q) {
    if (on_boundary[q]) {
      for (std::size_t j = 0; j < times.size(); ++j) rep.boundary = std::max(rep.boundary, std::abs(U(q, j)));
      continue;
    }
    rep.dezin = std::max(rep.dezin, std::abs(U(q, 0) - p.lambda * U(q, 1)));
    rep.gluing = std::max(rep.gluing, std::abs(U(q, 1) - U(q, 2)));
    rep.gluing_eps6 = std::max(rep.gluing_eps6, std::abs(U(q, 3) - U(q, 4)));
    rep.gluing_eps9 = std::max(rep.gluing_eps9, std::abs(U(q, 5) - U(q, 6)));
  }

  // Per-mode agreement with the time-stepping oracles.
  const std::size_t checked = opts.pde_modes > 0 ? std::min<std::size_t>(K, opts.pde_modes) : K;
  const TimeGrid gpos{0.0, p.beta, opts.pde_steps, l1_grading(p.rho)};
  const TimeGrid gneg{-p.alpha, 0.0, opts.pde_steps, 1.0};
  const auto errs = kernels::map_parallel(2 * checked, [&](std::size_t i) {
    const ModeSolution& m = sol.mode_solutions[i / 2];
    const TimeFunction q = m.source_function();
    if (i % 2 == 0) {
      const ModeTrace tr = l1_caputo_solve(m.lambda_k, p.rho, q, m.a, gpos);
      return compare_mode([&](double t) { return m.pos(t); }, tr, opts.pde_stride).max_abs;
    }
    const ModeTrace tr = parabolic_solve(m.lambda_k, q, m.a, gneg);
    return compare_mode([&](double t) { return m.neg(t); }, tr, opts.pde_stride).max_abs;
  });
  for (std::size_t i = 0; i < errs.size(); ++i) {
    double& slot = i % 2 == 0 ? rep.pde_pos : rep.pde_neg;
    slot = std::max(slot, errs[i]);
  }
  rep.pde_modes_checked = static_cast<int>(checked);
  return rep;
}

}  // namespace dezin
