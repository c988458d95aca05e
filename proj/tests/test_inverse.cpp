#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dezin/inverse.hpp"

using namespace dezin;
using std::numbers::pi;

namespace {

std::shared_ptr<const ModeSet> line(int K) {
  const double len[] = {1.0};
  return make_mode_set(BoxDomain::make(len), K);
}

InverseProblem problem(std::shared_ptr<const ModeSet> ms, double lambda, double rho, double t0,
                       TimeFunction g = TimeFunction::constant(1.0), double beta = 1.0) {
  InverseProblem p;
  p.params.rho = rho;
  p.params.alpha = 1.0;
  p.params.beta = beta;
  p.params.lambda = lambda;
  p.params.mode_count = static_cast<int>(ms->size());
  p.g = std::move(g);
  p.t0 = t0;
  p.phi0 = SpectralField::zero(ms);
  return p;
}

// phi0 = u(., t0) of the forward problem with source f g.
SpectralField forward_data(const InverseProblem& p, const SpectralField& f) {
  const auto sol = solve_forward(p.params, f.basis, SourceTerm::separable(f, p.g));
  SpectralField phi{f.basis, mode_values(sol, p.t0)};
  return phi;
}

double rel_error(const SpectralField& a, const SpectralField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.coeffs.size(); ++k) {
    num += (a.coeffs[k] - b.coeffs[k]) * (a.coeffs[k] - b.coeffs[k]);
    den += b.coeffs[k] * b.coeffs[k];
  }
  return std::sqrt(num / den);
}

SpectralField ten_modes(std::shared_ptr<const ModeSet> ms) {
  auto f = SpectralField::zero(ms);
  for (int k = 0; k < 10; ++k) f.coeffs[k] = std::cos(1.3 * k + 0.2) / (1.0 + k);
  return f;
}

}  // namespace

TEST_CASE("problem validation") {
  auto ms = line(5);
  auto p = problem(ms, -1.0, 0.5, 0.5);
  CHECK_NOTHROW(p.validate());
  p.t0 = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.t0 = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  auto q = problem(ms, -1.0, 0.5, 0.5, TimeFunction::polynomial({0.0, 1.0}));
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  // delta_1 = 0 is excluded.
  auto r = problem(ms, std::exp(-pi * pi), 0.5, 0.5);
  CHECK_THROWS_AS(solve_inverse(r, ms), std::invalid_argument);
}

TEST_CASE("denominators for lambda = -1, g = 1 match the closed form") {
  auto ms = line(200);
  const auto p = problem(ms, -1.0, 0.5, 0.5);
  const auto rep = compute_denominators(p, *ms);
  const double tr = std::pow(0.5, 0.5);
  for (std::size_t k = 0; k < ms->size(); ++k) {
    const double lk = (*ms)[k].eigenvalue;
    const double ref = ml_eval(0.5, 1.0, -lk * tr) * (-std::expm1(-lk)) / lk +
                       (std::exp(-lk) + 1.0) * tr * ml_eval(0.5, 1.5, -lk * tr);
    CHECK(rep.Delta[k] == doctest::Approx(ref).epsilon(1e-12));
    CHECK(rep.Delta[k] > 0.0);
    CHECK(rep.term1[k] + rep.term2[k] == doctest::Approx(rep.Delta[k]).epsilon(1e-15));
  }
  CHECK(rep.K0.empty());
  // Both terms decay like 1/lambda_k, so Delta_k lambda_k settles.
  double lo = 1e300, hi = 0.0;
  for (std::size_t k = 99; k < 200; ++k) {
    const double s = rep.Delta[k] * (*ms)[k].eigenvalue;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  MESSAGE("Delta_k lambda_k on k = 100..200 in [" << lo << ", " << hi << "]");
  CHECK(lo > 0.5);
  CHECK(hi < 2.0);
}

TEST_CASE("denominator terms") {
  auto ms = line(3);
  const auto g = TimeFunction::exponential(1.0, -0.5);
  const auto p = problem(ms, 2.0, 0.3, 0.4, g);
  const auto& m = (*ms)[1];
  const auto d = denominator_terms(p, m, 0.4);
  CHECK(d.i_alpha == doctest::Approx(i_k_alpha(g, m.eigenvalue, 1.0)).epsilon(1e-15));
  CHECK(d.i_rho == doctest::Approx(i_k_rho(g, m.eigenvalue, 0.3, 0.4)).epsilon(1e-15));
  CHECK(d.delta == std::exp(-m.eigenvalue) - 2.0);
  CHECK(d.term1 == d.ml * d.i_alpha);
  CHECK(d.term2 == d.delta * d.i_rho);
  CHECK(d.value == d.term1 + d.term2);
}

TEST_CASE("positivity for negative lambda and positive g") {
  auto ms = line(60);
  for (double rho : {0.3, 0.5, 0.8})
    for (double t0 : {0.05, 0.5, 0.95})
      for (double lam : {-0.1, -1.0, -10.0}) {
        const auto p = problem(ms, lam, rho, t0, TimeFunction::exponential(2.0, 0.7));
        const auto rep = compute_denominators(p, *ms);
        for (double D : rep.Delta) CHECK(D > 0.0);
        CHECK(rep.K0.empty());
      }
}

TEST_CASE("homogeneous data gives f = 0") {
  auto ms = line(8);
  const auto p = problem(ms, -1.0, 0.5, 0.5);
  const auto sol = solve_inverse(p, ms);
  for (double c : sol.f.coeffs) CHECK(c == 0.0);
  CHECK(verify_overdetermination(sol, p) == 0.0);
}

TEST_CASE("manufactured round trip recovers v_1") {
  auto ms = line(10);
  auto p = problem(ms, -1.0, 0.5, 0.5);
  const auto f = SpectralField::unit(ms, 1);
  p.phi0 = forward_data(p, f);
  const auto sol = solve_inverse(p, ms);
  CHECK(std::abs(sol.f.coeffs[0] - 1.0) <= 1e-8);
  for (std::size_t k = 1; k < 10; ++k) CHECK(std::abs(sol.f.coeffs[k]) <= 1e-12);
  CHECK(verify_overdetermination(sol, p) <= 1e-6);
  CHECK(sol.free_indices.empty());
}

TEST_CASE("round trip across lambda classes and orders") {
  auto ms = line(16);
  const auto f = ten_modes(ms);
  for (double lam : {-1.0, 0.5, 2.0})
    for (double rho : {0.3, 0.5, 0.8}) {
      auto p = problem(ms, lam, rho, 0.6, TimeFunction::exponential(1.0, -0.5));
      p.phi0 = forward_data(p, f);
      const auto sol = solve_inverse(p, ms);
      INFO("lambda=" << lam << " rho=" << rho);
      CHECK(rel_error(sol.f, f) <= 1e-6);
      // Defining relation for every mode outside the zero set.
      const auto& r = sol.report;
      for (std::size_t k = 0; k < 16; ++k) {
        const double scale = std::abs(r.delta[k] * p.phi0.coeffs[k]) + 1e-300;
        CHECK(std::abs(sol.f.coeffs[k] * r.Delta[k] - r.delta[k] * p.phi0.coeffs[k]) <= 1e-10 * std::max(1.0, scale));
      }
      CHECK(verify_overdetermination(sol, p) <= 1e-6);
    }
}

TEST_CASE("round trip in 2-D") {
  const double len[] = {1.0, 1.5};
  auto ms = make_mode_set(BoxDomain::make(len), 20);
  const auto f = ten_modes(ms);
  auto p = problem(ms, 2.0, 0.5, 0.3, TimeFunction::polynomial({1.0, 0.25}));
  p.phi0 = forward_data(p, f);
  const auto sol = solve_inverse(p, ms);
  CHECK(rel_error(sol.f, f) <= 1e-6);
  CHECK(verify_overdetermination(sol, p, 11) <= 1e-6);
}

TEST_CASE("free f values do not matter when the zero set is empty") {
  auto ms = line(10);
  auto p = problem(ms, 2.0, 0.5, 0.5);
  p.phi0 = forward_data(p, ten_modes(ms));
  InverseOptions opts;
  opts.free_f[1] = 3.0;
  const auto a = solve_inverse(p, ms);
  const auto b = solve_inverse(p, ms, opts);
  CHECK(a.f.coeffs == b.f.coeffs);
  CHECK(b.free_indices.empty());
}

TEST_CASE("corrupting f_1 moves the overdetermination residual predictably") {
  auto ms = line(10);
  auto p = problem(ms, -1.0, 0.5, 0.5);
  p.phi0 = forward_data(p, SpectralField::unit(ms, 1));
  auto sol = solve_inverse(p, ms);
  auto bad = sol.f;
  bad.coeffs[0] *= 1.1;
  sol.u = solve_forward(p.params, ms, SourceTerm::separable(bad, p.g));
  const double expected = 0.1 * std::abs(sol.report.Delta[0] / sol.report.delta[0] * sol.f.coeffs[0]) * std::sqrt(2.0);
  CHECK(verify_overdetermination(sol, p) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("non-uniqueness at a root of Delta_1") {
  auto ms = line(10);
  auto p = problem(ms, 2.0, 0.5, 0.5);
  const double t0 = find_denominator_root(p, (*ms)[0]);
  MESSAGE("root t0* = " << t0);
  REQUIRE(t0 > 0.0);
  REQUIRE(t0 < 1.0);
  p.t0 = t0;
  const auto rep = compute_denominators(p, *ms);
  CHECK(rep.K0 == std::vector<int>{1});

  auto phi = SpectralField::zero(ms);
  phi.coeffs[1] = 1.0;
  phi.coeffs[2] = 0.3;
  p.phi0 = phi;
  double f1[2];
  for (int i = 0; i < 2; ++i) {
    InverseOptions opts;
    opts.free_f[1] = i;
    const auto sol = solve_inverse(p, ms, opts);
    CHECK(sol.free_indices == std::vector<int>{1});
    f1[i] = sol.f.coeffs[0];
    CHECK(verify_overdetermination(sol, p) <= 1e-6);
  }
  CHECK(f1[0] != f1[1]);

  p.phi0.coeffs[0] = 0.5;
  try {
    (void)solve_inverse(p, ms);
    FAIL("expected NoSolution");
  } catch (const NoSolution& e) {
    CHECK(e.indices() == std::vector<int>{1});
  }
}

TEST_CASE("zero set is finite and bounded away beyond the threshold") {
  auto ms = line(200);
  // Large t0: (N1) holds, so the bound is claimed from k = 1.
  const auto p = problem(ms, 2.0, 0.5, 4.0, TimeFunction::constant(1.0), 5.0);
  const auto rep = compute_denominators(p, *ms);
  CHECK(rep.n1_satisfied);
  const auto tab = bound_diagnostics(rep, *ms, 2.0);
  CHECK(tab.regime_start == 1);
  CHECK(tab.empirical_c > 0.0);
  CHECK_FALSE(tab.any_violation);
  for (const auto& row : tab.rows) CHECK(row.scaled >= tab.empirical_c);
  CHECK(rep.K0.empty());

  // Tiny t0 violates (N1): the bound is only claimed past k_l.
  const auto q = problem(ms, 2.0, 0.5, 1e-4);
  const auto rq = compute_denominators(q, *ms);
  CHECK_FALSE(rq.n1_satisfied);
  CHECK(rq.k_l > 1);
  const auto tq = bound_diagnostics(rq, *ms, 2.0);
  CHECK(tq.regime_start == rq.k_l);
  for (const auto& row : tq.rows) CHECK(row.in_regime == (row.k >= rq.k_l));

  const auto neg = problem(ms, -1.0, 0.5, 0.5);
  const auto tn = bound_diagnostics(compute_denominators(neg, *ms), *ms, -1.0);
  CHECK(tn.empirical_c > 0.0);
  CHECK_FALSE(tn.any_violation);
}

TEST_CASE("near-zero denominators raise a precision warning") {
  auto ms = line(5);
  auto p = problem(ms, 2.0, 0.5, 0.5);
  const double t0 = find_denominator_root(p, (*ms)[0]);
  p.t0 = t0 * (1.0 + 1e-11);
  const auto rep = compute_denominators(p, *ms);
  MESSAGE("Delta_1 = " << rep.Delta[0]);
  CHECK(rep.K0.empty());
  CHECK(rep.precision_loss == std::vector<int>{1});
  p.phi0 = SpectralField::unit(ms, 2);
  const auto sol = solve_inverse(p, ms);
  CHECK_FALSE(sol.warnings.empty());
}

TEST_CASE("root finder rejects a denominator without a sign change") {
  auto ms = line(3);
  const auto p = problem(ms, -1.0, 0.5, 0.5);
  CHECK_THROWS_AS(find_denominator_root(p, (*ms)[0]), std::runtime_error);
}
