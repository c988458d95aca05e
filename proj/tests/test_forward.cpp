#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dezin/forward.hpp"

using namespace dezin;
using std::numbers::pi;

namespace {

std::shared_ptr<const ModeSet> line(int K) {
  const double len[] = {1.0};
  return make_mode_set(BoxDomain::make(len), K);
}

ProblemParams params(double lambda, int K, double rho = 0.5) {
  ProblemParams p;
  p.rho = rho;
  p.alpha = 1.0;
  p.beta = 1.0;
  p.lambda = lambda;
  p.mode_count = K;
  return p;
}

const double kResonant = std::exp(-pi * pi);

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(params(0.0, 5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(params(-1.0, 5, 1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(params(-1.0, 5, 0.0).validate(), std::invalid_argument);
  auto p = params(-1.0, 5);
  p.alpha = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_NOTHROW(params(-1.0, 5).validate());
}

TEST_CASE("solvability: negative lambda") {
  auto ms = line(20);
  const auto r = analyze_solvability(params(-1.0, 20), *ms);
  CHECK(r.lambda_class == LambdaClass::neg);
  CHECK(r.delta[0] == doctest::Approx(std::exp(-pi * pi) + 1.0).epsilon(1e-15));
  CHECK(std::abs(r.delta[0] - 1.0000517239) <= 1e-9);
  CHECK(r.resonant_set.empty());
  CHECK_FALSE(r.lambda0.has_value());
  CHECK(r.lower_bound == 1.0);
  CHECK(r.quoted_bound == doctest::Approx(1.0 + std::exp(-pi * pi)));
  // e^{-lambda_k alpha} underflows for large k, leaving delta_k = |lambda| exactly.
  for (double d : r.delta) {
    CHECK(std::abs(d) >= r.lower_bound);
    CHECK(std::abs(d) <= r.quoted_bound);
  }
}

TEST_CASE("solvability: engineered resonance") {
  auto ms = line(10);
  const auto r = analyze_solvability(params(kResonant, 10), *ms);
  CHECK(r.lambda_class == LambdaClass::unit_interval);
  CHECK(r.delta[0] == 0.0);
  CHECK(r.resonant_set == std::vector<int>{1});
  REQUIRE(r.lambda0.has_value());
  CHECK(*r.lambda0 == doctest::Approx(pi * pi).epsilon(1e-14));
  // Past k0 every denominator is at least lambda/2.
  for (std::size_t k = r.k0 - 1; k < r.delta.size(); ++k) CHECK(std::abs(r.delta[k]) >= kResonant / 2);
}

TEST_CASE("solvability: lambda >= 1") {
  auto ms = line(10);
  const auto r = analyze_solvability(params(2.0, 10), *ms);
  CHECK(r.lambda_class == LambdaClass::ge_one);
  CHECK(r.lower_bound == doctest::Approx(2.0 - std::exp(-pi * pi)).epsilon(1e-15));
  for (double d : r.delta) CHECK(std::abs(d) >= r.lower_bound);
}

TEST_CASE("resonant set is empty outside the unit interval") {
  auto ms = line(50);
  for (double lam : {-1e3, -2.0, -1e-8, 1.0, 1.5, 1e4}) {
    const auto r = analyze_solvability(params(lam, 50), *ms);
    CHECK(r.resonant_set.empty());
    CHECK(r.lambda0.has_value() == false);
  }
  for (double lam : {0.9, 0.1, 1e-3}) {
    const auto r = analyze_solvability(params(lam, 50), *ms);
    CHECK(r.lambda0.has_value());
  }
}

TEST_CASE("homogeneous problem gives u = 0") {
  auto ms = line(8);
  const auto sol = solve_forward(params(-1.0, 8), ms, SourceTerm::none(8));
  for (const auto& m : sol.mode_solutions) CHECK(m.a == 0.0);
  const double x[] = {0.3};
  for (double t : {-1.0, -0.2, 0.0, 0.4, 1.0}) CHECK(eval_u(sol, x, t) == 0.0);
  const auto c = check_conditions(sol);
  CHECK(c.dezin == 0.0);
  CHECK(c.gluing == 0.0);
  CHECK(c.boundary == 0.0);
  CHECK(c.pde_pos == 0.0);
  CHECK(c.pde_neg == 0.0);
}

TEST_CASE("manufactured problem: coefficient and conditions") {
  auto ms = line(10);
  const auto src = SourceTerm::separable(SpectralField::unit(ms, 1), TimeFunction::constant(1.0));
  const auto sol = solve_forward(params(-1.0, 10), ms, src);
  const double l1 = pi * pi;
  const double a1 = ((1.0 - std::exp(-l1)) / l1) / (std::exp(-l1) + 1.0);
  CHECK(std::abs(sol.mode_solutions[0].a - a1) <= 1e-15);
  for (std::size_t k = 1; k < sol.mode_solutions.size(); ++k) CHECK(sol.mode_solutions[k].a == 0.0);

  const auto c = check_conditions(sol);
  MESSAGE("dezin " << c.dezin << " gluing " << c.gluing << " eps6 " << c.gluing_eps6 << " eps9 " << c.gluing_eps9
                   << " pde+ " << c.pde_pos << " pde- " << c.pde_neg);
  CHECK(c.dezin <= 1e-6);
  CHECK(c.gluing <= 1e-6);
  // The t^rho onset makes the eps-gap shrink like eps^rho.
  CHECK(c.gluing_eps9 <= 1e-6);
  CHECK(c.gluing_eps9 < c.gluing_eps6);
  CHECK(c.boundary <= 1e-12);
  CHECK(c.pde_pos <= 5e-3);
  CHECK(c.pde_neg <= 1e-6);
  CHECK(c.pde_modes_checked == 10);
}

TEST_CASE("per-mode gluing and Dezin identity") {
  auto ms = line(12);
  const auto f = project([](std::span<const double> x) { return x[0] * (1.0 - x[0]) * std::exp(x[0]); }, ms);
  for (double lam : {-1.0, 0.5, 2.0}) {
    const auto p = params(lam, 12, 0.3);
    const auto sol = solve_forward(p, ms, SourceTerm::separable(f, TimeFunction::polynomial({1.0, 0.5})));
    for (const auto& m : sol.mode_solutions) {
      CHECK(std::abs(m.pos(1e-100) - m.a) <= 1e-10);
      CHECK(std::abs(m.neg(0.0) - m.a) <= 1e-15);
      double prev = std::abs(m.pos(1e-6) - m.neg(-1e-6));
      const double g9 = std::abs(m.pos(1e-9) - m.neg(-1e-9));
      CHECK(g9 <= prev + 1e-15);
      CHECK(std::abs(m.neg(-p.alpha) - p.lambda * m.a) <= 1e-10);
    }
  }
}

TEST_CASE("corrupting a_1 is detected") {
  auto ms = line(10);
  const auto src = SourceTerm::separable(SpectralField::unit(ms, 1), TimeFunction::constant(1.0));
  auto sol = solve_forward(params(-1.0, 10), ms, src);
  sol.mode_solutions[0].a *= 1.1;
  const auto c = check_conditions(sol);
  CHECK(c.dezin > 1e-3);
}

TEST_CASE("resonance: orthogonal data admits any free coefficient") {
  auto ms = line(10);
  const auto src = SourceTerm::separable(SpectralField::unit(ms, 2), TimeFunction::constant(1.0));
  for (double a1 : {0.75, -2.0}) {
    ForwardOptions opts;
    opts.free_coefficients[1] = a1;
    const auto sol = solve_forward(params(kResonant, 10), ms, src, opts);
    CHECK(sol.mode_solutions[0].is_free);
    CHECK(sol.mode_solutions[0].a == a1);
    const auto c = check_conditions(sol);
    // delta_2 is about -5e-5 here, so a_2 is in the hundreds; the L1 error
    // scales with the mode amplitude.
    double amp = 1.0;
    for (const auto& m : sol.mode_solutions) amp = std::max(amp, std::abs(m.a));
    CHECK(c.dezin <= 1e-6);
    CHECK(c.gluing <= 1e-6);
    CHECK(c.boundary <= 1e-12);
    CHECK(c.pde_pos <= 5e-3 * amp);
    CHECK(c.pde_neg <= 1e-6 * amp);
  }
  const auto def = solve_forward(params(kResonant, 10), ms, src);
  CHECK(def.mode_solutions[0].a == 0.0);
}

TEST_CASE("resonance: non-orthogonal data has no solution") {
  auto ms = line(10);
  const auto src = SourceTerm::separable(SpectralField::unit(ms, 1), TimeFunction::constant(1.0));
  try {
    (void)solve_forward(params(kResonant, 10), ms, src);
    FAIL("expected NoSolution");
  } catch (const NoSolution& e) {
    CHECK(e.indices() == std::vector<int>{1});
  }
}

TEST_CASE("free coefficients do not change a uniquely solvable problem") {
  auto ms = line(10);
  const auto f = project([](std::span<const double> x) { return std::sin(3.0 * x[0]); }, ms);
  const auto src = SourceTerm::separable(f, TimeFunction::exponential(1.0, -0.5));
  ForwardOptions opts;
  opts.free_coefficients[1] = 5.0;
  opts.free_coefficients[3] = -1.0;
  const auto a = solve_forward(params(-1.0, 10), ms, src);
  const auto b = solve_forward(params(-1.0, 10), ms, src, opts);
  for (std::size_t k = 0; k < 10; ++k) {
    CHECK(a.mode_solutions[k].a == b.mode_solutions[k].a);
    CHECK_FALSE(b.mode_solutions[k].is_free);
  }
}

TEST_CASE("per-mode sources match the separable form") {
  auto ms = line(6);
  const auto f = project([](std::span<const double> x) { return x[0] * (1.0 - x[0]); }, ms);
  const auto g = TimeFunction::polynomial({1.0, -0.3});
  std::vector<TimeFunction> Fk;
  for (double c : f.coeffs) Fk.push_back(scaled(g, c));
  const auto a = solve_forward(params(2.0, 6), ms, SourceTerm::separable(f, g));
  const auto b = solve_forward(params(2.0, 6), ms, SourceTerm::per_mode(Fk));
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(a.mode_solutions[k].a == doctest::Approx(b.mode_solutions[k].a).epsilon(1e-14));
    for (double t : {-0.7, 0.4})
      CHECK(a.mode_solutions[k].at(t) == doctest::Approx(b.mode_solutions[k].at(t)).epsilon(1e-12));
  }
}

TEST_CASE("eval_u sums the modes and checks its arguments") {
  const double len[] = {1.0, 2.0};
  auto ms = make_mode_set(BoxDomain::make(len), 6);
  const auto f = project([](std::span<const double> x) { return x[0] * (1.0 - x[0]) * x[1]; }, ms);
  const auto sol = solve_forward(params(-0.5, 6), ms, SourceTerm::separable(f, TimeFunction::constant(1.0)));
  const double x[] = {0.3, 1.1};
  for (double t : {-0.9, 0.0, 0.6}) {
    const auto T = mode_values(sol, t);
    double s = 0.0;
    for (std::size_t k = 0; k < T.size(); ++k) s += T[k] * eval_mode((*ms)[k], x);
    CHECK(eval_u(sol, x, t) == doctest::Approx(s).epsilon(1e-14));
  }
  CHECK_THROWS_AS(eval_u(sol, x, 1.5), std::out_of_range);
  CHECK_THROWS_AS(eval_u(sol, x, -1.01), std::out_of_range);
  const double out[] = {0.3, 2.5};
  CHECK_THROWS_AS(eval_u(sol, out, 0.1), std::out_of_range);
  const double edge[] = {0.3, 2.0};
  CHECK(std::abs(eval_u(sol, edge, 0.5)) <= 1e-12);
}

TEST_CASE("decay diagnostic") {
  auto ms = line(40);
  const auto smooth = project([](std::span<const double> x) { return std::sin(pi * x[0]) * x[0]; }, ms);
  const auto a = solve_forward(params(-1.0, 40), ms, SourceTerm::separable(smooth, TimeFunction::constant(1.0)));
  CHECK_FALSE(a.diagnostics.decay_warning);
  SpectralField rough = SpectralField::zero(ms);
  for (std::size_t k = 0; k < rough.coeffs.size(); ++k) rough.coeffs[k] = 1.0 / std::sqrt(k + 1.0);
  const auto b = solve_forward(params(-1.0, 40), ms, SourceTerm::separable(rough, TimeFunction::constant(1.0)));
  CHECK(b.diagnostics.decay_warning);
  CHECK_FALSE(b.diagnostics.warnings.empty());
  CHECK(b.diagnostics.tail_mass > a.diagnostics.tail_mass);
}
