#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dezin/eigenbasis.hpp"
#include "oracles.hpp"

using namespace dezin;
using std::numbers::pi;

namespace {

BoxDomain box(std::initializer_list<double> l) {
  std::vector<double> v(l);
  return BoxDomain::make(v);
}

// Brute force: every multi-index up to nmax in extended precision, sorted by
// eigenvalue with lexicographic tie-break.
std::vector<std::pair<double, std::array<int, 3>>> brute(const BoxDomain& d, int nmax) {
  std::vector<std::pair<long double, std::array<int, 3>>> all;
  const int n2 = d.dims >= 2 ? nmax : 1, n3 = d.dims >= 3 ? nmax : 1;
  const long double pl = std::numbers::pi_v<long double>;
  for (int a = 1; a <= nmax; ++a)
    for (int b = 1; b <= n2; ++b)
      for (int c = 1; c <= n3; ++c) {
        std::array<int, 3> n{a, b, c};
        long double lam = 0.0L;
        for (int i = 0; i < d.dims; ++i) {
          const long double q = n[i] * pl / static_cast<long double>(d.lengths[i]);
          lam += q * q;
        }
        all.push_back({lam, n});
      }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    if (std::abs(x.first - y.first) > 1e-15L * x.first) return x.first < y.first;
    return x.second < y.second;
  });
  std::vector<std::pair<double, std::array<int, 3>>> out;
  for (const auto& [l, n] : all) out.push_back({static_cast<double>(l), n});
  return out;
}

}  // namespace

TEST_CASE("1-D eigenvalues") {
  const auto m = enumerate_modes(box({1.0}), 3);
  REQUIRE(m.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(m[k].eigenvalue == doctest::Approx((k + 1) * (k + 1) * pi * pi).epsilon(1e-15));
  CHECK(enumerate_modes(box({2.0}), 1)[0].eigenvalue == doctest::Approx(pi * pi / 4).epsilon(1e-15));
}

TEST_CASE("unit square ordering and ties") {
  const auto m = enumerate_modes(box({1.0, 1.0}), 3);
  CHECK(m[0].eigenvalue == doctest::Approx(2 * pi * pi));
  CHECK(m[1].eigenvalue == doctest::Approx(5 * pi * pi));
  CHECK(m[2].eigenvalue == doctest::Approx(5 * pi * pi));
  CHECK(m[1].multi_index[0] == 1);
  CHECK(m[1].multi_index[1] == 2);
  CHECK(m[2].multi_index[0] == 2);
  CHECK(m[2].multi_index[1] == 1);
  for (int k = 0; k < 3; ++k) CHECK(m[k].index == k + 1);
}

TEST_CASE("enumeration agrees with brute force") {
  for (auto d : {box({1.0}), box({1.0, 2.0}), box({1.0, 1.0, 1.0}), box({0.7, 1.3, 2.1})}) {
    const int K = 60;
    const auto m = enumerate_modes(d, K);
    const auto ref = brute(d, d.dims == 1 ? 100 : 40);
    for (int k = 0; k < K; ++k) {
      CHECK(m[k].eigenvalue == doctest::Approx(ref[k].first).epsilon(1e-14));
      for (int i = 0; i < d.dims; ++i) CHECK(m[k].multi_index[i] == ref[k].second[i]);
    }
    for (int k = 1; k < K; ++k) CHECK(m[k - 1].eigenvalue <= m[k].eigenvalue);
  }
}

TEST_CASE("eval_mode reference values") {
  const auto m1 = enumerate_modes(box({1.0}), 2);
  const double half[] = {0.5};
  CHECK(eval_mode(m1[0], half) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(eval_mode(m1[1], half)) <= 1e-15);
  const auto m2 = enumerate_modes(box({1.0, 1.0}), 1);
  const double c[] = {0.5, 0.5};
  CHECK(eval_mode(m2[0], c) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("eval_mode vanishes on the boundary and rejects outside points") {
  const auto d = box({1.0, 2.0});
  const auto m = enumerate_modes(d, 20);
  for (const auto& mode : m)
    for (double s : {0.0, 0.3, 0.77, 1.0}) {
      const double e1[] = {0.0, 2.0 * s}, e2[] = {1.0, 2.0 * s}, e3[] = {s, 0.0}, e4[] = {s, 2.0};
      CHECK(eval_mode(mode, e1) == 0.0);
      CHECK(eval_mode(mode, e2) == 0.0);
      CHECK(eval_mode(mode, e3) == 0.0);
      CHECK(eval_mode(mode, e4) == 0.0);
    }
  const double out[] = {1.1, 0.5};
  CHECK_THROWS_AS(eval_mode(m[0], out), std::out_of_range);
  const double wrong_dims[] = {0.5};
  CHECK_THROWS_AS(eval_mode(m[0], wrong_dims), std::out_of_range);
}

TEST_CASE("multiplicity groups") {
  const auto sq = enumerate_modes(box({1.0, 1.0}), 3);
  const auto g = multiplicity_groups(sq);
  REQUIRE(g.size() == 2);
  CHECK(g[0] == std::vector<int>{1});
  CHECK(g[1] == std::vector<int>{2, 3});

  const auto line = enumerate_modes(box({1.0}), 5);
  CHECK(multiplicity_groups(line).size() == 5);

  // l = (1,2): eigenvalues pi^2 (n1^2 + n2^2/4): 1.25, 2, 3.25, 4.25 -> all simple.
  const auto rect = enumerate_modes(box({1.0, 2.0}), 4);
  const auto gr = multiplicity_groups(rect);
  REQUIRE(gr.size() == 4);
  CHECK(rect[0].eigenvalue == doctest::Approx(1.25 * pi * pi));
  CHECK(rect[1].eigenvalue == doctest::Approx(2.0 * pi * pi));
  CHECK(rect[2].eigenvalue == doctest::Approx(3.25 * pi * pi));
  CHECK(rect[3].eigenvalue == doctest::Approx(4.25 * pi * pi));
}

TEST_CASE("discrete orthonormality") {
  for (auto d : {box({1.0}), box({1.0, 2.0})}) {
    const int K = d.dims == 1 ? 50 : 30;
    const auto m = enumerate_modes(d, K);
    int nmax = 1;
    for (const auto& mode : m)
      for (int i = 0; i < d.dims; ++i) nmax = std::max(nmax, mode.multi_index[i]);
    // Gauss-Legendre panels, at least 8 points per half-wave.
    const auto& gl = boost::math::quadrature::gauss<double, 8>::abscissa();
    const auto& gw = boost::math::quadrature::gauss<double, 8>::weights();
    std::array<std::vector<double>, 2> x, w;
    for (int i = 0; i < d.dims; ++i) {
      const int panels = 2 * nmax;
      const double h = d.lengths[i] / panels;
      for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * h;
        for (std::size_t j = 0; j < gl.size(); ++j)
          for (int sgn : {-1, 1}) {
            if (gl[j] == 0.0 && sgn < 0) continue;
            x[i].push_back(mid + sgn * gl[j] * h / 2);
            w[i].push_back(gw[j] * h / 2);
          }
      }
    }
    double worst = 0.0;
    const std::size_t ny = d.dims == 2 ? x[1].size() : 1;
    std::vector<double> gram(K * K, 0.0), vals(K);
    for (std::size_t a = 0; a < x[0].size(); ++a)
      for (std::size_t b = 0; b < ny; ++b) {
        const double pt[] = {x[0][a], d.dims == 2 ? x[1][b] : 0.0};
        const double wt = w[0][a] * (d.dims == 2 ? w[1][b] : 1.0);
        for (int k = 0; k < K; ++k) vals[k] = eval_mode_unchecked(m[k], std::span<const double>(pt, d.dims));
        for (int i = 0; i < K; ++i)
          for (int j = 0; j < K; ++j) gram[i * K + j] += wt * vals[i] * vals[j];
      }
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) worst = std::max(worst, std::abs(gram[i * K + j] - (i == j ? 1.0 : 0.0)));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("finite-difference eigen-residual is second order") {
  const auto d = box({1.0, 2.0});
  const auto m = enumerate_modes(d, 6);
  const double pt[] = {0.37, 1.21};
  for (const auto& mode : m) {
    double err[2];
    for (int r = 0; r < 2; ++r) {
      const double h = 1e-2 / (1 << r);
      double lap = 0.0;
      for (int i = 0; i < 2; ++i) {
        double p[2] = {pt[0], pt[1]}, q[2] = {pt[0], pt[1]};
        p[i] += h;
        q[i] -= h;
        lap += (eval_mode(mode, p) - 2.0 * eval_mode(mode, pt) + eval_mode(mode, q)) / (h * h);
      }
      err[r] = std::abs(-lap - mode.eigenvalue * eval_mode(mode, pt));
    }
    CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(box({}), std::invalid_argument);
  CHECK_THROWS_AS(box({1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(box({1.0, 1.0, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_modes(box({1.0}), 0), std::invalid_argument);
  const auto ms = make_mode_set(box({1.0, 1.0}), 7);
  CHECK(ms->size() == 7);
  CHECK(ms->domain.dims == 2);
}
