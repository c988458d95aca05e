#pragma once

// Reference values computed independently of the library's evaluation paths.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<80>>;

// E_{rho,mu}(z) by its power series in 80-digit arithmetic. Reliable while
// |z|^{1/rho} stays below about 100.
inline double ml_series(double rho, double mu, double z) {
  const big Z(z), R(rho), M(mu);
  big sum = 0, zk = 1;
  for (int k = 0; k < 5000; ++k) {
    const big term = zk / boost::multiprecision::tgamma(R * k + M);
    sum += term;
    if (k > 10 && abs(term) < big("1e-40") * (1 + abs(sum))) break;
    zk *= Z;
  }
  return static_cast<double>(sum);
}

// E_rho(-x), 0 < rho < 1, from its completely monotone integral form
// (1/pi) int_0^inf e^{-r x^{1/rho}} r^{rho-1} sin(rho pi) / (r^{2rho} + 2 r^rho cos(rho pi) + 1) dr.
inline double ml_laplace(double rho, double x) {
  const double pi = std::numbers::pi;
  const double s = std::sin(rho * pi), c = std::cos(rho * pi);
  const double y = std::pow(x, 1.0 / rho);
  auto f = [&](double r) {
    const double rr = std::pow(r, rho);
    return std::exp(-r * y) * rr / r * s / (rr * rr + 2.0 * rr * c + 1.0);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  const double split = 1.0 / std::max(y, 1.0);
  return (ts.integrate(f, 0.0, split) + es.integrate(f, split, std::numeric_limits<double>::infinity())) / pi;
}

// int_a^b f with tanh-sinh (tolerates integrable endpoint singularities).
inline double integrate(const std::function<double(double)>& f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> ts(15);
  return ts.integrate(f, a, b, 1e-14);
}

// int_a^b f, split at the given interior points, adaptive Gauss-Kronrod on each piece.
inline double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i])
      s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 8, 1e-12);
  return s;
}

}  // namespace oracle
