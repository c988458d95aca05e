#pragma once

#include <stdexcept>
#include <string>

namespace dezin {

/// Raised when no evaluation regime reaches the requested accuracy.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Argument of E_{rho,mu}(z). Only the closed negative real axis is supported.
struct MLQuery {
  double rho = 1.0;  // (0, 1]
  double mu = 1.0;   // > 0
  double z = 0.0;    // <= 0
};

struct MLConfig {
  /// |z| at or below which the power series is tried first. The series is
  /// still rejected when cancellation would exceed abs_tol.
  double series_cutoff = 5.0;
  /// Maximum number of terms of the large-argument expansion.
  int asym_terms = 10;
  double abs_tol = 1e-12;

  void validate() const;
};

/// Gamma function. Throws std::domain_error at 0, -1, -2, ...
double gamma_fn(double x);

/// 1/Gamma(x), with the value 0 at the poles of Gamma.
double rgamma(double x);

/// Two-parameter Mittag-Leffler function E_{rho,mu}(z) for z <= 0.
///
/// Regimes: power series for small |z| (guarded against cancellation),
/// the algebraic large-argument expansion truncated at its smallest term,
/// and in between a trapezoidal inversion of the Laplace transform
/// s^{rho-mu} / (s^rho - z) along a parabolic Bromwich contour. For rho < 1
/// and z <= 0 that transform has no poles on the principal sheet, so the
/// contour only has to avoid the branch cut.
double ml_eval(const MLQuery& q, const MLConfig& cfg = {});

inline double ml_eval(double rho, double mu, double z, const MLConfig& cfg = {}) {
  return ml_eval(MLQuery{rho, mu, z}, cfg);
}

/// Classical one-parameter function E_rho(z) = E_{rho,1}(z).
inline double ml_classic(double rho, double z, const MLConfig& cfg = {}) {
  return ml_eval(MLQuery{rho, 1.0, z}, cfg);
}

/// Duhamel kernel t^{rho-1} E_{rho,rho}(-lam t^rho), t > 0, lam >= 0.
double ml_kernel(double rho, double lam, double t, const MLConfig& cfg = {});

namespace detail {
// Individual regimes, exposed for cross-checking in tests.
// Each returns false when it cannot certify abs_tol; err receives the estimate.
bool ml_series(double rho, double mu, double z, double tol, double& value, double& err);
bool ml_asymptotic(double rho, double mu, double z, int max_terms, double tol, double& value,
                   double& err);
double ml_contour(double rho, double mu, double z);
}  // namespace detail

}  // namespace dezin
