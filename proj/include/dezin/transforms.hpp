#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dezin/eigenbasis.hpp"
#include "dezin/mlf.hpp"
#include "dezin/time_function.hpp"

namespace dezin {

using SpatialFunction = std::function<double(std::span<const double>)>;

/// Coefficients of a function against the retained modes of a ModeSet.
struct SpectralField {
  std::shared_ptr<const ModeSet> basis;
  std::vector<double> coeffs;

  static SpectralField zero(std::shared_ptr<const ModeSet> basis);
  /// The normalized eigenfunction v_k (1-based k).
  static SpectralField unit(std::shared_ptr<const ModeSet> basis, int k);

  void validate() const;
  double operator()(std::span<const double> x) const;
  double l2_norm() const;
};

/// Product-integration settings for the singular Duhamel convolution.
struct QuadratureSpec {
  int panels = 256;
  /// Interpolation points per panel (2: linear, 4: cubic, 8: degree 7).
  int order = 4;
  /// Mesh exponent r in s_j = t (j/J)^r; 0 selects r = 1/rho, which makes the
  /// mesh uniform in s^rho.
  double grading = 0.0;

  void validate() const;
  double exponent_for(double rho) const { return grading > 0.0 ? grading : 1.0 / rho; }
};

/// Tensor Gauss-Legendre settings for projections onto the modes.
struct ProjectionSpec {
  /// Panels per axis; 0 picks enough to resolve the highest retained mode.
  int panels = 0;
  int points = 8;
};

/// c_k = (h, v_k) by tensor Gauss-Legendre quadrature.
SpectralField project(const SpatialFunction& h, std::shared_ptr<const ModeSet> basis,
                      const ProjectionSpec& spec = {});

/// sum_k c_k v_k(x)
double synthesize(const SpectralField& field, std::span<const double> x);

/// int_a^b F(s) e^{-lam (s - a)} ds for lam >= 0, a <= b. Closed forms for
/// constant, polynomial and exponential F; Gauss-Legendre panels otherwise,
/// truncated where the weight drops below 1e-18.
double exp_weighted_integral(const TimeFunction& F, double lam, double a, double b);

/// I_k(alpha) = int_{-alpha}^0 g(s) e^{lam(-alpha - s)} ds
double i_k_alpha(const TimeFunction& g, double lam, double alpha);

/// F*_k = int_{-alpha}^0 F_k(s) e^{lam(-alpha - s)} ds
double fstar_k(const TimeFunction& Fk, double lam, double alpha);

/// int_t^0 F(s) e^{lam (t - s)} ds for t <= 0 (the t < 0 particular solution).
double history_integral(const TimeFunction& F, double lam, double t);

/// int_0^t s^{rho-1} E_{rho,rho}(-lam s^rho) F(t - s) ds, t > 0.
double duhamel(const TimeFunction& F, double lam, double rho, double t,
               const QuadratureSpec& quad = {}, const MLConfig& ml = {});

/// I_{k,rho}(t0) = int_0^{t0} s^{rho-1} E_{rho,rho}(-lam s^rho) g(t0 - s) ds
double i_k_rho(const TimeFunction& g, double lam, double rho, double t0,
               const QuadratureSpec& quad = {}, const MLConfig& ml = {});

namespace detail {
/// Product integration on the graded mesh, bypassing the closed forms.
double duhamel_product(const TimeFunction& F, double lam, double rho, double t,
                       const QuadratureSpec& quad, const MLConfig& ml);
}  // namespace detail

enum class SignClass { positive, negative, sign_changing };

struct SignReport {
  SignClass sign = SignClass::sign_changing;
  double min = 0.0;  // min of g over the interval
  double max = 0.0;  // max of g over the interval
};

/// Extrema of g on [lo, hi] from a dense grid refined by golden-section search.
SignReport sign_check(const TimeFunction& g, double lo, double hi);

const char* to_string(SignClass s);

}  // namespace dezin
