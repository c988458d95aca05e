#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace dezin {

/// Scalar function of time used for g(t) and the per-mode sources F_k(t).
class TimeFunction {
 public:
  struct Constant {
    double c = 0.0;
  };
  /// sum_j coeffs[j] t^j
  struct Polynomial {
    std::vector<double> coeffs;
  };
  /// a e^{b t}
  struct Exponential {
    double a = 1.0;
    double b = 0.0;
  };
  /// Table (t_i, v_i), t strictly increasing. order 1: piecewise linear,
  /// order 3: local cubic Lagrange through the four nearest samples.
  struct Sampled {
    std::vector<double> t;
    std::vector<double> v;
    int order = 1;
  };
  struct Callable {
    std::function<double(double)> fn;
  };
  using Rep = std::variant<Constant, Polynomial, Exponential, Sampled, Callable>;

  TimeFunction() : rep_(Constant{0.0}) {}
  explicit TimeFunction(Rep rep);

  static TimeFunction constant(double c) { return TimeFunction(Constant{c}); }
  static TimeFunction polynomial(std::vector<double> coeffs) {
    return TimeFunction(Polynomial{std::move(coeffs)});
  }
  static TimeFunction exponential(double a, double b) { return TimeFunction(Exponential{a, b}); }
  static TimeFunction sampled(std::vector<double> t, std::vector<double> v, int order = 1) {
    return TimeFunction(Sampled{std::move(t), std::move(v), order});
  }
  static TimeFunction callable(std::function<double(double)> fn) {
    return TimeFunction(Callable{std::move(fn)});
  }
  /// Reads a two-column CSV (t,value); a non-numeric first line is skipped.
  static TimeFunction from_table_file(const std::string& path, int order = 1);

  double operator()(double t) const;

  const Rep& rep() const { return rep_; }
  bool is_zero() const;
  /// Interior breakpoints where the function may lose smoothness (sampled tables).
  std::vector<double> knots() const;
  /// Non-empty only for tables: the interval on which the function is defined.
  bool has_bounded_support() const { return std::holds_alternative<Sampled>(rep_); }
  double support_lo() const;
  double support_hi() const;

 private:
  Rep rep_;
};

/// s * F, keeping the closed-form kind where there is one.
TimeFunction scaled(const TimeFunction& F, double s);

/// Reads a two-column numeric CSV into (first, second) column vectors.
void read_two_column_csv(const std::string& path, std::vector<double>& a, std::vector<double>& b);

}  // namespace dezin
