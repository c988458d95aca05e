#include "dezin/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace dezin {

namespace {

// (y + d)^p - y^p for y >= 0, d > 0, accurate when d << y.
double pow_diff(double y, double d, double p) {
  if (y <= 0.0) return std::pow(d, p);
  const double r = d / y;
  if (r < 0.1) return std::pow(y, p) * std::expm1(p * std::log1p(r));
  return std::pow(y + d, p) - std::pow(y, p);
}

double phi1(double x) {
  if (x < 1e-8) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

// int_0^1 u e^{-x u} du
double phi2(double x) {
  if (x < 0.05) {
    double term = 1.0, sum = 0.0;
    for (int n = 0; n < 12; ++n) {
      sum += term / (n + 2);
      term *= -x / (n + 1);
    }
    return sum;
  }
  return (phi1(x) - std::exp(-x)) / x;
}

// L1 history: sum over j < n of the Caputo contribution of step j at node n,
// without the 1/Gamma(2-rho) factor.
struct L1Weights {
  const std::vector<double>& t;
  double p;  // 1 - rho
  bool uniform;
  std::vector<double> b;  // uniform: b[m] = (m+1)^p - m^p

  L1Weights(const std::vector<double>& times, double rho, bool uni) : t(times), p(1.0 - rho), uniform(uni) {
    if (uniform) {
      const std::size_t n = t.size();
      b.resize(n);
      for (std::size_t m = 0; m < n; ++m) b[m] = pow_diff(static_cast<double>(m), 1.0, p);
    }
  }
  // Weight multiplying the difference quotient (T_j - T_{j-1}) / tau_j at node n.
  double w(std::size_t n, std::size_t j) const {
    if (uniform) {
      const double h = t[1] - t[0];
      return b[n - j] * std::pow(h, p);
    }
    return pow_diff(t[n] - t[j], t[j] - t[j - 1], p);
  }
};

}  // namespace

void TimeGrid::validate() const {
  if (steps < 2) throw std::invalid_argument("TimeGrid: steps must be >= 2");
  if (!(t_end > t_start)) throw std::invalid_argument("TimeGrid: t_start must be < t_end");
  if (!(grading >= 1.0)) throw std::invalid_argument("TimeGrid: grading must be >= 1");
}

double TimeGrid::node(int j) const {
  if (j <= 0) return t_start;
  if (j >= steps) return t_end;
  return t_start + (t_end - t_start) * std::pow(static_cast<double>(j) / steps, grading);
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(steps + 1);
  for (int j = 0; j <= steps; ++j) out[j] = node(j);
  return out;
}

ModeTrace l1_caputo_solve(double lam, double rho, const TimeFunction& q, double T0,
                          const TimeGrid& grid) {
  grid.validate();
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("l1_caputo_solve: rho must lie in (0,1)");
  ModeTrace tr{grid, grid.nodes(), {}};
  const auto& t = tr.times;
  const std::size_t n = t.size();
  tr.values.assign(n, 0.0);
  tr.values[0] = T0;
  const double g2 = std::tgamma(2.0 - rho);
  const L1Weights W(t, rho, grid.uniform());
  std::vector<double> dq(n, 0.0);  // difference quotients (T_j - T_{j-1}) / tau_j
  for (std::size_t m = 1; m < n; ++m) {
    double hist = 0.0;
    for (std::size_t j = 1; j < m; ++j) hist += W.w(m, j) * dq[j];
    const double tau = t[m] - t[m - 1];
    const double c = W.w(m, m) / (g2 * tau);
    // c (T_m - T_{m-1}) + hist / g2 + lam T_m = q(t_m)
    const double Tm = (q(t[m]) - hist / g2 + c * tr.values[m - 1]) / (c + lam);
    tr.values[m] = Tm;
    dq[m] = (Tm - tr.values[m - 1]) / tau;
  }
  return tr;
}

ModeTrace parabolic_solve(double lam, const TimeFunction& q, double T0, const TimeGrid& grid) {
  grid.validate();
  if (!(lam >= 0.0)) throw std::invalid_argument("parabolic_solve: lam must be >= 0");
  ModeTrace tr{grid, grid.nodes(), {}};
  const auto& t = tr.times;
  const std::size_t n = t.size();
  tr.values.assign(n, 0.0);
  tr.values[n - 1] = T0;
  double q_hi = q(t[n - 1]);
  for (std::size_t m = n - 1; m-- > 0;) {
    const double h = t[m + 1] - t[m];
    const double q_lo = q(t[m]);
    // T(t) = e^{-lam h} T(t + h) - int_0^h q(t + u) e^{-lam u} du
    const double x = lam * h;
    const double forcing = h * (q_lo * phi1(x) + (q_hi - q_lo) * phi2(x));
    tr.values[m] = std::exp(-x) * tr.values[m + 1] - forcing;
    q_hi = q_lo;
  }
  return tr;
}

ModeTrace caputo_l1_derivative(const ModeTrace& trace, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("caputo_l1_derivative: rho must lie in (0,1)");
  if (trace.values.size() != trace.times.size() || trace.times.size() < 2)
    throw std::invalid_argument("caputo_l1_derivative: malformed trace");
  ModeTrace out{trace.grid, trace.times, std::vector<double>(trace.times.size(), 0.0)};
  const auto& t = trace.times;
  const std::size_t n = t.size();
  const double g2 = std::tgamma(2.0 - rho);
  const L1Weights W(t, rho, trace.grid.uniform());
  std::vector<double> dq(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) dq[j] = (trace.values[j] - trace.values[j - 1]) / (t[j] - t[j - 1]);
  for (std::size_t m = 1; m < n; ++m) {
    double s = 0.0;
    for (std::size_t j = 1; j <= m; ++j) s += W.w(m, j) * dq[j];
    out.values[m] = s / g2;
  }
  return out;
}

ErrorSummary compare_mode(const std::function<double(double)>& closed, const ModeTrace& trace, int stride) {
  if (stride < 1) throw std::invalid_argument("compare_mode: stride must be >= 1");
  if (trace.values.size() != trace.times.size() || trace.times.empty())
    throw std::invalid_argument("compare_mode: malformed trace");
  const std::size_t n = trace.times.size();
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < n; j += static_cast<std::size_t>(stride)) idx.push_back(j);
  if (idx.back() != n - 1) idx.push_back(n - 1);
  ErrorSummary s;
  std::vector<double> err(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    err[i] = std::abs(closed(trace.times[idx[i]]) - trace.values[idx[i]]);
    s.max_abs = std::max(s.max_abs, err[i]);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < idx.size(); ++i)
    acc += 0.5 * (trace.times[idx[i + 1]] - trace.times[idx[i]]) * (err[i] * err[i] + err[i + 1] * err[i + 1]);
  s.l2 = std::sqrt(acc);
  s.compared = static_cast<int>(idx.size());
  return s;
}

ErrorSummary compare_mode(const std::function<double(double)>& closed, const ModeTrace& coarse,
                          const ModeTrace& fine, int stride) {
  if (fine.grid.steps != 2 * coarse.grid.steps)
    throw std::invalid_argument("compare_mode: fine grid must have twice the steps");
  const ErrorSummary c = compare_mode(closed, coarse, stride);
  ErrorSummary f = compare_mode(closed, fine, 2 * stride);
  f.order = (c.max_abs > 0.0 && f.max_abs > 0.0) ? std::log2(c.max_abs / f.max_abs) : 0.0;
  return f;
}

}  // namespace dezin
