#include "dezin/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dezin/kernels.hpp"
#include "dezin/quadrature.hpp"

namespace dezin {

namespace {

// Beyond u = kStiffCut / lam the weight e^{-lam u} is below 1e-18.
constexpr double kStiffCut = 41.45;

// (1 - e^{-x}) / x for x >= 0
double phi1(double x) {
  if (x < 1e-8) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

// (e^x - 1) / x
double expm1_ratio(double x) {
  if (std::abs(x) < 1e-8) return 1.0 + 0.5 * x;
  return std::expm1(x) / x;
}

// Coefficients of p(a + u) in powers of u.
std::vector<double> taylor_shift(std::vector<double> c, double a) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += a * c[j];
  return c;
}

double poly_eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// int_0^L q(u) e^{-lam u} du for a polynomial q given by its Taylor coefficients.
double poly_exp_integral(const std::vector<double>& q, double lam, double L) {
  const int deg = static_cast<int>(q.size()) - 1;
  if (lam > 0.0 && lam * L >= 2.0 * deg + 4.0) {
    // Repeated integration by parts; every series terminates after deg + 1 terms.
    std::vector<double> d = q;
    double head = 0.0, tail = 0.0, scale = 1.0 / lam;
    for (int i = 0; i <= deg; ++i) {
      head += d[0] * scale;
      tail += poly_eval(d, L) * scale;
      for (std::size_t j = 1; j < d.size(); ++j) d[j - 1] = static_cast<double>(j) * d[j];
      d.back() = 0.0;
      scale /= lam;
    }
    return head - std::exp(-lam * L) * tail;
  }
  const int panels = std::max(2, static_cast<int>(std::ceil(0.5 * lam * L)));
  const int points = std::min(64, std::max(16, deg + 16));
  const auto breaks = uniform_breaks(0.0, L, panels);
  return integrate_panels([&](double u) { return poly_eval(q, u) * std::exp(-lam * u); },
                          breaks, points);
}

double generic_exp_integral(const TimeFunction& F, double lam, double a, double b) {
  double hi = b;
  if (lam > 0.0) hi = std::min(b, a + kStiffCut / lam);
  if (!(hi > a)) return 0.0;
  const double L = hi - a;
  double width = L / 16.0;
  if (lam > 0.0) width = std::min(width, 2.0 / lam);
  std::vector<double> cuts{a, hi};
  for (double k : F.knots())
    if (k > a && k < hi) cuts.push_back(k);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> breaks{cuts.front()};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int n = std::max(1, static_cast<int>(std::ceil(len / width)));
    for (int j = 1; j <= n; ++j) breaks.push_back(j == n ? cuts[i + 1] : cuts[i] + len * j / n);
  }
  return integrate_panels([&](double s) { return F(s) * std::exp(-lam * (s - a)); }, breaks, 16);
}

void check_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
}

}  // namespace

// ---------------------------------------------------------------- fields

SpectralField SpectralField::zero(std::shared_ptr<const ModeSet> basis) {
  if (!basis) throw std::invalid_argument("SpectralField: null basis");
  SpectralField f;
  f.coeffs.assign(basis->size(), 0.0);
  f.basis = std::move(basis);
  return f;
}

SpectralField SpectralField::unit(std::shared_ptr<const ModeSet> basis, int k) {
  SpectralField f = zero(std::move(basis));
  if (k < 1 || k > static_cast<int>(f.coeffs.size()))
    throw std::out_of_range("SpectralField::unit: mode index out of range");
  f.coeffs[k - 1] = 1.0;
  return f;
}

void SpectralField::validate() const {
  if (!basis) throw std::invalid_argument("SpectralField: null basis");
  if (coeffs.size() != basis->size())
    throw std::invalid_argument("SpectralField: coefficient count differs from mode count");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw std::invalid_argument("SpectralField: non-finite coefficient");
}

double SpectralField::operator()(std::span<const double> x) const { return synthesize(*this, x); }

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

void QuadratureSpec::validate() const {
  if (panels < 1) throw std::invalid_argument("QuadratureSpec: panels must be >= 1");
  if (order != 2 && order != 4 && order != 8)
    throw std::invalid_argument("QuadratureSpec: order must be 2, 4 or 8");
  if (grading != 0.0 && !(grading >= 1.0))
    throw std::invalid_argument("QuadratureSpec: grading must be >= 1 (or 0 for automatic)");
}

SpectralField project(const SpatialFunction& h, std::shared_ptr<const ModeSet> basis,
                      const ProjectionSpec& spec) {
  SpectralField out = SpectralField::zero(basis);
  const ModeSet& ms = *basis;
  const int dims = ms.domain.dims;
  if (spec.points < 1) throw std::invalid_argument("project: points must be >= 1");

  kernels::TensorGrid grid;
  grid.dims = dims;
  for (int i = 0; i < dims; ++i) {
    int nmax = 1;
    for (const Mode& m : ms.modes) nmax = std::max(nmax, m.multi_index[i]);
    grid.max_index[i] = nmax;
    const int panels = spec.panels > 0 ? spec.panels : std::max(8, 2 * nmax);
    const GaussRule& rule = gauss_legendre(spec.points);
    const auto breaks = uniform_breaks(0.0, ms.domain.lengths[i], panels);
    for (int p = 0; p < panels; ++p) {
      const double half = 0.5 * (breaks[p + 1] - breaks[p]), mid = 0.5 * (breaks[p + 1] + breaks[p]);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        grid.nodes[i].push_back(mid + half * rule.nodes[q]);
        grid.weights[i].push_back(half * rule.weights[q]);
      }
    }
  }

  // Weighted samples w(x) h(x), axis 0 slowest.
  std::size_t total = 1;
  for (int i = 0; i < dims; ++i) total *= grid.nodes[i].size();
  std::vector<double> wh(total);
  std::array<double, kMaxDims> x{};
  std::array<std::size_t, kMaxDims> idx{};
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (int i = dims - 1; i >= 0; --i) {
      idx[i] = r % grid.nodes[i].size();
      r /= grid.nodes[i].size();
    }
    double w = 1.0;
    for (int i = 0; i < dims; ++i) {
      x[i] = grid.nodes[i][idx[i]];
      w *= grid.weights[i][idx[i]];
    }
    wh[flat] = w * h(std::span<const double>(x.data(), dims));
  }
  out.coeffs = kernels::project_parallel(wh, grid, ms);
  return out;
}

double synthesize(const SpectralField& field, std::span<const double> x) {
  if (!field.basis) throw std::invalid_argument("synthesize: null basis");
  const ModeSet& ms = *field.basis;
  if (!ms.domain.contains(x, 0.0)) throw std::out_of_range("synthesize: point outside the box");
  double s = 0.0;
  for (std::size_t k = 0; k < ms.size(); ++k)
    if (field.coeffs[k] != 0.0) s += field.coeffs[k] * eval_mode_unchecked(ms[k], x);
  return s;
}

// ---------------------------------------------------------------- time integrals

double exp_weighted_integral(const TimeFunction& F, double lam, double a, double b) {
  if (!(lam >= 0.0) || !std::isfinite(lam))
    throw std::invalid_argument("exp_weighted_integral: lam must be finite and >= 0");
  if (!(b >= a)) throw std::invalid_argument("exp_weighted_integral: need a <= b");
  const double L = b - a;
  if (L == 0.0 || F.is_zero()) return 0.0;
  const auto& rep = F.rep();
  if (auto* c = std::get_if<TimeFunction::Constant>(&rep)) return c->c * L * phi1(lam * L);
  if (auto* e = std::get_if<TimeFunction::Exponential>(&rep)) {
    const double c = e->b - lam;
    if (c * L <= 1.0) return e->a * std::exp(e->b * a) * L * expm1_ratio(c * L);
    return e->a * (std::exp(e->b * b - lam * L) - std::exp(e->b * a)) / c;
  }
  if (auto* p = std::get_if<TimeFunction::Polynomial>(&rep))
    return poly_exp_integral(taylor_shift(p->coeffs, a), lam, L);
  return generic_exp_integral(F, lam, a, b);
}

double i_k_alpha(const TimeFunction& g, double lam, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("i_k_alpha: alpha must be > 0");
  return exp_weighted_integral(g, lam, -alpha, 0.0);
}

double fstar_k(const TimeFunction& Fk, double lam, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("fstar_k: alpha must be > 0");
  return exp_weighted_integral(Fk, lam, -alpha, 0.0);
}

double history_integral(const TimeFunction& F, double lam, double t) {
  if (t > 0.0) throw std::invalid_argument("history_integral: t must be <= 0");
  return exp_weighted_integral(F, lam, t, 0.0);
}

// ---------------------------------------------------------------- Duhamel convolution

namespace detail {

double duhamel_product(const TimeFunction& F, double lam, double rho, double t,
                       const QuadratureSpec& quad, const MLConfig& ml) {
  quad.validate();
  check_rho(rho);
  if (!(t > 0.0)) throw std::domain_error("duhamel: t must be > 0");
  if (!(lam >= 0.0)) throw std::domain_error("duhamel: lam must be >= 0");

  // In w = s^rho the kernel s^{rho-1} ds becomes dw / rho, leaving
  // E_{rho,rho}(-lam w), which is smooth; the mesh below is uniform in w
  // for the default exponent.
  const double r = quad.exponent_for(rho);
  const int J = quad.panels;
  std::vector<double> mesh(J + 1);
  for (int j = 0; j <= J; ++j) mesh[j] = t * std::pow(static_cast<double>(j) / J, r);
  mesh[J] = t;
  for (double k : F.knots()) {
    const double s = t - k;
    if (s > 0.0 && s < t) mesh.push_back(s);
  }
  std::sort(mesh.begin(), mesh.end());
  std::vector<double> s_nodes{mesh.front()};
  for (std::size_t i = 1; i < mesh.size(); ++i)
    if (mesh[i] - s_nodes.back() > 1e-14 * t) s_nodes.push_back(mesh[i]);
  s_nodes.back() = t;

  const int order = quad.order;
  // The panel error is dominated by the interpolation of F, not by this rule.
  const GaussRule& rule = gauss_legendre(6);
  const double inv_rho = 1.0 / rho;
  std::vector<double> xs(order), fs(order), wsub;
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < s_nodes.size(); ++p) {
    const double a = s_nodes[p], b = s_nodes[p + 1];
    for (int i = 0; i < order; ++i) {
      xs[i] = a + (b - a) * i / (order - 1);
      fs[i] = F(t - xs[i]);
    }
    const double wa = std::pow(a, rho), wb = std::pow(b, rho);

    // Sub-panels in w: geometric toward w = 0 on the first panel, otherwise
    // fine enough that E_{rho,rho}(-lam w) is resolved on the 1/lam scale.
    wsub.clear();
    if (wa == 0.0) {
      int levels = 10;
      if (lam > 0.0) levels = std::max(levels, static_cast<int>(std::ceil(std::log2(wb * lam + 1.0))) + 4);
      levels = std::min(levels, 60);
      wsub.push_back(0.0);
      for (int l = levels; l >= 1; --l) wsub.push_back(wb * std::ldexp(1.0, -l));
      wsub.push_back(wb);
    } else {
      const double scale = lam > 0.0 ? std::max(wa, 2.0 / lam) : std::max(wa, wb - wa);
      const int n = std::max(1, static_cast<int>(std::ceil((wb - wa) / scale)));
      for (int j = 0; j <= n; ++j) wsub.push_back(j == n ? wb : wa + (wb - wa) * j / n);
    }

    double panel = 0.0;
    for (std::size_t q = 0; q + 1 < wsub.size(); ++q) {
      const double half = 0.5 * (wsub[q + 1] - wsub[q]), mid = 0.5 * (wsub[q + 1] + wsub[q]);
      double acc = 0.0;
      for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
        const double w = mid + half * rule.nodes[g];
        const double s = std::pow(w, inv_rho);
        double interp = 0.0;
        for (int i = 0; i < order; ++i) {
          double l = 1.0;
          for (int j = 0; j < order; ++j)
            if (j != i) l *= (s - xs[j]) / (xs[i] - xs[j]);
          interp += l * fs[i];
        }
        acc += rule.weights[g] * ml_eval(rho, rho, -lam * w, ml) * interp;
      }
      panel += half * acc;
    }
    total += panel;
  }
  return total * inv_rho;
}

}  // namespace detail

double duhamel(const TimeFunction& F, double lam, double rho, double t, const QuadratureSpec& quad,
               const MLConfig& ml) {
  check_rho(rho);
  if (!(t > 0.0)) throw std::domain_error("duhamel: t must be > 0");
  if (!(lam >= 0.0)) throw std::domain_error("duhamel: lam must be >= 0");
  if (F.is_zero()) return 0.0;
  const double tr = std::pow(t, rho);
  const auto& rep = F.rep();
  if (auto* c = std::get_if<TimeFunction::Constant>(&rep))
    return c->c * tr * ml_eval(rho, rho + 1.0, -lam * tr, ml);
  if (auto* p = std::get_if<TimeFunction::Polynomial>(&rep)) {
    // int_0^t s^{rho-1} E_{rho,rho}(-lam s^rho) (t-s)^j ds = j! t^{rho+j} E_{rho,rho+j+1}(-lam t^rho)
    double total = 0.0, fact = 1.0, tp = tr;
    for (std::size_t j = 0; j < p->coeffs.size(); ++j) {
      if (j > 0) {
        fact *= static_cast<double>(j);
        tp *= t;
      }
      if (p->coeffs[j] != 0.0)
        total += p->coeffs[j] * fact * tp * ml_eval(rho, rho + 1.0 + static_cast<double>(j), -lam * tr, ml);
    }
    return total;
  }
  return detail::duhamel_product(F, lam, rho, t, quad, ml);
}

double i_k_rho(const TimeFunction& g, double lam, double rho, double t0, const QuadratureSpec& quad,
               const MLConfig& ml) {
  if (!(t0 > 0.0)) throw std::domain_error("i_k_rho: t0 must be > 0");
  return duhamel(g, lam, rho, t0, quad, ml);
}

// ---------------------------------------------------------------- sign check

SignReport sign_check(const TimeFunction& g, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("sign_check: need lo < hi");
  constexpr int n = 2000;
  std::vector<double> xs;
  xs.reserve(n + 1);
  for (int i = 0; i <= n; ++i) xs.push_back(i == n ? hi : lo + (hi - lo) * i / n);
  for (double k : g.knots())
    if (k > lo && k < hi) xs.push_back(k);
  std::sort(xs.begin(), xs.end());
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = g(xs[i]);

  // Golden-section refinement of an interior extremum bracketed by neighbours.
  auto refine = [&](std::size_t i, double sign) {
    double best = ys[i];
    if (i == 0 || i + 1 == xs.size()) return best;
    double a = xs[i - 1], b = xs[i + 1];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = sign * g(c), fd = sign * g(d);
    for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      if (fc < fd) {
        b = d, d = c, fd = fc;
        c = b - invphi * (b - a);
        fc = sign * g(c);
      } else {
        a = c, c = d, fc = fd;
        d = a + invphi * (b - a);
        fd = sign * g(d);
      }
    }
    return sign > 0 ? std::min(best, std::min(fc, fd)) : std::max(best, -std::min(fc, fd));
  };

  const auto imin = static_cast<std::size_t>(std::min_element(ys.begin(), ys.end()) - ys.begin());
  const auto imax = static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  SignReport rep;
  rep.min = refine(imin, 1.0);
  rep.max = refine(imax, -1.0);
  if (rep.min > 0.0)
    rep.sign = SignClass::positive;
  else if (rep.max < 0.0)
    rep.sign = SignClass::negative;
  else
    rep.sign = SignClass::sign_changing;
  return rep;
}

const char* to_string(SignClass s) {
  switch (s) {
    case SignClass::positive: return "positive";
    case SignClass::negative: return "negative";
    case SignClass::sign_changing: return "sign_changing";
  }
  return "unknown";
}

}  // namespace dezin
