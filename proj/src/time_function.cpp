#include "dezin/time_function.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dezin {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double eval_sampled(const TimeFunction::Sampled& s, double t) {
  const auto& x = s.t;
  const double span = x.back() - x.front();
  if (t < x.front() - 1e-12 * span || t > x.back() + 1e-12 * span)
    throw std::out_of_range("TimeFunction: time outside the sampled table");
  t = std::clamp(t, x.front(), x.back());
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t i = (it == x.begin()) ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  if (i >= x.size() - 1) i = x.size() - 2;
  if (s.order == 1 || x.size() < 4) {
    const double w = (t - x[i]) / (x[i + 1] - x[i]);
    return (1.0 - w) * s.v[i] + w * s.v[i + 1];
  }
  // Four-point stencil centred on the interval where possible.
  std::size_t lo = i == 0 ? 0 : i - 1;
  if (lo + 3 >= x.size()) lo = x.size() - 4;
  double out = 0.0;
  for (std::size_t a = lo; a < lo + 4; ++a) {
    double l = 1.0;
    for (std::size_t b = lo; b < lo + 4; ++b)
      if (b != a) l *= (t - x[b]) / (x[a] - x[b]);
    out += l * s.v[a];
  }
  return out;
}

}  // namespace

TimeFunction::TimeFunction(Rep rep) : rep_(std::move(rep)) {
  if (auto* s = std::get_if<Sampled>(&rep_)) {
    if (s->t.size() != s->v.size() || s->t.size() < 2)
      throw std::invalid_argument("TimeFunction: table needs >= 2 matching samples");
    for (std::size_t i = 1; i < s->t.size(); ++i)
      if (!(s->t[i] > s->t[i - 1]))
        throw std::invalid_argument("TimeFunction: table times must be strictly increasing");
    if (s->order != 1 && s->order != 3)
      throw std::invalid_argument("TimeFunction: interpolation order must be 1 or 3");
  }
  if (auto* c = std::get_if<Callable>(&rep_); c && !c->fn)
    throw std::invalid_argument("TimeFunction: empty callable");
}

double TimeFunction::operator()(double t) const {
  return std::visit(overloaded{
                        [](const Constant& c) { return c.c; },
                        [t](const Polynomial& p) {
                          double acc = 0.0;
                          for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it)
                            acc = acc * t + *it;
                          return acc;
                        },
                        [t](const Exponential& e) { return e.a * std::exp(e.b * t); },
                        [t](const Sampled& s) { return eval_sampled(s, t); },
                        [t](const Callable& c) { return c.fn(t); },
                    },
                    rep_);
}

bool TimeFunction::is_zero() const {
  return std::visit(overloaded{
                        [](const Constant& c) { return c.c == 0.0; },
                        [](const Polynomial& p) {
                          return std::all_of(p.coeffs.begin(), p.coeffs.end(),
                                             [](double v) { return v == 0.0; });
                        },
                        [](const Exponential& e) { return e.a == 0.0; },
                        [](const Sampled& s) {
                          return std::all_of(s.v.begin(), s.v.end(),
                                             [](double v) { return v == 0.0; });
                        },
                        [](const Callable&) { return false; },
                    },
                    rep_);
}

std::vector<double> TimeFunction::knots() const {
  if (auto* s = std::get_if<Sampled>(&rep_)) return s->t;
  return {};
}

double TimeFunction::support_lo() const {
  if (auto* s = std::get_if<Sampled>(&rep_)) return s->t.front();
  return -std::numeric_limits<double>::infinity();
}

double TimeFunction::support_hi() const {
  if (auto* s = std::get_if<Sampled>(&rep_)) return s->t.back();
  return std::numeric_limits<double>::infinity();
}

TimeFunction scaled(const TimeFunction& F, double s) {
  return std::visit(overloaded{
                        [s](const TimeFunction::Constant& c) { return TimeFunction::constant(s * c.c); },
                        [s](const TimeFunction::Polynomial& p) {
                          auto c = p.coeffs;
                          for (double& v : c) v *= s;
                          return TimeFunction::polynomial(std::move(c));
                        },
                        [s](const TimeFunction::Exponential& e) {
                          return TimeFunction::exponential(s * e.a, e.b);
                        },
                        [s](const TimeFunction::Sampled& t) {
                          auto v = t.v;
                          for (double& x : v) x *= s;
                          return TimeFunction::sampled(t.t, std::move(v), t.order);
                        },
                        [s](const TimeFunction::Callable& c) {
                          return TimeFunction::callable([s, fn = c.fn](double t) { return s * fn(t); });
                        },
                    },
                    F.rep());
}

void read_two_column_csv(const std::string& path, std::vector<double>& a, std::vector<double>& b) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path);
  a.clear();
  b.clear();
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double x = 0.0, y = 0.0;
    if (!(ss >> x >> y)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw std::runtime_error("malformed row in table file: " + path);
    }
    first = false;
    a.push_back(x);
    b.push_back(y);
  }
  if (a.size() < 2) throw std::runtime_error("table file needs at least two rows: " + path);
}

TimeFunction TimeFunction::from_table_file(const std::string& path, int order) {
  std::vector<double> t, v;
  read_two_column_csv(path, t, v);
  return sampled(std::move(t), std::move(v), order);
}

}  // namespace dezin
