#include "dezin/eigenbasis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dezin {

namespace {

constexpr double kPi = std::numbers::pi;

double mode_eigenvalue(const BoxDomain& d, const std::array<int, kMaxDims>& n) {
  double lam = 0.0;
  for (int i = 0; i < d.dims; ++i) {
    const double w = n[i] * kPi / d.lengths[i];
    lam += w * w;
  }
  return lam;
}

}  // namespace

BoxDomain BoxDomain::make(std::span<const double> lengths) {
  if (lengths.empty() || lengths.size() > kMaxDims)
    throw std::invalid_argument("BoxDomain: 1 to 3 side lengths required");
  BoxDomain d;
  d.dims = static_cast<int>(lengths.size());
  for (int i = 0; i < d.dims; ++i) d.lengths[i] = lengths[i];
  d.validate();
  return d;
}

void BoxDomain::validate() const {
  if (dims < 1 || dims > kMaxDims) throw std::invalid_argument("BoxDomain: dims must be 1..3");
  for (int i = 0; i < dims; ++i)
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
      throw std::invalid_argument("BoxDomain: side lengths must be positive");
}

bool BoxDomain::contains(std::span<const double> x, double slack) const {
  if (static_cast<int>(x.size()) != dims) return false;
  for (int i = 0; i < dims; ++i) {
    const double tol = slack * lengths[i];
    if (!(x[i] >= -tol && x[i] <= lengths[i] + tol)) return false;
  }
  return true;
}

std::vector<Mode> enumerate_modes(const BoxDomain& domain, int count) {
  domain.validate();
  if (count < 1) throw std::invalid_argument("enumerate_modes: count must be >= 1");

  // Double the eigenvalue cap until it admits at least `count` modes.
  std::array<int, kMaxDims> n1{1, 1, 1};
  double cap = 2.0 * mode_eigenvalue(domain, n1);
  std::vector<Mode> modes;
  for (;;) {
    modes.clear();
    std::array<int, kMaxDims> nmax{1, 1, 1};
    for (int i = 0; i < domain.dims; ++i)
      nmax[i] = static_cast<int>(std::ceil(domain.lengths[i] / kPi * std::sqrt(cap)));
    std::array<int, kMaxDims> n{1, 1, 1};
    for (n[0] = 1; n[0] <= nmax[0]; ++n[0])
      for (n[1] = 1; n[1] <= (domain.dims > 1 ? nmax[1] : 1); ++n[1])
        for (n[2] = 1; n[2] <= (domain.dims > 2 ? nmax[2] : 1); ++n[2]) {
          const double lam = mode_eigenvalue(domain, n);
          if (lam > cap) continue;
          Mode m;
          m.dims = domain.dims;
          m.multi_index = n;
          m.lengths = domain.lengths;
          m.eigenvalue = lam;
          double c = 1.0;
          for (int i = 0; i < domain.dims; ++i) c *= std::sqrt(2.0 / domain.lengths[i]);
          m.norm_const = c;
          modes.push_back(m);
        }
    if (static_cast<int>(modes.size()) >= count) break;
    cap *= 2.0;
  }

  std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    return a.multi_index < b.multi_index;
  });
  // Permuted indices on equal sides can differ in the last ulp; reorder
  // such runs lexicographically and give them one shared eigenvalue.
  for (std::size_t i = 0; i < modes.size();) {
    std::size_t j = i + 1;
    while (j < modes.size() &&
           modes[j].eigenvalue - modes[i].eigenvalue <= 4e-15 * modes[i].eigenvalue)
      ++j;
    std::sort(modes.begin() + i, modes.begin() + j,
              [](const Mode& a, const Mode& b) { return a.multi_index < b.multi_index; });
    for (std::size_t r = i + 1; r < j; ++r) modes[r].eigenvalue = modes[i].eigenvalue;
    i = j;
  }
  modes.resize(count);
  for (int k = 0; k < count; ++k) modes[k].index = k + 1;
  return modes;
}

double eval_mode_unchecked(const Mode& m, std::span<const double> x) {
  double v = m.norm_const;
  for (int i = 0; i < m.dims; ++i) {
    if (x[i] <= 0.0 || x[i] >= m.lengths[i]) return 0.0;
    v *= std::sin(m.multi_index[i] * kPi * x[i] / m.lengths[i]);
  }
  return v;
}

double eval_mode(const Mode& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.dims) throw std::out_of_range("eval_mode: dimension mismatch");
  for (int i = 0; i < m.dims; ++i)
    if (!(x[i] >= 0.0 && x[i] <= m.lengths[i]))
      throw std::out_of_range("eval_mode: point outside the closed box");
  return eval_mode_unchecked(m, x);
}

std::vector<std::vector<int>> multiplicity_groups(std::span<const Mode> modes, double tol) {
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double lam = modes[i].eigenvalue;
    if (!groups.empty()) {
      const double lead = modes[groups.back().front() - 1].eigenvalue;
      if (std::abs(lam - lead) <= tol * std::max(1.0, lam)) {
        groups.back().push_back(static_cast<int>(i) + 1);
        continue;
      }
    }
    groups.push_back({static_cast<int>(i) + 1});
  }
  return groups;
}

std::shared_ptr<const ModeSet> make_mode_set(const BoxDomain& domain, int count) {
  auto set = std::make_shared<ModeSet>();
  set->domain = domain;
  set->modes = enumerate_modes(domain, count);
  return set;
}

}  // namespace dezin
