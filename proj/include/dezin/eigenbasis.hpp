#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace dezin {

inline constexpr int kMaxDims = 3;

/// Axis-aligned box (0, l_1) x ... x (0, l_N), 1 <= N <= 3.
struct BoxDomain {
  int dims = 1;
  std::array<double, kMaxDims> lengths{1.0, 1.0, 1.0};

  static BoxDomain make(std::span<const double> lengths);
  void validate() const;
  bool contains(std::span<const double> x, double slack = 1e-12) const;
};

/// One Dirichlet-Laplacian eigenpair on a box:
/// v(x) = prod_i sqrt(2/l_i) sin(n_i pi x_i / l_i), eigenvalue sum_i (n_i pi / l_i)^2.
struct Mode {
  int index = 0;  // 1-based position in the sorted spectrum
  int dims = 1;
  std::array<int, kMaxDims> multi_index{1, 1, 1};
  std::array<double, kMaxDims> lengths{1.0, 1.0, 1.0};
  double eigenvalue = 0.0;
  double norm_const = 0.0;
};

/// First `count` eigenpairs, eigenvalues non-decreasing, ties broken by
/// lexicographic multi-index.
std::vector<Mode> enumerate_modes(const BoxDomain& domain, int count);

/// Value of the normalized eigenfunction; exactly zero on the boundary.
/// Throws std::out_of_range for points outside the closed box.
double eval_mode(const Mode& m, std::span<const double> x);

/// Same without the domain check, for hot loops over known-good points.
double eval_mode_unchecked(const Mode& m, std::span<const double> x);

/// Groups of consecutive 1-based indices whose eigenvalues agree to
/// tol * max(1, lambda).
std::vector<std::vector<int>> multiplicity_groups(std::span<const Mode> modes, double tol = 1e-12);

/// Domain plus its retained modes; shared by fields and solutions.
struct ModeSet {
  BoxDomain domain;
  std::vector<Mode> modes;

  std::size_t size() const { return modes.size(); }
  const Mode& operator[](std::size_t i) const { return modes[i]; }
};

std::shared_ptr<const ModeSet> make_mode_set(const BoxDomain& domain, int count);

}  // namespace dezin
