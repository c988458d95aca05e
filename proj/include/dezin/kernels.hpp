#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "dezin/eigenbasis.hpp"

// Hot loops over modes, time levels and grid points. Every kernel has a
// serial reference and an OpenMP version; both sum in the same fixed order,
// so their results are bitwise identical.
namespace dezin::kernels {

/// Worker count: DEZIN_THREADS if set and positive, else the OpenMP default.
int thread_count();

/// Tensor-product quadrature nodes and weights, one list per axis.
struct TensorGrid {
  int dims = 1;
  std::array<std::vector<double>, kMaxDims> nodes;
  std::array<std::vector<double>, kMaxDims> weights;
  std::array<int, kMaxDims> max_index{1, 1, 1};
};

/// c_k = sum_p wh[p] v_k(x_p), wh flattened with axis 0 slowest.
std::vector<double> project_serial(const std::vector<double>& wh, const TensorGrid& grid,
                                   const ModeSet& modes);
std::vector<double> project_parallel(const std::vector<double>& wh, const TensorGrid& grid,
                                     const ModeSet& modes);

/// Row-major rows x cols matrix.
struct Table {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// out[i] = fn(i) for i in [0, n). Exceptions thrown by fn are rethrown.
std::vector<double> map_serial(std::size_t n, const std::function<double(std::size_t)>& fn);
std::vector<double> map_parallel(std::size_t n, const std::function<double(std::size_t)>& fn);

/// T(k, j) = fn(k, j): per-mode values on a list of time levels.
Table mode_time_table_serial(std::size_t modes, std::size_t times,
                             const std::function<double(std::size_t, std::size_t)>& fn);
Table mode_time_table_parallel(std::size_t modes, std::size_t times,
                               const std::function<double(std::size_t, std::size_t)>& fn);

/// U(p, j) = sum_k V(p, k) T(k, j), summed over k in increasing order.
Table synthesize_serial(const Table& V, const Table& T);
Table synthesize_parallel(const Table& V, const Table& T);

}  // namespace dezin::kernels
