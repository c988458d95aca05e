#include "dezin/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace dezin::kernels {

namespace {

// sin(n pi x / l) for n = 1..max_index on every node of each axis.
struct SineTables {
  std::array<std::vector<double>, kMaxDims> s;  // s[axis][(n-1) * P + p]
  std::array<std::size_t, kMaxDims> P{1, 1, 1};
};

SineTables sine_tables(const TensorGrid& grid, const ModeSet& modes) {
  SineTables t;
  for (int i = 0; i < grid.dims; ++i) {
    const std::size_t P = grid.nodes[i].size();
    t.P[i] = P;
    const int nmax = grid.max_index[i];
    t.s[i].resize(static_cast<std::size_t>(nmax) * P);
    const double l = modes.domain.lengths[i];
    for (int n = 1; n <= nmax; ++n)
      for (std::size_t p = 0; p < P; ++p)
        t.s[i][(n - 1) * P + p] = std::sin(n * std::numbers::pi * grid.nodes[i][p] / l);
  }
  return t;
}

double project_one(const std::vector<double>& wh, const TensorGrid& grid, const SineTables& st,
                   const Mode& m) {
  for (int i = 0; i < grid.dims; ++i)
    if (m.multi_index[i] > grid.max_index[i])
      throw std::invalid_argument("project: grid does not cover the mode index");
  const double* s0 = st.s[0].data() + (m.multi_index[0] - 1) * st.P[0];
  double total = 0.0;
  if (grid.dims == 1) {
    for (std::size_t a = 0; a < st.P[0]; ++a) total += wh[a] * s0[a];
  } else if (grid.dims == 2) {
    const double* s1 = st.s[1].data() + (m.multi_index[1] - 1) * st.P[1];
    for (std::size_t a = 0; a < st.P[0]; ++a) {
      const double* row = wh.data() + a * st.P[1];
      double inner = 0.0;
      for (std::size_t b = 0; b < st.P[1]; ++b) inner += row[b] * s1[b];
      total += s0[a] * inner;
    }
  } else {
    const double* s1 = st.s[1].data() + (m.multi_index[1] - 1) * st.P[1];
    const double* s2 = st.s[2].data() + (m.multi_index[2] - 1) * st.P[2];
    for (std::size_t a = 0; a < st.P[0]; ++a) {
      double mid = 0.0;
      for (std::size_t b = 0; b < st.P[1]; ++b) {
        const double* row = wh.data() + (a * st.P[1] + b) * st.P[2];
        double inner = 0.0;
        for (std::size_t c = 0; c < st.P[2]; ++c) inner += row[c] * s2[c];
        mid += s1[b] * inner;
      }
      total += s0[a] * mid;
    }
  }
  return m.norm_const * total;
}

void check_project(const std::vector<double>& wh, const TensorGrid& grid, const ModeSet& modes) {
  if (grid.dims != modes.domain.dims) throw std::invalid_argument("project: dimension mismatch");
  std::size_t total = 1;
  for (int i = 0; i < grid.dims; ++i) total *= grid.nodes[i].size();
  if (wh.size() != total) throw std::invalid_argument("project: sample count mismatch");
}

// Runs body(i) for i in [0, n) on the OpenMP team and rethrows the first
// exception after the loop.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr err;
  std::mutex mu;
  const long long N = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
  for (long long i = 0; i < N; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

void check_synth(const Table& V, const Table& T) {
  if (V.cols != T.rows) throw std::invalid_argument("synthesize: inner dimensions differ");
}

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("DEZIN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

std::vector<double> project_serial(const std::vector<double>& wh, const TensorGrid& grid,
                                   const ModeSet& modes) {
  check_project(wh, grid, modes);
  const SineTables st = sine_tables(grid, modes);
  std::vector<double> out(modes.size());
  for (std::size_t k = 0; k < modes.size(); ++k) out[k] = project_one(wh, grid, st, modes[k]);
  return out;
}

std::vector<double> project_parallel(const std::vector<double>& wh, const TensorGrid& grid,
                                     const ModeSet& modes) {
  check_project(wh, grid, modes);
  const SineTables st = sine_tables(grid, modes);
  std::vector<double> out(modes.size());
  parallel_for(modes.size(), [&](std::size_t k) { out[k] = project_one(wh, grid, st, modes[k]); });
  return out;
}

std::vector<double> map_serial(std::size_t n, const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

std::vector<double> map_parallel(std::size_t n, const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

Table mode_time_table_serial(std::size_t modes, std::size_t times,
                             const std::function<double(std::size_t, std::size_t)>& fn) {
  Table t{modes, times, std::vector<double>(modes * times)};
  for (std::size_t k = 0; k < modes; ++k)
    for (std::size_t j = 0; j < times; ++j) t(k, j) = fn(k, j);
  return t;
}

Table mode_time_table_parallel(std::size_t modes, std::size_t times,
                               const std::function<double(std::size_t, std::size_t)>& fn) {
  Table t{modes, times, std::vector<double>(modes * times)};
  parallel_for(modes * times, [&](std::size_t i) { t.data[i] = fn(i / times, i % times); });
  return t;
}

Table synthesize_serial(const Table& V, const Table& T) {
  check_synth(V, T);
  Table U{V.rows, T.cols, std::vector<double>(V.rows * T.cols, 0.0)};
  for (std::size_t p = 0; p < V.rows; ++p)
    for (std::size_t j = 0; j < T.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < V.cols; ++k) s += V(p, k) * T(k, j);
      U(p, j) = s;
    }
  return U;
}

Table synthesize_parallel(const Table& V, const Table& T) {
  check_synth(V, T);
  Table U{V.rows, T.cols, std::vector<double>(V.rows * T.cols, 0.0)};
  parallel_for(V.rows, [&](std::size_t p) {
    for (std::size_t j = 0; j < T.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < V.cols; ++k) s += V(p, k) * T(k, j);
      U(p, j) = s;
    }
  });
  return U;
}

}  // namespace dezin::kernels
