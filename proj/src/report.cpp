#include "dezin/report.hpp"

#include <cstdio>
#include <stdexcept>

#include "dezin/kernels.hpp"

namespace dezin {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ReportWriter::section(const std::string& name) {
  if (!first_section_) out_ << '\n';
  first_section_ = false;
  out_ << '[' << name << "]\n";
}

void ReportWriter::put(const std::string& key, double v) { out_ << key << " = " << fmt17(v) << '\n'; }
void ReportWriter::put(const std::string& key, int v) { out_ << key << " = " << v << '\n'; }
void ReportWriter::put(const std::string& key, bool v) { out_ << key << " = " << (v ? "true" : "false") << '\n'; }

void ReportWriter::put(const std::string& key, const std::string& v) {
  out_ << key << " = \"";
  for (char c : v) {
    if (c == '"' || c == '\\') out_ << '\\';
    out_ << c;
  }
  out_ << "\"\n";
}

void ReportWriter::put(const std::string& key, std::span<const double> v) {
  out_ << key << " = [";
  for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? ", " : "") << fmt17(v[i]);
  out_ << "]\n";
}

void ReportWriter::put(const std::string& key, std::span<const int> v) {
  out_ << key << " = [";
  for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? ", " : "") << v[i];
  out_ << "]\n";
}

void ReportWriter::put(const std::string& key, const std::vector<std::string>& v) {
  out_ << key << " = [";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out_ << (i ? ", " : "") << '"';
    for (char c : v[i]) {
      if (c == '"' || c == '\\') out_ << '\\';
      out_ << c;
    }
    out_ << '"';
  }
  out_ << "]\n";
}

void write_params(ReportWriter& w, const ProblemParams& p, const ModeSet& modes) {
  w.section("problem");
  w.put("rho", p.rho);
  w.put("alpha", p.alpha);
  w.put("beta", p.beta);
  w.put("lambda", p.lambda);
  w.put("modes", static_cast<int>(modes.size()));
  w.put("zero_tol", p.zero_tol);
  w.put("dims", modes.domain.dims);
  w.put("lengths", std::span<const double>(modes.domain.lengths.data(), modes.domain.dims));
  std::vector<double> eig(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) eig[i] = modes[i].eigenvalue;
  w.put("eigenvalues", eig);
}

void write_solvability(ReportWriter& w, const SolvabilityReport& r) {
  w.section("solvability");
  w.put("lambda_class", to_string(r.lambda_class));
  if (r.lambda0) w.put("lambda0", *r.lambda0);
  w.put("resonant_set", r.resonant_set);
  w.put("delta", r.delta);
  w.put("min_abs_delta", r.min_abs_delta);
  w.put("lower_bound", r.lower_bound);
  w.put("k0", r.k0);
  if (r.lambda_class == LambdaClass::neg) {
    w.put("quoted_bound", r.quoted_bound);
    w.put("quoted_bound_holds", r.min_abs_delta >= r.quoted_bound);
  }
}

void write_forward(ReportWriter& w, const ForwardSolution& sol) {
  w.section("forward");
  const std::size_t K = sol.mode_solutions.size();
  std::vector<double> a(K), fstar(K);
  std::vector<int> free;
  for (std::size_t i = 0; i < K; ++i) {
    a[i] = sol.mode_solutions[i].a;
    fstar[i] = sol.mode_solutions[i].fstar;
    if (sol.mode_solutions[i].is_free) free.push_back(static_cast<int>(i) + 1);
  }
  w.put("a", a);
  w.put("fstar", fstar);
  w.put("free_indices", free);
  w.put("tail_mass", sol.diagnostics.tail_mass);
  w.put("decay_head", sol.diagnostics.decay_head);
  w.put("decay_tail", sol.diagnostics.decay_tail);
  w.put("decay_warning", sol.diagnostics.decay_warning);
  w.put("warnings", sol.diagnostics.warnings);
}

void write_denominators(ReportWriter& w, const DenominatorReport& r) {
  w.section("denominators");
  w.put("Delta", r.Delta);
  w.put("term1", r.term1);
  w.put("term2", r.term2);
  w.put("K0", r.K0);
  w.put("precision_loss", r.precision_loss);
  w.put("g_sign", to_string(r.g_sign));
  w.put("g_min_abs", r.m);
  w.put("g_max_abs", r.M);
  w.put("c0", r.c0);
  w.put("n1_satisfied", r.n1_satisfied);
  w.put("n1_lhs", r.n1_lhs);
  w.put("n1_rhs", r.n1_rhs);
  w.put("k_l", r.k_l);
  if (r.k_r > 0) w.put("k_r", r.k_r);
}

void write_bounds(ReportWriter& w, const BoundTable& t) {
  w.section("bounds");
  w.put("regime_start", t.regime_start);
  std::vector<double> scaled;
  std::vector<int> violated;
  for (const auto& row : t.rows) {
    scaled.push_back(row.scaled);
    if (row.violated) violated.push_back(row.k);
  }
  w.put("scaled_abs_Delta", scaled);
  w.put("empirical_c", t.empirical_c);
  w.put("violations", violated);
  w.put("any_violation", t.any_violation);
}

void write_conditions(ReportWriter& w, const ConditionReport& c) {
  w.section("conditions");
  w.put("dezin", c.dezin);
  w.put("gluing", c.gluing);
  w.put("gluing_eps6", c.gluing_eps6);
  w.put("gluing_eps9", c.gluing_eps9);
  w.put("boundary", c.boundary);
  w.put("pde_pos", c.pde_pos);
  w.put("pde_neg", c.pde_neg);
  w.put("pde_modes_checked", c.pde_modes_checked);
}

std::vector<std::array<double, kMaxDims>> spatial_grid(const BoxDomain& domain, int n) {
  if (n < 2) throw std::invalid_argument("spatial_grid: need >= 2 points per axis");
  std::size_t total = 1;
  for (int i = 0; i < domain.dims; ++i) total *= static_cast<std::size_t>(n);
  std::vector<std::array<double, kMaxDims>> pts(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (int i = domain.dims - 1; i >= 0; --i) {
      const int j = static_cast<int>(r % n);
      r /= n;
      // Hit the far wall exactly.
      pts[flat][i] = j == n - 1 ? domain.lengths[i] : domain.lengths[i] * j / (n - 1);
    }
  }
  return pts;
}

std::vector<double> time_levels(double alpha, double beta, int n) {
  if (n < 2) throw std::invalid_argument("time_levels: need >= 2 points");
  std::vector<double> t(n);
  for (int j = 0; j < n; ++j) t[j] = -alpha + (alpha + beta) * j / (n - 1);
  t[n - 1] = beta;
  return t;
}

namespace {

kernels::Table mode_table(const ModeSet& ms, const std::vector<std::array<double, kMaxDims>>& pts) {
  kernels::Table V{pts.size(), ms.size(), std::vector<double>(pts.size() * ms.size())};
  for (std::size_t p = 0; p < pts.size(); ++p)
    for (std::size_t k = 0; k < ms.size(); ++k)
      V(p, k) = eval_mode_unchecked(ms[k], std::span<const double>(pts[p].data(), ms.domain.dims));
  return V;
}

void header(std::ostream& out, int dims, const char* last) {
  if (dims == 1)
    out << "x,";
  else
    for (int i = 0; i < dims; ++i) out << 'x' << (i + 1) << ',';
  out << last << '\n';
}

}  // namespace

void write_u_csv(std::ostream& out, const ForwardSolution& sol, int x_points, int t_points) {
  const ModeSet& ms = *sol.modes;
  const int dims = ms.domain.dims;
  const auto pts = spatial_grid(ms.domain, x_points);
  const auto times = time_levels(sol.params.alpha, sol.params.beta, t_points);
  const kernels::Table V = mode_table(ms, pts);
  const kernels::Table T = kernels::mode_time_table_parallel(
      ms.size(), times.size(), [&](std::size_t k, std::size_t j) { return sol.mode_solutions[k].at(times[j]); });

  header(out, dims, "t,u");
  std::string line;
  for (std::size_t j = 0; j < times.size(); ++j) {
    // One time level at a time keeps memory at one column of U.
    kernels::Table Tj{ms.size(), 1, std::vector<double>(ms.size())};
    for (std::size_t k = 0; k < ms.size(); ++k) Tj(k, 0) = T(k, j);
    const kernels::Table U = kernels::synthesize_parallel(V, Tj);
    const std::string tcol = fmt17(times[j]);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      line.clear();
      for (int i = 0; i < dims; ++i) line += fmt17(pts[p][i]) + ',';
      line += tcol;
      line += ',';
      line += fmt17(U(p, 0));
      line += '\n';
      out << line;
    }
  }
}

void write_field_csv(std::ostream& out, const SpectralField& f, int x_points) {
  f.validate();
  const ModeSet& ms = *f.basis;
  const int dims = ms.domain.dims;
  const auto pts = spatial_grid(ms.domain, x_points);
  const kernels::Table V = mode_table(ms, pts);
  kernels::Table C{ms.size(), 1, f.coeffs};
  const kernels::Table U = kernels::synthesize_parallel(V, C);
  header(out, dims, "f");
  for (std::size_t p = 0; p < pts.size(); ++p) {
    for (int i = 0; i < dims; ++i) out << fmt17(pts[p][i]) << ',';
    out << fmt17(U(p, 0)) << '\n';
  }
}

void write_ml_csv(std::ostream& out, std::span<const MLQuery> queries, std::span<const double> values) {
  if (queries.size() != values.size()) throw std::invalid_argument("write_ml_csv: size mismatch");
  out << "rho,mu,z,value\n";
  for (std::size_t i = 0; i < queries.size(); ++i)
    out << fmt17(queries[i].rho) << ',' << fmt17(queries[i].mu) << ',' << fmt17(queries[i].z) << ','
        << fmt17(values[i]) << '\n';
}

}  // namespace dezin
