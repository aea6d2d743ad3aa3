#include <algorithm>
#include <cmath>
#include <deque>

#include "eikonal/errors.hpp"
#include "eikonal/sweep.hpp"
#include "eikonal/theta.hpp"

namespace eikonal {

namespace {

struct Strip {
  int n;
  int m;
  double H;
  double h;
  std::size_t at(int i, int j) const { return static_cast<std::size_t>(i) * (m + 1) + j; }
  std::size_t size() const { return static_cast<std::size_t>(n + 1) * (m + 1); }
};

// Coarse solver at X_{i,j}: a 1D advance below the top row, the 2D Godunov
// form on the top row (second argument U_{i,0}).
double coarse_solver(const Strip& s, const std::vector<double>& U, int i, int j) {
  if (j < s.m) return U[s.at(i - 1, j)] + s.H;
  return godunov_solve(U[s.at(i - 1, s.m)], U[s.at(i, 0)], 1.0, s.H);
}

// Fine solve on subdomain [(i-1)H, iH] x [0, H] with the left column pinned to
// `left` and the bottom row to g = x. Returns the right column.
std::vector<double> subdomain_right_column(const Strip& s, const std::vector<double>& left, int i) {
  const int m = s.m;
  std::vector<double> u(static_cast<std::size_t>(m + 1) * (m + 1));
  auto at = [m](int l, int q) { return static_cast<std::size_t>(l) * (m + 1) + q; };
  const int p0 = (i - 1) * m;
  for (int l = 0; l <= m; ++l) u[at(l, 0)] = (p0 + l) * s.h;
  for (int q = 0; q <= m; ++q) u[at(0, q)] = left[static_cast<std::size_t>(q)];
  for (int l = 1; l <= m; ++l)
    for (int q = 1; q <= m; ++q) u[at(l, q)] = godunov_solve(u[at(l - 1, q)], u[at(l, q - 1)], 1.0, s.h);
  std::vector<double> right(static_cast<std::size_t>(m + 1));
  for (int q = 0; q <= m; ++q) right[static_cast<std::size_t>(q)] = u[at(m, q)];
  return right;
}

std::vector<double> fine_injection(const Strip& s, const std::vector<double>& U, const std::vector<double>& ufc) {
  std::vector<double> u(s.size());
  for (int j = 0; j <= s.m; ++j) u[s.at(0, j)] = ufc[s.at(0, j)];
  std::vector<double> left(static_cast<std::size_t>(s.m + 1));
  for (int i = 1; i <= s.n; ++i) {
    for (int j = 0; j <= s.m; ++j) left[static_cast<std::size_t>(j)] = U[s.at(i - 1, j)];
    const auto right = subdomain_right_column(s, left, i);
    for (int j = 0; j <= s.m; ++j) u[s.at(i, j)] = right[static_cast<std::size_t>(j)];
  }
  return u;
}

std::vector<double> coarse_solver_field(const Strip& s, const std::vector<double>& U) {
  std::vector<double> c(s.size(), 0.0);
  for (int i = 1; i <= s.n; ++i)
    for (int j = 1; j <= s.m; ++j) c[s.at(i, j)] = coarse_solver(s, U, i, j);
  return c;
}

void record_errors(const Strip& s, ModelIterate& it, const std::vector<double>& ufc) {
  it.linf = 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double e = std::abs(it.U[k] - ufc[k]);
    it.linf = std::max(it.linf, e);
    sum += e;
  }
  it.l1_abs = s.h * sum;
}

}  // namespace

OracleBounds oracle_bounds(double uf, double u_k, double U_k, double c_new, double c_old) {
  OracleBounds b;
  const double d = c_new - c_old;
  if (d == 0.0) return b;
  b.m_bar_upper = (uf - u_k) / d;
  b.m_tilde = std::max((U_k - u_k) / d, 0.0);
  return b;
}

std::vector<double> model_fine_solution(const ModelProblem& problem) {
  const GridSpec spec(2, problem.n, problem.m);
  const int nm = spec.fine_cells();
  const int m = problem.m;
  const double h = spec.h();
  std::vector<double> u(static_cast<std::size_t>(nm + 1) * (m + 1));
  auto at = [m](int p, int q) { return static_cast<std::size_t>(p) * (m + 1) + q; };
  for (int p = 0; p <= nm; ++p) u[at(p, 0)] = p * h;
  for (int q = 0; q <= m; ++q) u[at(0, q)] = q * h;
  for (int p = 1; p <= nm; ++p)
    for (int q = 1; q <= m; ++q) u[at(p, q)] = godunov_solve(u[at(p - 1, q)], u[at(p, q - 1)], 1.0, h);
  return u;
}

ModelRun model_run(const ModelProblem& problem, const ModelOptions& options) {
  if (problem.n < 2 || problem.m < 2) throw ConfigError("model problem needs N >= 2 and M >= 2", "problem");
  if (options.max_k < 0) throw ConfigError("model max_k must be >= 0", "solver.max_iters");
  options.params.validate();
  const Strip s{problem.n, problem.m, problem.H(), problem.h()};

  ModelRun run;
  run.problem = problem;
  const auto fine = model_fine_solution(problem);
  run.uf.resize(s.size());
  run.exact.resize(s.size());
  for (int i = 0; i <= s.n; ++i) {
    for (int j = 0; j <= s.m; ++j) {
      run.uf[s.at(i, j)] = fine[static_cast<std::size_t>(i * s.m) * (s.m + 1) + j];
      run.exact[s.at(i, j)] = std::hypot(i * s.H, j * s.h);
    }
  }
  const auto& ufc = run.uf;

  ModelIterate it0;
  it0.U.assign(s.size(), 0.0);
  for (int j = 0; j <= s.m; ++j) it0.U[s.at(0, j)] = ufc[s.at(0, j)];
  for (int i = 0; i <= s.n; ++i) it0.U[s.at(i, 0)] = ufc[s.at(i, 0)];
  for (int i = 1; i <= s.n; ++i)
    for (int j = 1; j <= s.m; ++j) it0.U[s.at(i, j)] = coarse_solver(s, it0.U, i, j);
  record_errors(s, it0, ufc);
  run.iterates.push_back(std::move(it0));

  // Most recent first: u^k, u^{k-1} and C^k .. C^{k-3}.
  std::deque<std::vector<double>> u_hist;
  std::deque<std::vector<double>> c_hist;

  for (int k = 0; k < options.max_k; ++k) {
    const auto& Uk = run.iterates.back().U;
    u_hist.push_front(fine_injection(s, Uk, ufc));
    if (u_hist.size() > 2) u_hist.pop_back();
    c_hist.push_front(coarse_solver_field(s, Uk));
    if (c_hist.size() > 4) c_hist.pop_back();
    const auto& uk = u_hist.front();
    const auto& c_old = c_hist.front();

    ModelIterate next;
    next.k = k + 1;
    next.U.assign(s.size(), 0.0);
    next.bounds.assign(s.size(), OracleBounds{});
    for (int j = 0; j <= s.m; ++j) next.U[s.at(0, j)] = ufc[s.at(0, j)];
    for (int i = 0; i <= s.n; ++i) next.U[s.at(i, 0)] = ufc[s.at(i, 0)];
    for (int i = 1; i <= s.n; ++i) {
      for (int j = 1; j <= s.m; ++j) {
        const std::size_t idx = s.at(i, j);
        const double cn = coarse_solver(s, next.U, i, j);
        const double co = c_old[idx];
        const OracleBounds b = oracle_bounds(ufc[idx], uk[idx], Uk[idx], cn, co);
        next.bounds[idx] = b;
        if (std::isfinite(b.m_bar_upper)) next.min_mbar = std::min(next.min_mbar, b.m_bar_upper);

        double theta = 0.0;
        switch (options.policy) {
          case ThetaPolicy::Fixed:
            theta = options.fixed_theta;
            break;
          case ThetaPolicy::Oracle:
            theta = std::isfinite(b.m_bar_upper) ? b.m_tilde + options.oracle_lambda * (b.m_bar_upper - b.m_tilde)
                                                 : 0.0;
            break;
          case ThetaPolicy::Estimated: {
            ThetaHistory hist;
            hist.u_k = uk[idx];
            if (u_hist.size() > 1) hist.u_km1 = u_hist[1][idx];
            for (std::size_t t = 0; t < c_hist.size(); ++t) hist.c[t] = c_hist[t][idx];
            theta = choose_theta(hist, options.params).used;
            break;
          }
        }
        next.max_theta_used = std::max(next.max_theta_used, theta);
        next.U[idx] = theta * (cn - co) + uk[idx];
      }
    }
    record_errors(s, next, ufc);
    run.iterates.push_back(std::move(next));
  }
  return run;
}

}  // namespace eikonal
