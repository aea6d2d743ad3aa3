// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance <path-to-eikonal2s> <scratch-dir>
//
// Exit status is nonzero when a criterion fails that is not in the list of
// known, analysed divergences below; those still print FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "eikonal/metrics.hpp"
#include "eikonal/problem.hpp"
#include "eikonal/sweep.hpp"
#include "eikonal/theta.hpp"
#include "eikonal/twoscale.hpp"

using namespace eikonal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Criteria whose targets this implementation does not reach; see README.
const std::set<std::string> kKnownDivergences{"4", "5b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

Outcome godunov_suite() {
  const double a = godunov_solve(0, 0, 1, 1);
  const double b = godunov_solve(0, 5, 1, 1);
  const double c = godunov_solve(0.3, 0.4, 2, 0.1);
  const double worst = std::max({rel_err(a, std::sqrt(2.0) / 2), rel_err(b, 1.0), rel_err(c, 0.5 * (0.7 + std::sqrt(0.07)))});
  return {worst <= 1e-12, "max relative error " + fmt(worst)};
}

double point_source_l1(int m) {
  const GridSpec spec(2, 10, m);
  const auto ref = reference_solution(spec, SlownessField::constant(1), BoundarySpec{{Point{0, 0}}});
  const auto pts = fine_points(spec);
  double sum = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) sum += std::abs(ref.field.value[k] - std::hypot(pts[k].x, pts[k].y));
  return spec.h() * spec.h() * sum;
}

Outcome fsm_convergence() {
  const double e50 = point_source_l1(5);
  const double e100 = point_source_l1(10);  // 101 x 101 nodes
  const double ratio = e50 / e100;
  return {ratio >= 1.5 && ratio <= 2.7,
          "L1 error h=1/50 " + fmt(e50) + ", h=1/100 " + fmt(e100) + ", ratio " + fmt(ratio)};
}

double front_error(const ModelRun& run, const ModelIterate& it) {
  const int m = run.problem.m;
  double worst = 0.0;
  for (int i = 0; i <= std::min(it.k, run.problem.n); ++i)
    for (int j = 0; j <= m; ++j) {
      const auto k = static_cast<std::size_t>(i) * (m + 1) + j;
      worst = std::max(worst, std::abs(it.U[k] - run.uf[k]));
    }
  return worst;
}

Outcome exactness() {
  ModelOptions o;
  o.max_k = 12;
  const auto run = model_run({10, 20}, o);
  double worst = 0.0;
  for (const auto& it : run.iterates) worst = std::max(worst, front_error(run, it));
  return {worst <= 1e-10, "max_k max_{i<=k} |U^k - u^f| = " + fmt(worst)};
}

Outcome theta_one_instability() {
  ModelOptions o;
  o.policy = ThetaPolicy::Fixed;
  o.fixed_theta = 1.0;
  o.max_k = 20;
  const auto run = model_run({20, 50}, o);
  double fine_err = 0.0;
  for (std::size_t k = 0; k < run.uf.size(); ++k) fine_err = std::max(fine_err, std::abs(run.uf[k] - run.exact[k]));
  const double e1 = run.iterates[1].linf;
  const double e10 = run.iterates[10].linf;
  std::size_t peak = 0;
  for (std::size_t k = 1; k < run.iterates.size(); ++k)
    if (run.iterates[k].linf > run.iterates[peak].linf) peak = k;
  const bool grows = e10 >= 2 * e1;
  const bool above_fine = e1 >= 10 * fine_err;
  return {grows && above_fine, "linf k=1 " + fmt(e1) + ", k=10 " + fmt(e10) + " (ratio " + fmt(e10 / e1) +
                                   ", need >= 2), peak " + fmt(run.iterates[peak].linf) + " at k=" + std::to_string(peak) +
                                   "; |u^f - u_exact|_inf " + fmt(fine_err) + " (k=1 ratio " + fmt(e1 / fine_err) +
                                   ", need >= 10)"};
}

Outcome strip_l1() {
  // h * sum over the coarse nodes (iH, jh) of |u^f - sqrt(x^2 + y^2)|.
  std::string detail;
  bool pass = true;
  for (int n : {10, 20, 50}) {
    const ModelProblem p{n, 1000 / n};
    ModelOptions o;
    o.max_k = 0;
    const auto run = model_run(p, o);
    double sum = 0.0;
    for (std::size_t k = 0; k < run.uf.size(); ++k) sum += std::abs(run.uf[k] - run.exact[k]);
    const double l1 = p.h() * sum;
    if (n == 10) pass = rel_err(l1, 3.79e-4) <= 0.10;
    detail += "N=" + std::to_string(n) + ": " + fmt(l1) + (n == 50 ? "" : ", ");
  }
  return {pass, detail + " (target 3.79e-4 +-10% at N=10)"};
}

Outcome min_mbar() {
  ModelOptions o;
  o.policy = ThetaPolicy::Oracle;
  o.max_k = 2;
  const auto run = model_run({20, 50}, o);
  const double v = run.iterates[1].min_mbar;
  return {rel_err(v, 5.6e-3) <= 0.20, "min Mbar at k=1 " + fmt(v) + " (k=2: " + fmt(run.iterates[2].min_mbar) +
                                          "), target 5.6e-3 +-20%"};
}

Outcome threshold() {
  const double t = speedup_threshold({20, 100, 2, 10.0, 1}).threshold;
  return {t >= 250 && t <= 280, "threshold " + fmt(t)};
}

Outcome oracle_window() {
  ModelOptions o;
  o.policy = ThetaPolicy::Oracle;
  o.max_k = 11;
  const ModelProblem p{10, 20};
  const auto run = model_run(p, o);
  const int m = p.m;
  int violations = 0;
  int checked = 0;
  for (std::size_t t = 1; t < run.iterates.size(); ++t) {
    const auto& prev = run.iterates[t - 1];
    const auto& cur = run.iterates[t];
    for (int i = cur.k + 1; i <= p.n; ++i)
      for (int j = 1; j <= m; ++j) {
        const auto k = static_cast<std::size_t>(i) * (m + 1) + j;
        ++checked;
        if (!(cur.U[k] < prev.U[k] && cur.U[k] > run.uf[k])) ++violations;
      }
  }
  const double final_err = run.iterates.back().linf;
  return {violations == 0 && final_err <= 1e-10, std::to_string(checked) + " node-steps checked, " +
                                                     std::to_string(violations) + " violations, final linf " +
                                                     fmt(final_err)};
}

int workers() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

Outcome one_d() {
  const GridSpec spec(1, 10, 100);
  BoundarySpec gamma;
  gamma.sources = {Point{0, 0}, Point{1, 0}};
  const auto f = SlownessField::gauss1d();
  const auto ref = reference_solution(spec, f, gamma);
  TwoScaleOptions o;
  o.max_iters = 30;
  TwoScaleSolver s(spec, f, gamma, o);
  const auto run = s.run(ref.field.value);
  int first = -1;
  for (const auto& r : run.history)
    if (first < 0 && r.coarse_fine_gap <= 1e-10) first = r.k;
  const double err = linf(s.patched_fine(), ref.field.value);
  return {run.converged && first >= 0 && first <= 10 && err <= 1e-10,
          "U^k = u^k first at k=" + std::to_string(first) + ", stop at k=" + std::to_string(run.iterations) +
              ", |patched - u^f|_inf " + fmt(err)};
}

struct TwoDRun {
  RunResult result;
  double final_fine = 0.0;
  double seconds = 0.0;
};

TwoDRun run_2d(const SlownessField& f, int max_iters) {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec spec(2, 10, 50);
  BoundarySpec gamma;
  gamma.sources = {Point{0, 0}};
  const auto ref = reference_solution(spec, f, gamma);
  TwoScaleOptions o;
  o.max_iters = max_iters;
  o.workers = workers();
  TwoScaleSolver s(spec, f, gamma, o);
  TwoDRun out;
  out.result = s.run(ref.field.value);
  out.final_fine = l1_relative(s.patched_fine(), ref.field.value);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// First k from which l1_rel never rises by more than the noise floor.
int monotone_from(const std::vector<IterationRecord>& h) {
  int from = static_cast<int>(h.size()) - 1;
  for (int k = static_cast<int>(h.size()) - 2; k >= 0; --k) {
    if (h[static_cast<std::size_t>(k) + 1].l1_rel - h[static_cast<std::size_t>(k)].l1_rel > 1e-10) break;
    from = k;
  }
  return from;
}

Outcome end_to_end() {
  bool pass = true;
  std::string detail;
  for (auto [name, field] : {std::pair{"r1", SlownessField::sine2d(0.99, 2)}, std::pair{"r2", SlownessField::sine2d(0.5, 20)}}) {
    const auto r = run_2d(field, 100);
    const int last = static_cast<int>(r.result.history.size()) - 1;
    const int from = monotone_from(r.result.history);
    const bool ok = r.final_fine <= 1e-8 && from <= last / 2;
    pass = pass && ok;
    detail += std::string(name) + ": " + std::to_string(r.result.iterations) + " iterations, fine l1_rel " +
              fmt(r.final_fine) + ", monotone from k=" + std::to_string(from) + " (" + fmt(r.seconds) + " s)" +
              (std::string(name) == "r1" ? "; " : "");
  }
  return {pass, detail};
}

Outcome maze() {
  const auto r = run_2d(SlownessField::maze(), 100);
  const int from = monotone_from(r.result.history);
  const double first = r.result.history.front().l1_rel;
  return {r.final_fine <= 1e-8 && from <= 30,
          std::to_string(r.result.iterations) + " iterations, l1_rel k=0 " + fmt(first) + ", monotone from k=" +
              std::to_string(from) + " (limit 30), fine l1_rel " + fmt(r.final_fine)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli, const fs::path& scratch) {
  fs::create_directories(scratch);
  const fs::path config = scratch / "r1.json";
  std::ofstream(config) << R"({"problem": {"N": 10, "M": 50, "slowness": {"kind": "r1"}}, "solver": {"max_iters": 100}})";
  // At least 4 so the comparison exercises threading on single-core hosts.
  const int many = std::max(4, workers());
  std::string detail = "workers 1 vs " + std::to_string(many) + ": ";
  for (int w : {1, many}) {
    const auto out = scratch / ("w" + std::to_string(w));
    fs::remove_all(out);
    const std::string cmd = cli + " run --config " + config.string() + " --workers " + std::to_string(w) + " --out " +
                            out.string() + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
  }
  bool same = true;
  for (const char* f : {"coarse.csv", "fine.csv", "reference.csv", "errors.csv"}) {
    const auto a = slurp(scratch / "w1" / f), b = slurp(scratch / ("w" + std::to_string(many)) / f);
    const bool eq = !a.empty() && a == b;
    same = same && eq;
    detail += std::string(f) + (eq ? " identical" : " DIFFER") + (std::string(f) == "errors.csv" ? "" : ", ");
  }
  return {same, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <eikonal2s> <scratch-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];

  struct Criterion {
    std::string id;
    std::string name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"1", "Godunov unit suite", godunov_suite},
      {"2", "FSM first-order convergence", fsm_convergence},
      {"3", "exactness on the model problem", exactness},
      {"4", "theta = 1 instability", theta_one_instability},
      {"5a", "model strip |u^f - u_exact|_L1", strip_l1},
      {"5b", "min Mbar at k=1", min_mbar},
      {"5c", "speedup threshold", threshold},
      {"6", "oracle theta window", oracle_window},
      {"7", "1D end-to-end", one_d},
      {"8", "2D end-to-end (r1, r2)", end_to_end},
      {"9", "maze causality", maze},
      {"10", "determinism under parallelism", [&] { return determinism(cli, scratch); }},
  };

  std::vector<std::string> failed, unexpected;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << c.id << " " << (o.pass ? "PASS" : "FAIL") << ": " << c.name << " -- " << o.detail << " ["
              << fmt(secs) << " s]" << std::endl;
    if (!o.pass) {
      failed.push_back(c.id);
      if (!kKnownDivergences.count(c.id)) unexpected.push_back(c.id);
    }
  }

  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s.empty() ? std::string("none") : s;
  };
  std::cout << "summary: " << criteria.size() - failed.size() << "/" << criteria.size() << " passed; failed: " << join(failed)
            << "; unexpected failures: " << join(unexpected) << std::endl;
  return unexpected.empty() ? 0 : 1;
}
