#include <doctest.h>

#include <cmath>
#include <vector>

#include "eikonal/problem.hpp"
#include "eikonal/sweep.hpp"

using namespace eikonal;

namespace {

// h^2 * sum |u - exact distance| for a point source at the origin.
double l1_distance_error(int cells) {
  const GridSpec spec(2, cells / 10, 10);
  const auto ref = reference_solution(spec, SlownessField::constant(1), BoundarySpec{{Point{0, 0}}});
  const auto pts = fine_points(spec);
  const double h = spec.h();
  double err = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) err += std::abs(ref.field.value[k] - std::hypot(pts[k].x, pts[k].y));
  return h * h * err;
}

Field lattice_with_corner_source(int n) {
  Field f(n, n);
  f.value[0] = 0.0;
  f.fixed[0] = 1;
  return f;
}

}  // namespace

TEST_CASE("godunov_solve examples") {
  CHECK(godunov_solve(0, 0, 1, 1) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK(godunov_solve(0, 5, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(godunov_solve(0.3, 0.4, 2, 0.1) == doctest::Approx(0.5 * (0.7 + std::sqrt(0.07))).epsilon(1e-12));
  CHECK(godunov_solve(0.3, 0.4, 2, 0.1) == doctest::Approx(0.48228757).epsilon(1e-8));
}

TEST_CASE("godunov_solve with unreached inputs") {
  CHECK(godunov_solve(kInf, 2.0, 1.0, 0.5) == 2.5);
  CHECK(godunov_solve(2.0, kInf, 1.0, 0.5) == 2.5);
  CHECK(is_inf(godunov_solve(kInf, kInf, 1.0, 0.5)));
  // Symmetric, never above the one-sided update, and above both inputs on
  // the quadratic branch.
  for (double a : {0.0, 0.1, 0.37}) {
    for (double b : {0.0, 0.05, 0.4}) {
      const double v = godunov_solve(a, b, 1.3, 0.1);
      CHECK(v == godunov_solve(b, a, 1.3, 0.1));
      CHECK(v > std::min(a, b));
      CHECK(v <= std::min(a, b) + 1.3 * 0.1 + 1e-15);
      if (std::abs(a - b) < 0.13) CHECK(v >= std::max(a, b));
    }
  }
}

TEST_CASE("local_update examples") {
  const auto one = local_update({0.0, kInf, kInf, kInf}, kInf, Wind{}, 1.0, 0.1);
  CHECK(one.value == doctest::Approx(0.1));
  CHECK(one.wind == Wind{1, 0});

  const auto diag = local_update({0.0, kInf, 0.0, kInf}, kInf, Wind{}, 1.0, 1.0);
  CHECK(diag.value == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(diag.wind == Wind{1, 1});

  const auto keep = local_update({0.0, kInf, kInf, kInf}, 0.05, Wind{0, -1}, 1.0, 0.1);
  CHECK(keep.value == 0.05);
  CHECK(keep.wind == Wind{0, -1});

  // Flow from the right and from above.
  const auto back = local_update({kInf, 0.0, kInf, kInf}, kInf, Wind{}, 1.0, 0.1);
  CHECK(back.wind == Wind{-1, 0});
  const auto down = local_update({kInf, kInf, 5.0, 0.0}, kInf, Wind{}, 1.0, 0.1);
  CHECK(down.wind == Wind{0, -1});
  CHECK(down.value == doctest::Approx(0.1));
}

TEST_CASE("fsm 1D: exact after one round") {
  const int n = 10 * 100 + 1;
  const double h = 1.0 / 1000;
  Field f(n, 1);
  f.value[0] = 0.0;
  f.fixed[0] = 1;
  const std::vector<double> r(n, 1.0);
  const auto res = fsm_solve(f, r, h, SweepOptions{1, -1.0});
  CHECK(res.rounds == 1);
  for (int i = 0; i < n; ++i) CHECK(f.value[static_cast<std::size_t>(i)] == doctest::Approx(i * h).epsilon(1e-12));
}

TEST_CASE("fsm 2D point source: first-order L1 convergence") {
  const double e50 = l1_distance_error(50);
  const double e100 = l1_distance_error(100);
  CHECK(e100 < e50);
  const double ratio = e50 / e100;
  MESSAGE("L1 ratio h=1/50 vs h=1/100: " << ratio);
  CHECK(ratio >= 1.5);
  CHECK(ratio <= 2.7);
}

TEST_CASE("fsm with exact distance data on the whole boundary converges in one round") {
  const GridSpec spec(2, 5, 10);
  BoundarySpec gamma;
  gamma.sides = kLeft | kRight | kBottom | kTop;
  gamma.side_data = SideData::Distance;
  const auto pts = fine_points(spec);
  const int n = spec.fine_nodes_per_axis();
  const auto r = sample_slowness(SlownessField::constant(1), pts);

  Field once(n, n);
  apply_boundary(once, pts, spec.h(), gamma, SlownessField::constant(1));
  Field full = once;
  fsm_solve(once, r, spec.h(), SweepOptions{1, -1.0});
  const auto res = fsm_solve(full, r, spec.h());
  CHECK(res.converged);
  CHECK(res.rounds <= 2);
  for (std::size_t k = 0; k < full.size(); ++k) CHECK(once.value[k] == full.value[k]);
}

TEST_CASE("fsm properties: monotone, causal, fixed point") {
  const int n = 41;
  const double h = 1.0 / 40;
  std::vector<double> r(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(j * n + i)] = SlownessField::sine2d(0.99, 2)(i * h, j * h);

  Field f = lattice_with_corner_source(n);
  std::vector<double> prev = f.value;
  SweepResult res;
  for (int round = 0; round < 50; ++round) {
    res = fsm_solve(f, r, h, SweepOptions{1, -1.0});
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(f.value[k] <= prev[k]);
    prev = f.value;
    if (res.converged) break;
  }
  REQUIRE(res.converged);

  const double tol = default_sweep_tol(2, r);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = f.at(i, j);
      if (f.fixed[k]) continue;
      const Wind w = f.wind[k];
      REQUIRE_FALSE(w.unset());
      if (w.x == 1) CHECK(f.value[k] > f.value[f.at(i - 1, j)]);
      if (w.x == -1) CHECK(f.value[k] > f.value[f.at(i + 1, j)]);
      if (w.y == 1) CHECK(f.value[k] > f.value[f.at(i, j - 1)]);
      if (w.y == -1) CHECK(f.value[k] > f.value[f.at(i, j + 1)]);
      const auto again = local_update(f.neighbors(i, j), f.value[k], w, r[k], h);
      CHECK(f.value[k] - again.value < tol);
    }
  }
}

TEST_CASE("default tolerance scales with dimension and slowness") {
  CHECK(default_sweep_tol(2, {1.0, 3.0}) == doctest::Approx(3e-12 * std::sqrt(2.0)));
  CHECK(default_sweep_tol(1, {2.0}) == doctest::Approx(2e-12));
}
