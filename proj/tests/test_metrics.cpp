#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "eikonal/metrics.hpp"

using namespace eikonal;

TEST_CASE("l1_relative examples") {
  const std::vector<double> ref{1.0, 2.0, 3.5, 0.25};
  CHECK(l1_relative(ref, ref) == 0.0);
  std::vector<double> scaled;
  for (double v : ref) scaled.push_back(1.1 * v);
  CHECK(l1_relative(scaled, ref) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(l1_abs(scaled, ref, 0.5) == doctest::Approx(0.5 * 0.1 * 6.75));
  CHECK(linf(scaled, ref) == doctest::Approx(0.35));
  CHECK_THROWS_AS(l1_relative({1.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(l1_relative({1.0, 2.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("l1_relative properties on random fields") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> ref(50), a(50), b(50);
    for (std::size_t k = 0; k < 50; ++k) {
      ref[k] = std::abs(g(rng)) + 0.1;
      a[k] = ref[k] + 0.1 * g(rng);
      b[k] = ref[k] + 0.1 * g(rng);
    }
    const double ea = l1_relative(a, ref), eb = l1_relative(b, ref);
    CHECK(ea > 0.0);
    // |a - b| relative to the same denominator obeys the triangle inequality.
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < 50; ++k) {
      num += std::abs(a[k] - b[k]);
      den += std::abs(ref[k]);
    }
    CHECK(num / den <= ea + eb + 1e-15);
  }
}

TEST_CASE("flop counts") {
  CHECK(fsm_flops(10, 20, 2) == 10.0 * 4 * 21 * 21);
  CHECK(fsm_flops(1, 10, 1) == 2.0 * 11);
}

TEST_CASE("speedup threshold for N=20, M=100, d=2, C=10") {
  const auto e = speedup_threshold({20, 100, 2, 10.0, 1});
  MESSAGE("threshold = " << e.threshold);
  CHECK(e.threshold >= 250);
  CHECK(e.threshold <= 280);
  CHECK(e.threshold == doctest::Approx(266).epsilon(0.01));
}

TEST_CASE("d=1, C=1, N=M=10 by hand") {
  // Serial 2 * 101. Per iteration: one coarse grid 2 * 11, the causal sweep
  // 2 * 11 and one subdomain solve 2 * 11.
  const auto e = speedup_threshold({10, 10, 1, 1.0, 1});
  const double serial = 2.0 * 101;
  CHECK(e.serial == serial);
  const double parallel = 2.0 * 11 + 2.0 * 11 + 2.0 * 11;
  CHECK(e.parallel_per_iteration == doctest::Approx(parallel));
  CHECK(e.threshold == doctest::Approx(serial / parallel));
}

TEST_CASE("N = M, d=2, C=10: one iteration is cheaper than a whole-grid solve") {
  for (int n = 2; n <= 64; ++n) {
    CHECK(speedup_threshold({n, n, 2, 10.0, 1}).threshold > 1.0);
  }
}

TEST_CASE("threshold increases with M") {
  for (int d : {1, 2})
    for (int n : {4, 10, 20}) {
      double prev = 0.0;
      for (int m = 2; m <= 200; m += 3) {
        const double t = speedup_threshold({n, m, d, 10.0, 1}).threshold;
        CHECK(t > prev);
        prev = t;
      }
    }
}

TEST_CASE("speedup divides by the iteration count") {
  const auto one = speedup_threshold({20, 100, 2, 10.0, 1});
  const auto ten = speedup_threshold({20, 100, 2, 10.0, 10});
  CHECK(ten.speedup == doctest::Approx(one.speedup / 10));
  CHECK_THROWS_AS(speedup_threshold({0, 10, 2, 10.0, 1}), std::invalid_argument);
}
