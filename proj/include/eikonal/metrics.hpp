#pragma once

#include <vector>

namespace eikonal {

/// sum |U - ref| / sum |ref|. Throws std::invalid_argument on a size mismatch
/// or an identically zero reference.
double l1_relative(const std::vector<double>& U, const std::vector<double>& ref);

/// weight * sum |U - ref|; pass s^d for a full grid or the node spacing along
/// the lines for an interface skeleton.
double l1_abs(const std::vector<double>& U, const std::vector<double>& ref, double weight);

double linf(const std::vector<double>& U, const std::vector<double>& ref);

struct FlopModel {
  int n = 20;
  int m = 100;
  int d = 2;
  double c = 10.0;  // sweeps per FSM solve
  int k = 1;        // iterations
};

struct FlopEstimate {
  double serial = 0.0;        // A(NM, d)
  double coarse_phase = 0.0;  // coarse grids plus causal sweep, per iteration
  double fine_phase = 0.0;    // all subdomains, per iteration
  double parallel_per_iteration = 0.0;
  double threshold = 0.0;     // serial / parallel_per_iteration
  double speedup = 0.0;       // serial / (k * parallel_per_iteration)
};

/// A(n, d) = C * 2^d * (n + 1)^d.
double fsm_flops(double c, int n, int d);

/// Flop counts and the iteration budget below which the two-scale method
/// beats one whole-grid FSM solve, assuming one worker per coarse grid and
/// per subdomain. The causal sweep costs 2^d M^(d-1) (N+1)^d, which is the
/// usual 2^d M (N+1)^2 in 2D.
FlopEstimate speedup_threshold(const FlopModel& model);

}  // namespace eikonal
