#pragma once

#include <array>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "eikonal/grid.hpp"
#include "eikonal/problem.hpp"
#include "eikonal/slowness.hpp"
#include "eikonal/sweep.hpp"
#include "eikonal/theta.hpp"

namespace eikonal {

struct TwoScaleOptions {
  int max_iters = 100;
  double conv_tol = 1e-10;
  SweepOptions coarse_sweep;
  SweepOptions fine_sweep;
  /// Rounds of 2^d orderings in the weighted coarse update.
  int coarse_update_rounds = 1;
  ThetaPolicy policy = ThetaPolicy::Estimated;  // Fixed or Estimated
  double fixed_theta = 0.0;
  /// The applied weight is capped at the bootstrap value by default; larger
  /// weights let perturbations circulate through the coarse correction.
  ThetaParams theta{.cap = 0.01};
  int workers = 1;
};

struct IterationRecord {
  int k = 0;
  // U^k against u^f on the interface skeleton.
  double l1_rel = 0.0;
  double l1_abs = 0.0;
  double linf = 0.0;
  // Patched fine solution u^k against u^f on the whole fine grid.
  double fine_l1_rel = 0.0;
  double fine_linf = 0.0;
  /// max |U^k - u^k| over the skeleton, where u^k is the merged fine value.
  double coarse_fine_gap = 0.0;
  /// max |U^k - U^{k-1}|; zero at k = 0.
  double max_change = 0.0;
  bool winds_changed = true;
  bool converged = false;
  std::size_t weighted_nodes = 0;
  double max_theta_bar = 0.0;
  double max_theta_used = 0.0;
  double wall_ms = 0.0;
};

struct RunResult {
  std::vector<IterationRecord> history;
  bool converged = false;
  int iterations = 0;  // coarse updates performed
};

/// One candidate subdomain value at an interface node.
struct MergeCandidate {
  double value = kInf;
  Wind wind;
};

/// Two-candidate merge: c1 is the subdomain on the low side of the interface
/// and n1 its inward normal. Consensus along n1 selects c2 (upwind), along
/// -n1 selects c1, otherwise the smaller value with ties to c1. A consensus
/// pick that is unreached while the other candidate is reached falls back to
/// the minimum. Returns the chosen index (0 or 1).
int merge_pair(const MergeCandidate& c1, const MergeCandidate& c2, Wind coarse, Normal n1);

/// Corner merge over the subdomains SW, SE, NW, NE (absent ones are nullopt).
/// A quadrant on which every wind agrees selects the diagonally upwind
/// subdomain; otherwise the smallest value wins, ties to the earliest.
int merge_corner(const std::array<std::optional<MergeCandidate>, 4>& cands, Wind coarse);

/// Boundary value for one entry: U when the coarse wind arrives through any
/// of the entry's inward normals, INF otherwise.
double boundary_condition(double U, Wind W, const BoundaryEntry& entry);

/// Weighted-update gate: some normal n with w.n >= 0, W.n >= 0, Wt.n >= 0.
bool weighted_gate(Wind fine, Wind coarse, Wind candidate, const std::vector<Normal>& normals);

/// Causal repair of one node: raise U to the upwind neighbor along each axis
/// of W when U undercuts it. Unreached neighbors are ignored.
double causal_update(double U, Wind W, double x_minus, double x_plus, double y_minus, double y_plus);

class TwoScaleSolver {
 public:
  TwoScaleSolver(const GridSpec& spec, SlownessField slowness, BoundarySpec gamma, TwoScaleOptions options);

  const GridSpec& spec() const { return spec_; }
  const Skeleton& skeleton() const { return skeleton_; }
  const TwoScaleOptions& options() const { return options_; }
  int k() const { return k_; }

  /// Step 1: independent FSM on every coarse grid, then a causal sweep.
  void initialize();
  /// Sequential causal sweep over all coarse grids, line-interleaved.
  void causal_sweep();
  /// Step 2 for one subdomain: boundary values per entry of boundary_of.
  std::vector<double> subdomain_bcs(int i, int j) const;
  /// Steps 2 and 3: all subdomain solves, then the merge onto the skeleton.
  void solve_fine();
  /// Step 4: weighted coarse update followed by a causal sweep. Returns
  /// max |U^{k+1} - U^k| and whether any wind changed.
  std::pair<double, bool> coarse_update(IterationRecord* diag = nullptr);

  /// Drives steps 1-4 until U stops changing (and winds are fixed) or
  /// max_iters updates. `reference` is u^f on the global fine grid; the
  /// observer sees the solver after each recorded iteration.
  RunResult run(const std::vector<double>& reference,
                const std::function<void(const TwoScaleSolver&, const IterationRecord&)>& observer = {});

  const std::vector<double>& U() const { return U_; }
  const std::vector<Wind>& W() const { return W_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<Wind>& w() const { return w_; }
  const std::vector<std::uint8_t>& coarse_fixed() const { return coarse_fixed_; }
  const Field& subdomain(int i, int j) const;

  /// All subdomain solutions assembled on the global fine grid; interface
  /// nodes carry the merged value.
  std::vector<double> patched_fine() const;
  /// Restriction of a global fine field to the skeleton.
  std::vector<double> restrict_to_skeleton(const std::vector<double>& global) const;

 private:
  struct GridData {
    CoarseGrid grid;
    std::vector<std::size_t> skel;  // skeleton index of each node
    std::vector<double> slowness;
    std::vector<std::uint8_t> fixed;
    std::vector<FixedValue> fixed_value;
  };

  Neighbors grid_neighbors(const GridData& g, const std::vector<double>& values, int a, int b) const;
  std::vector<Normal> gate_normals(std::size_t idx) const;
  void merge();
  void sweep_coarse_grid(const GridData& g, const std::vector<double>& theta);
  std::vector<double> coarse_solver_values(const std::vector<double>& U) const;

  GridSpec spec_;
  SlownessField slowness_;
  BoundarySpec gamma_;
  TwoScaleOptions options_;
  Skeleton skeleton_;
  std::vector<GridData> grids_;

  std::vector<double> fine_slowness_;
  std::vector<std::uint8_t> fine_fixed_;
  std::vector<FixedValue> fine_fixed_value_;
  std::vector<std::uint8_t> coarse_fixed_;

  int k_ = 0;
  std::vector<double> U_;
  std::vector<Wind> W_;
  std::vector<double> u_;
  std::vector<Wind> w_;
  std::vector<Field> subdomains_;

  // Scratch for the weighted update.
  std::vector<double> U_next_;
  std::vector<Wind> W_next_;
  std::vector<double> c_old_;

  // History for theta estimation: u^{k-1} and coarse-solver values C^k..C^{k-3}
  // (most recent first; INF entries mean unavailable).
  std::optional<std::vector<double>> u_prev_;
  std::deque<std::vector<double>> c_hist_;
  std::vector<double> theta_bar_;
  std::vector<double> theta_used_;
};

}  // namespace eikonal
