#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace eikonal {

struct ThetaParams {
  double x0 = 0.9;
  double gamma = 0.75;
  double delta = 0.01;
  std::array<double, 3> omega{4.0, 2.0, 1.0};
  double bootstrap = 0.01;
  double denom_guard = 1e-14;
  /// Upper bound on the applied weight; +inf leaves the damped value as is.
  double cap = std::numeric_limits<double>::infinity();

  /// Throws ConfigError when a field is out of range.
  void validate() const;
};

/// Per-node history needed by the estimator. `c[s]` is the coarse solver
/// evaluated on the neighbors of U^{k-s}; missing entries are nullopt.
struct ThetaHistory {
  std::optional<double> u_k;
  std::optional<double> u_km1;
  std::array<std::optional<double>, 4> c{};
};

/// Estimated theta for the update that produces U^{k+1}:
///   (u^k - u^{k-1}) / (sum_s w_s (C^{k-s} - C^{k-1-s}) / sum_s w_s).
/// Terms whose history is missing are dropped and the weights renormalized.
/// Returns the bootstrap value when the s = 0 term is unavailable or the
/// denominator is smaller than denom_guard.
double estimate_theta(const ThetaHistory& history, const ThetaParams& params);

/// Smooth damping of large estimates:
///   [sigma(t) t + (1 - sigma(t)) delta t]^+,  sigma(t) = 1 / (1 + exp((t - x0) / gamma)).
double damp_theta(double theta_bar, const ThetaParams& params);
double damp_sigma(double theta_bar, const ThetaParams& params);

struct ThetaChoice {
  double theta_bar = 0.0;
  double used = 0.0;
  bool bootstrap = false;
};

/// The weight actually applied: the damped estimate limited to `cap`, or the
/// raw bootstrap value when the estimator has no usable history or trips the
/// guard.
ThetaChoice choose_theta(const ThetaHistory& history, const ThetaParams& params);

enum class ThetaPolicy { Fixed, Estimated, Oracle };

ThetaPolicy parse_theta_policy(const std::string& name);
std::string to_string(ThetaPolicy policy);

/// The strip [0,1] x [0,H] with r = 1 and u = sqrt(x^2 + y^2) on the bottom
/// and left sides. Coarse nodes X_{i,j} = (iH, jh) for i = 0..N, j = 0..M.
struct ModelProblem {
  int n = 20;
  int m = 50;
  double H() const { return 1.0 / n; }
  double h() const { return 1.0 / (static_cast<double>(n) * m); }
};

struct ModelOptions {
  ThetaPolicy policy = ThetaPolicy::Estimated;
  double fixed_theta = 1.0;
  /// Oracle draws theta = m~ + lambda (Mbar - m~).
  double oracle_lambda = 0.5;
  ThetaParams params;
  int max_k = 30;
};

/// Per-node oracle window at one iteration.
struct OracleBounds {
  double m_tilde = 0.0;
  double m_bar_upper = std::numeric_limits<double>::infinity();  // Mbar
};

struct ModelIterate {
  int k = 0;
  std::vector<double> U;  // (N+1) x (M+1), index i * (M+1) + j
  double linf = 0.0;      // max |U^k - u^f| over coarse nodes
  double l1_abs = 0.0;    // h * sum |U^k - u^f|
  double min_mbar = std::numeric_limits<double>::infinity();
  double max_theta_used = 0.0;
  std::vector<OracleBounds> bounds;  // bounds used for U^k (empty at k = 0)
};

struct ModelRun {
  ModelProblem problem;
  std::vector<double> uf;     // u^f restricted to coarse nodes
  std::vector<double> exact;  // sqrt(x^2 + y^2) at coarse nodes
  std::vector<ModelIterate> iterates;
};

/// Whole-strip fine solution in one upward-right sweep, (NM+1) x (M+1),
/// index p * (M+1) + q.
std::vector<double> model_fine_solution(const ModelProblem& problem);

ModelRun model_run(const ModelProblem& problem, const ModelOptions& options);

/// Oracle window for U^{k+1} given u^k, U^k and the two coarse-solver values.
OracleBounds oracle_bounds(double uf, double u_k, double U_k, double c_new, double c_old);

}  // namespace eikonal
