#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "eikonal/grid.hpp"

namespace eikonal {

/// Marks an unreached node. Half the largest double, so sums of two INFs
/// never overflow.
inline constexpr double kInf = std::numeric_limits<double>::max() / 2;
inline bool is_inf(double v) { return v >= kInf; }

/// Characteristic flow direction. +1 on an axis means the flow moves toward
/// +axis, i.e. the upwind neighbor sits on the -axis side. Zero is Unset.
struct Wind {
  int x = 0;
  int y = 0;
  bool unset() const { return x == 0 && y == 0; }
  int dot(Normal n) const { return x * n.x + y * n.y; }
  friend bool operator==(Wind, Wind) = default;
};

/// Closed-form Godunov update for the two upwind values a (x) and b (y).
double godunov_solve(double a, double b, double r, double s);

struct Neighbors {
  double left = kInf;
  double right = kInf;
  double down = kInf;
  double up = kInf;
};

struct LocalResult {
  double value = kInf;
  Wind wind;
};

/// Candidate value and wind from the neighbors, ignoring the current value.
LocalResult local_candidate(const Neighbors& nb, double r, double s);

/// Min-update: the candidate replaces `current` only when strictly smaller.
LocalResult local_update(const Neighbors& nb, double current, Wind current_wind, double r, double s);

/// Values, winds and fixed flags on an nx-by-ny node lattice (ny == 1 in 1D).
/// Node (i, j) is stored at j * nx + i.
struct Field {
  Field() = default;
  Field(int nx, int ny);

  int nx = 0;
  int ny = 0;
  std::vector<double> value;
  std::vector<Wind> wind;
  std::vector<std::uint8_t> fixed;

  std::size_t size() const { return value.size(); }
  std::size_t at(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Neighbors neighbors(int i, int j) const;
};

struct SweepOptions {
  int max_rounds = 50;
  double tol = -1.0;  // negative: 1e-12 * sqrt(d) * max slowness
};

struct SweepResult {
  int rounds = 0;
  bool converged = false;
  double max_change = 0.0;
};

/// Gauss-Seidel sweeps over the 2^d axis-sign orderings until a full round
/// changes no value by tol or more. `slowness` holds r at every node.
SweepResult fsm_solve(Field& field, const std::vector<double>& slowness, double spacing,
                      const SweepOptions& options = {});

double default_sweep_tol(int dim, const std::vector<double>& slowness);

}  // namespace eikonal
