#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "eikonal/grid.hpp"

namespace eikonal {

struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};
struct Disk {
  double cx = 0, cy = 0, radius = 0;
};
/// Ring sector between two radii. Angles are in degrees, counter-clockwise
/// from +x; the sector covers [begin, end] (end may exceed 360).
struct AnnularArc {
  double cx = 0, cy = 0, r_inner = 0, r_outer = 0, begin_deg = 0, end_deg = 360;
};

struct Obstacle {
  std::variant<Rect, Disk, AnnularArc> shape;
  double value = 1000.0;
};

namespace field_kind {
struct Constant {
  double c = 1.0;
};
struct Gauss1d {
  double center = 0.75;
  double width = 0.01;
  double amplitude = 10.0;
};
struct Sine2d {
  double amplitude = 0.99;
  double frequency = 2.0;
};
struct VarSine {
  double amplitude = 0.5;
};
struct Obstacles {
  std::vector<Obstacle> shapes;
  double outside = 1.0;
};
struct Squares {
  double eps = 0.2;
  double tolerance = 1e-9;
};
struct Checkerboard {
  double eps = 0.1;
  std::uint64_t seed = 0;
};
}  // namespace field_kind

/// Pointwise slowness r(x) > 0 on [0,1]^d. Immutable; evaluation is pure and
/// safe to call concurrently.
class SlownessField {
 public:
  using Kind = std::variant<field_kind::Constant, field_kind::Gauss1d, field_kind::Sine2d,
                            field_kind::VarSine, field_kind::Obstacles, field_kind::Squares,
                            field_kind::Checkerboard>;

  static SlownessField constant(double c);
  /// 1 + a exp(-(x - c)^2 / (2 w^2)); defaults give a narrow bump at 0.75.
  static SlownessField gauss1d(double center = 0.75, double width = 0.01, double amplitude = 10.0);
  /// 1 + A sin(f pi x) sin(f pi y).
  static SlownessField sine2d(double amplitude, double frequency);
  /// 1 + 0.5 sin(pi x / e) sin(pi y / e) with e(x, y) = (|x| + |y| + 0.001) / 50.
  static SlownessField varsine();
  static SlownessField obstacles(std::vector<Obstacle> shapes, double outside = 1.0);
  /// Periodic cell of size eps: r = 1 on the cell's axis lines, 2 elsewhere.
  static SlownessField squares(double eps, double line_tolerance);
  /// Each eps-cell is 1 or 2 with probability 1/2, decided by hashing
  /// (cell index, seed).
  static SlownessField checkerboard(double eps, std::uint64_t seed);

  /// Two ring barriers (one enclosing a whole H = 1/10 subdomain) and a fast
  /// disk. An approximation of a hand-drawn maze, not a reproduction.
  static SlownessField maze();
  /// Thin fast strip [0.26, 0.27] x [0, 0.6] with r = 0.01.
  static SlownessField fast_obstacle();

  /// Throws std::domain_error if the value is not strictly positive.
  double operator()(Point x) const;
  double operator()(double x, double y) const { return (*this)(Point{x, y}); }

  const Kind& kind() const { return kind_; }
  std::string name() const;
  nlohmann::json describe() const;

 private:
  explicit SlownessField(Kind kind) : kind_(std::move(kind)) {}
  double evaluate(Point x) const;

  Kind kind_;
};

/// Builds a catalog field from a kind tag and a JSON parameter object.
/// Throws ConfigError on unknown kinds or invalid parameters.
SlownessField make_catalog_field(const std::string& kind, const nlohmann::json& params,
                                 std::uint64_t seed);

/// splitmix64 finalizer; used as a counter-based hash.
std::uint64_t mix64(std::uint64_t x);

}  // namespace eikonal
