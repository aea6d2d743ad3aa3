#include "eikonal/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "eikonal/errors.hpp"

namespace eikonal {

namespace {

// Guards the strict "closer than one spacing" test against rounding in the
// coordinates of nodes that sit exactly one spacing away.
constexpr double kCollarSlack = 1e-9;

int sign(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

double side_g(SideData data, Point p) {
  return data == SideData::Zero ? 0.0 : std::hypot(p.x, p.y);
}

void consider(std::optional<FixedValue>& best, double value, Wind wind) {
  if (!best || value < best->value) best = FixedValue{value, wind};
}

}  // namespace

std::optional<FixedValue> boundary_value(const BoundarySpec& gamma, const SlownessField& slowness,
                                         Point x, double spacing, double domain_height) {
  std::optional<FixedValue> best;
  const double reach = spacing * (1.0 - kCollarSlack);
  for (const Point& src : gamma.sources) {
    const double dist = std::hypot(x.x - src.x, x.y - src.y);
    if (dist < reach) consider(best, slowness(src) * dist, Wind{sign(x.x - src.x), sign(x.y - src.y)});
  }
  const double eps = spacing * kCollarSlack;
  if ((gamma.sides & kLeft) && std::abs(x.x) < eps)
    consider(best, side_g(gamma.side_data, {0.0, x.y}), Wind{1, 0});
  if ((gamma.sides & kRight) && std::abs(x.x - 1.0) < eps)
    consider(best, side_g(gamma.side_data, {1.0, x.y}), Wind{-1, 0});
  if ((gamma.sides & kBottom) && std::abs(x.y) < eps)
    consider(best, side_g(gamma.side_data, {x.x, 0.0}), Wind{0, 1});
  if ((gamma.sides & kTop) && std::abs(x.y - domain_height) < eps)
    consider(best, side_g(gamma.side_data, {x.x, domain_height}), Wind{0, -1});
  return best;
}

std::vector<Point> fine_points(const GridSpec& spec) {
  const int n = spec.fine_nodes_per_axis();
  const int ny = spec.dim() == 1 ? 1 : n;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n) * ny);
  for (int q = 0; q < ny; ++q)
    for (int p = 0; p < n; ++p) pts.push_back(spec.fine_point(p, q));
  return pts;
}

std::vector<double> sample_slowness(const SlownessField& slowness, const std::vector<Point>& points) {
  std::vector<double> r(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) r[k] = slowness(points[k]);
  return r;
}

std::size_t apply_boundary(Field& field, const std::vector<Point>& points, double spacing,
                           const BoundarySpec& gamma, const SlownessField& slowness, double domain_height) {
  if (points.size() != field.size()) throw std::invalid_argument("apply_boundary: point count mismatch");
  std::size_t pinned = 0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (field.fixed[k]) continue;
    if (auto fv = boundary_value(gamma, slowness, points[k], spacing, domain_height)) {
      field.value[k] = fv->value;
      field.wind[k] = fv->wind;
      field.fixed[k] = 1;
      ++pinned;
    }
  }
  return pinned;
}

ReferenceResult reference_solution(const GridSpec& spec, const SlownessField& slowness,
                                   const BoundarySpec& gamma, const SweepOptions& options) {
  const int n = spec.fine_nodes_per_axis();
  ReferenceResult out{Field(n, spec.dim() == 1 ? 1 : n), {}};
  const auto pts = fine_points(spec);
  if (apply_boundary(out.field, pts, spec.h(), gamma, slowness) == 0)
    throw ConfigError("no grid node lies on or near Gamma", "problem.gamma");
  out.sweep = fsm_solve(out.field, sample_slowness(slowness, pts), spec.h(), options);
  return out;
}

ReferenceResult model_strip_reference(int n, int m, const SweepOptions& options) {
  const GridSpec spec(2, n, m);
  const int nx = spec.fine_nodes_per_axis();
  ReferenceResult out{Field(nx, m + 1), {}};
  std::vector<Point> pts;
  pts.reserve(out.field.size());
  for (int q = 0; q <= m; ++q)
    for (int p = 0; p < nx; ++p) pts.push_back(spec.fine_point(p, q));
  BoundarySpec gamma;
  gamma.sides = kLeft | kBottom;
  gamma.side_data = SideData::Distance;
  const auto one = SlownessField::constant(1.0);
  apply_boundary(out.field, pts, spec.h(), gamma, one, spec.H());
  out.sweep = fsm_solve(out.field, sample_slowness(one, pts), spec.h(), options);
  return out;
}

}  // namespace eikonal
