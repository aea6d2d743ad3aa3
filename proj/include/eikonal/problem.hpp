#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eikonal/grid.hpp"
#include "eikonal/slowness.hpp"
#include "eikonal/sweep.hpp"

namespace eikonal {

/// Sides of the unit square (or of the model strip) that belong to Gamma.
enum Side : unsigned { kLeft = 1U, kRight = 2U, kBottom = 4U, kTop = 8U };

/// Boundary data on a marked side.
enum class SideData {
  Zero,      // g = 0
  Distance,  // g = Euclidean distance to the origin
};

/// The set Gamma and the data g on it: point sources (g = 0 there) plus any
/// marked sides of the domain.
struct BoundarySpec {
  std::vector<Point> sources;
  unsigned sides = 0;
  SideData side_data = SideData::Zero;
};

struct FixedValue {
  double value = kInf;
  Wind wind;
};

/// Decides whether the node at x is pinned by Gamma on a lattice of the given
/// spacing. A node is pinned when it lies strictly closer than one spacing to
/// a source, or exactly on a marked side. The pinned value is the slowness
/// times the distance to the source (or g on the side); the wind points away
/// from the source (or along the inward normal of the side).
std::optional<FixedValue> boundary_value(const BoundarySpec& gamma, const SlownessField& slowness,
                                         Point x, double spacing, double domain_height = 1.0);

/// Coordinates of every node of the global fine grid, (p, q) at index
/// q * (NM+1) + p. Built from integer indices so every grid family sees
/// bit-identical coordinates.
std::vector<Point> fine_points(const GridSpec& spec);

std::vector<double> sample_slowness(const SlownessField& slowness, const std::vector<Point>& points);

/// Pins Gamma nodes in `field` (leaving existing fixed nodes untouched).
/// `points` gives the coordinate of every field node. Returns the number of
/// nodes pinned.
std::size_t apply_boundary(Field& field, const std::vector<Point>& points, double spacing,
                           const BoundarySpec& gamma, const SlownessField& slowness,
                           double domain_height = 1.0);

/// Whole-domain fine FSM: the ground truth u^f. In 1D the field has ny == 1.
struct ReferenceResult {
  Field field;
  SweepResult sweep;
};

ReferenceResult reference_solution(const GridSpec& spec, const SlownessField& slowness,
                                   const BoundarySpec& gamma, const SweepOptions& options = {});

/// Model strip [0,1] x [0,H] on the fine grid, (NM+1) x (M+1), with r = 1 and
/// u = sqrt(x^2 + y^2) on the bottom and left sides.
ReferenceResult model_strip_reference(int n, int m, const SweepOptions& options = {});

}  // namespace eikonal
