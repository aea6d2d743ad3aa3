#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace eikonal {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Two-level geometry on [0,1]^d: N coarse cells per axis, each split into M
/// fine cells. Built from integers only, so H == M * h holds exactly in the
/// index arithmetic.
class GridSpec {
 public:
  GridSpec(int dim, int coarse_cells, int fine_per_coarse);

  int dim() const { return dim_; }
  int N() const { return n_; }
  int M() const { return m_; }
  double H() const { return 1.0 / n_; }
  double h() const { return 1.0 / (static_cast<double>(n_) * m_); }

  /// Fine cells per axis (N*M); fine node indices run over [0, N*M].
  int fine_cells() const { return n_ * m_; }
  int fine_nodes_per_axis() const { return n_ * m_ + 1; }
  std::size_t fine_node_count() const;
  int subdomain_count() const { return dim_ == 1 ? n_ : n_ * n_; }

  /// Coordinate of global fine node (p, q); q is ignored in 1D.
  Point fine_point(int p, int q) const;

 private:
  int dim_;
  int n_;
  int m_;
};

// Node families. In 1D only Coarse{i, 0} and Fine{i, 0, l, 0} are used.
struct Coarse {
  int i = 0;
  int j = 0;
};
struct HShift {
  int i = 0;
  int l = 0;
  int j = 0;
};
struct VShift {
  int i = 0;
  int j = 0;
  int m = 0;
};
struct Fine {
  int i = 0;
  int j = 0;
  int l = 0;
  int m = 0;
};
using NodeId = std::variant<Coarse, HShift, VShift, Fine>;

/// Global fine-grid index of a node.
struct FineIndex {
  int p = 0;
  int q = 0;
  friend bool operator==(FineIndex, FineIndex) = default;
};

FineIndex global_index(const GridSpec& spec, const NodeId& id);
Point coords(const GridSpec& spec, const NodeId& id);

struct Normal {
  int x = 0;
  int y = 0;
  friend bool operator==(Normal, Normal) = default;
};

struct BoundaryEntry {
  NodeId node;
  std::array<Normal, 2> normals{};
  int normal_count = 0;  // 2 at subdomain corners, 1 on edges
  int l = 0;             // local fine index inside the subdomain
  int m = 0;
};

struct SubdomainBoundary {
  int i = 0;
  int j = 0;
  std::vector<BoundaryEntry> entries;
};

SubdomainBoundary boundary_of(const GridSpec& spec, int i, int j = 0);

enum class Family { Coarse, HShift, VShift };

/// Dense numbering of every coarse-family node (the non-shifted grid plus all
/// shifted grids). These nodes are exactly the fine nodes lying on the
/// subdomain interface lines x = iH and y = jH.
class Skeleton {
 public:
  explicit Skeleton(const GridSpec& spec);

  std::size_t size() const { return positions_.size(); }
  bool contains(int p, int q) const;
  std::optional<std::size_t> find(int p, int q) const;
  std::size_t index(int p, int q) const;
  std::size_t index(const NodeId& id) const;
  FineIndex position(std::size_t idx) const { return positions_[idx]; }
  Family family(std::size_t idx) const;
  NodeId node(std::size_t idx) const;

 private:
  GridSpec spec_;
  int dim_;
  int n_;
  int m_;
  std::vector<FineIndex> positions_;
};

/// One lattice of spacing H, offset from the origin by (offset_x, offset_y)
/// fine cells. Node (a, b) sits at fine index (offset_x + a*M, offset_y + b*M).
struct CoarseGrid {
  int offset_x = 0;
  int offset_y = 0;
  int nx = 0;
  int ny = 0;
};

/// The non-shifted grid first, then horizontal shifts l = 1..M-1, then
/// vertical shifts m = 1..M-1. 1D has only the non-shifted grid.
std::vector<CoarseGrid> coarse_grids(const GridSpec& spec);

}  // namespace eikonal
