#include "eikonal/grid.hpp"

#include <stdexcept>
#include <string>
#include <type_traits>

namespace eikonal {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::out_of_range(what);
}

}  // namespace

GridSpec::GridSpec(int dim, int coarse_cells, int fine_per_coarse)
    : dim_(dim), n_(coarse_cells), m_(fine_per_coarse) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("GridSpec: dimension must be 1 or 2");
  if (coarse_cells < 2) throw std::invalid_argument("GridSpec: N must be >= 2");
  if (fine_per_coarse < 2) throw std::invalid_argument("GridSpec: M must be >= 2");
}

std::size_t GridSpec::fine_node_count() const {
  const auto n = static_cast<std::size_t>(fine_nodes_per_axis());
  return dim_ == 1 ? n : n * n;
}

Point GridSpec::fine_point(int p, int q) const {
  const double nm = static_cast<double>(fine_cells());
  return {p / nm, dim_ == 1 ? 0.0 : q / nm};
}

FineIndex global_index(const GridSpec& spec, const NodeId& id) {
  const int n = spec.N();
  const int m = spec.M();
  const bool one_d = spec.dim() == 1;
  return std::visit(
      [&](const auto& node) -> FineIndex {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Coarse>) {
          require(node.i >= 0 && node.i <= n, "Coarse: i out of range");
          require(one_d ? node.j == 0 : (node.j >= 0 && node.j <= n), "Coarse: j out of range");
          return {node.i * m, node.j * m};
        } else if constexpr (std::is_same_v<T, HShift>) {
          require(!one_d, "HShift nodes do not exist in 1D");
          require(node.i >= 0 && node.i <= n - 1, "HShift: i out of range");
          require(node.l >= 1 && node.l <= m - 1, "HShift: l out of range");
          require(node.j >= 0 && node.j <= n, "HShift: j out of range");
          return {node.i * m + node.l, node.j * m};
        } else if constexpr (std::is_same_v<T, VShift>) {
          require(!one_d, "VShift nodes do not exist in 1D");
          require(node.i >= 0 && node.i <= n, "VShift: i out of range");
          require(node.j >= 0 && node.j <= n - 1, "VShift: j out of range");
          require(node.m >= 1 && node.m <= m - 1, "VShift: m out of range");
          return {node.i * m, node.j * m + node.m};
        } else {
          require(node.i >= 0 && node.i <= n - 1, "Fine: i out of range");
          require(node.l >= 0 && node.l <= m, "Fine: l out of range");
          if (one_d) {
            require(node.j == 0 && node.m == 0, "Fine: j, m must be 0 in 1D");
          } else {
            require(node.j >= 0 && node.j <= n - 1, "Fine: j out of range");
            require(node.m >= 0 && node.m <= m, "Fine: m out of range");
          }
          return {node.i * m + node.l, node.j * m + node.m};
        }
      },
      id);
}

Point coords(const GridSpec& spec, const NodeId& id) {
  const auto g = global_index(spec, id);
  return spec.fine_point(g.p, g.q);
}

SubdomainBoundary boundary_of(const GridSpec& spec, int i, int j) {
  const int n = spec.N();
  const int m = spec.M();
  if (i < 0 || i >= n) throw std::out_of_range("boundary_of: subdomain i out of range");
  SubdomainBoundary out{i, j, {}};

  if (spec.dim() == 1) {
    if (j != 0) throw std::out_of_range("boundary_of: j must be 0 in 1D");
    out.entries.push_back({Coarse{i, 0}, {Normal{1, 0}, Normal{}}, 1, 0, 0});
    out.entries.push_back({Coarse{i + 1, 0}, {Normal{-1, 0}, Normal{}}, 1, m, 0});
    return out;
  }
  if (j < 0 || j >= n) throw std::out_of_range("boundary_of: subdomain j out of range");

  const Normal east{1, 0}, west{-1, 0}, north{0, 1}, south{0, -1};
  out.entries.reserve(static_cast<std::size_t>(4 * m));
  out.entries.push_back({Coarse{i, j}, {east, north}, 2, 0, 0});
  out.entries.push_back({Coarse{i + 1, j}, {west, north}, 2, m, 0});
  out.entries.push_back({Coarse{i, j + 1}, {east, south}, 2, 0, m});
  out.entries.push_back({Coarse{i + 1, j + 1}, {west, south}, 2, m, m});
  for (int l = 1; l < m; ++l) {
    out.entries.push_back({HShift{i, l, j}, {north, Normal{}}, 1, l, 0});
    out.entries.push_back({HShift{i, l, j + 1}, {south, Normal{}}, 1, l, m});
  }
  for (int mm = 1; mm < m; ++mm) {
    out.entries.push_back({VShift{i, j, mm}, {east, Normal{}}, 1, 0, mm});
    out.entries.push_back({VShift{i + 1, j, mm}, {west, Normal{}}, 1, m, mm});
  }
  return out;
}

Skeleton::Skeleton(const GridSpec& spec)
    : spec_(spec), dim_(spec.dim()), n_(spec.N()), m_(spec.M()) {
  const int nm = n_ * m_;
  if (dim_ == 1) {
    for (int i = 0; i <= n_; ++i) positions_.push_back({i * m_, 0});
    return;
  }
  positions_.reserve(static_cast<std::size_t>((n_ + 1) * (nm + 1) + (n_ + 1) * n_ * (m_ - 1)));
  for (int j = 0; j <= n_; ++j)
    for (int p = 0; p <= nm; ++p) positions_.push_back({p, j * m_});
  for (int i = 0; i <= n_; ++i)
    for (int q = 0; q <= nm; ++q)
      if (q % m_ != 0) positions_.push_back({i * m_, q});
}

bool Skeleton::contains(int p, int q) const {
  const int nm = n_ * m_;
  if (p < 0 || p > nm) return false;
  if (dim_ == 1) return q == 0 && p % m_ == 0;
  if (q < 0 || q > nm) return false;
  return p % m_ == 0 || q % m_ == 0;
}

std::optional<std::size_t> Skeleton::find(int p, int q) const {
  if (!contains(p, q)) return std::nullopt;
  const auto nm1 = static_cast<std::size_t>(n_ * m_ + 1);
  if (dim_ == 1) return static_cast<std::size_t>(p / m_);
  if (q % m_ == 0) return static_cast<std::size_t>(q / m_) * nm1 + static_cast<std::size_t>(p);
  const std::size_t base = static_cast<std::size_t>(n_ + 1) * nm1;
  const auto per_line = static_cast<std::size_t>(n_ * (m_ - 1));
  return base + static_cast<std::size_t>(p / m_) * per_line +
         static_cast<std::size_t>(q / m_) * static_cast<std::size_t>(m_ - 1) +
         static_cast<std::size_t>(q % m_ - 1);
}

std::size_t Skeleton::index(int p, int q) const {
  auto idx = find(p, q);
  if (!idx) {
    throw std::out_of_range("Skeleton: (" + std::to_string(p) + ", " + std::to_string(q) +
                            ") is not a coarse-family node");
  }
  return *idx;
}

std::size_t Skeleton::index(const NodeId& id) const {
  if (std::holds_alternative<Fine>(id)) throw std::invalid_argument("Skeleton: fine node id");
  const auto g = global_index(spec_, id);
  return index(g.p, g.q);
}

Family Skeleton::family(std::size_t idx) const {
  const auto [p, q] = positions_[idx];
  if (dim_ == 1 || (p % m_ == 0 && q % m_ == 0)) return Family::Coarse;
  return q % m_ == 0 ? Family::HShift : Family::VShift;
}

NodeId Skeleton::node(std::size_t idx) const {
  const auto [p, q] = positions_[idx];
  switch (family(idx)) {
    case Family::Coarse:
      return Coarse{p / m_, q / m_};
    case Family::HShift:
      return HShift{p / m_, p % m_, q / m_};
    case Family::VShift:
      return VShift{p / m_, q / m_, q % m_};
  }
  return Coarse{};
}

std::vector<CoarseGrid> coarse_grids(const GridSpec& spec) {
  const int n = spec.N();
  const int m = spec.M();
  if (spec.dim() == 1) return {CoarseGrid{0, 0, n + 1, 1}};
  std::vector<CoarseGrid> grids;
  grids.reserve(static_cast<std::size_t>(1 + 2 * (m - 1)));
  grids.push_back({0, 0, n + 1, n + 1});
  for (int l = 1; l < m; ++l) grids.push_back({l, 0, n, n + 1});
  for (int mm = 1; mm < m; ++mm) grids.push_back({0, mm, n + 1, n});
  return grids;
}

}  // namespace eikonal
