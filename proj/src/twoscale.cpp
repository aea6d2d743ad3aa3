#include "eikonal/twoscale.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "eikonal/errors.hpp"
#include "eikonal/metrics.hpp"
#include "eikonal/parallel.hpp"

namespace eikonal {

namespace {

bool all_nonneg(std::initializer_list<Wind> winds, Normal n) {
  for (const Wind& w : winds)
    if (w.dot(n) < 0) return false;
  return true;
}

Normal flip(Normal n) { return {-n.x, -n.y}; }

double change_between(double a, double b) {
  const bool ia = is_inf(a);
  const bool ib = is_inf(b);
  if (ia && ib) return 0.0;
  if (ia || ib) return kInf;
  return std::abs(a - b);
}

}  // namespace

int merge_pair(const MergeCandidate& c1, const MergeCandidate& c2, Wind coarse, Normal n1) {
  const Normal n2 = flip(n1);
  int pick;
  if (all_nonneg({c1.wind, c2.wind, coarse}, n1)) {
    pick = 1;
  } else if (all_nonneg({c1.wind, c2.wind, coarse}, n2)) {
    pick = 0;
  } else {
    return c1.value <= c2.value ? 0 : 1;
  }
  const MergeCandidate& chosen = pick == 0 ? c1 : c2;
  const MergeCandidate& other = pick == 0 ? c2 : c1;
  if (is_inf(chosen.value) && !is_inf(other.value)) return c1.value <= c2.value ? 0 : 1;
  return pick;
}

int merge_corner(const std::array<std::optional<MergeCandidate>, 4>& cands, Wind coarse) {
  // Inward normals of SW, SE, NW, NE at their shared corner.
  static const std::array<std::array<Normal, 2>, 4> normals{{
      {Normal{-1, 0}, Normal{0, -1}},
      {Normal{1, 0}, Normal{0, -1}},
      {Normal{-1, 0}, Normal{0, 1}},
      {Normal{1, 0}, Normal{0, 1}},
  }};
  int best = -1;
  for (int t = 0; t < 4; ++t) {
    if (!cands[t]) continue;
    if (best < 0 || cands[t]->value < cands[best]->value) best = t;
  }
  if (best < 0) throw std::invalid_argument("merge_corner: no candidates");
  for (int t = 0; t < 4; ++t) {
    bool agree = true;
    for (const Normal& n : normals[t]) {
      if (coarse.dot(n) < 0) agree = false;
      for (const auto& c : cands)
        if (c && c->wind.dot(n) < 0) agree = false;
    }
    if (!agree) continue;
    const int upwind = 3 - t;
    if (!cands[upwind]) return best;
    if (is_inf(cands[upwind]->value) && !is_inf(cands[best]->value)) return best;
    return upwind;
  }
  return best;
}

double boundary_condition(double U, Wind W, const BoundaryEntry& entry) {
  for (int t = 0; t < entry.normal_count; ++t)
    if (W.dot(entry.normals[static_cast<std::size_t>(t)]) > 0) return U;
  return kInf;
}

bool weighted_gate(Wind fine, Wind coarse, Wind candidate, const std::vector<Normal>& normals) {
  for (const Normal& n : normals)
    if (all_nonneg({fine, coarse, candidate}, n)) return true;
  return false;
}

double causal_update(double U, Wind W, double x_minus, double x_plus, double y_minus, double y_plus) {
  if (W.x > 0 && !is_inf(x_minus) && U < x_minus) U = x_minus;
  if (W.x < 0 && !is_inf(x_plus) && U < x_plus) U = x_plus;
  if (W.y > 0 && !is_inf(y_minus) && U < y_minus) U = y_minus;
  if (W.y < 0 && !is_inf(y_plus) && U < y_plus) U = y_plus;
  return U;
}

TwoScaleSolver::TwoScaleSolver(const GridSpec& spec, SlownessField slowness, BoundarySpec gamma,
                               TwoScaleOptions options)
    : spec_(spec),
      slowness_(std::move(slowness)),
      gamma_(std::move(gamma)),
      options_(std::move(options)),
      skeleton_(spec) {
  if (options_.max_iters < 0) throw ConfigError("solver.max_iters must be >= 0", "solver.max_iters");
  if (!(options_.conv_tol >= 0.0)) throw ConfigError("solver.conv_tol must be >= 0", "solver.conv_tol");
  if (options_.coarse_update_rounds < 1)
    throw ConfigError("solver.coarse_update_rounds must be >= 1", "solver.coarse_update_rounds");
  if (options_.policy == ThetaPolicy::Oracle)
    throw ConfigError("the oracle theta policy exists only for the model problem", "theta.policy");
  if (options_.policy == ThetaPolicy::Estimated) options_.theta.validate();
  if (options_.workers < 1) options_.workers = 1;

  const auto pts = fine_points(spec_);
  fine_slowness_ = sample_slowness(slowness_, pts);
  fine_fixed_.assign(pts.size(), 0);
  fine_fixed_value_.assign(pts.size(), FixedValue{});
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (auto fv = boundary_value(gamma_, slowness_, pts[k], spec_.h())) {
      fine_fixed_[k] = 1;
      fine_fixed_value_[k] = *fv;
    }
  }

  coarse_fixed_.assign(skeleton_.size(), 0);
  const int m = spec_.M();
  for (const CoarseGrid& cg : coarse_grids(spec_)) {
    GridData g;
    g.grid = cg;
    const std::size_t count = static_cast<std::size_t>(cg.nx) * cg.ny;
    g.skel.resize(count);
    g.slowness.resize(count);
    g.fixed.assign(count, 0);
    g.fixed_value.assign(count, FixedValue{});
    std::size_t pinned = 0;
    for (int b = 0; b < cg.ny; ++b) {
      for (int a = 0; a < cg.nx; ++a) {
        const std::size_t k = static_cast<std::size_t>(b) * cg.nx + a;
        const int p = cg.offset_x + a * m;
        const int q = spec_.dim() == 1 ? 0 : cg.offset_y + b * m;
        const Point x = spec_.fine_point(p, q);
        g.skel[k] = skeleton_.index(p, q);
        g.slowness[k] = slowness_(x);
        if (auto fv = boundary_value(gamma_, slowness_, x, spec_.H())) {
          g.fixed[k] = 1;
          g.fixed_value[k] = *fv;
          coarse_fixed_[g.skel[k]] = 1;
          ++pinned;
        }
      }
    }
    if (pinned == 0) {
      throw ConfigError("coarse grid with offset (" + std::to_string(cg.offset_x) + ", " +
                            std::to_string(cg.offset_y) + ") has no node near Gamma",
                        "problem.gamma");
    }
    grids_.push_back(std::move(g));
  }

  U_.assign(skeleton_.size(), kInf);
  W_.assign(skeleton_.size(), Wind{});
  u_.assign(skeleton_.size(), kInf);
  w_.assign(skeleton_.size(), Wind{});
  subdomains_.resize(static_cast<std::size_t>(spec_.subdomain_count()));
}

const Field& TwoScaleSolver::subdomain(int i, int j) const {
  return subdomains_.at(static_cast<std::size_t>(j) * spec_.N() + i);
}

Neighbors TwoScaleSolver::grid_neighbors(const GridData& g, const std::vector<double>& values, int a, int b) const {
  const int nx = g.grid.nx;
  const int ny = g.grid.ny;
  auto at = [&](int aa, int bb) { return g.skel[static_cast<std::size_t>(bb) * nx + aa]; };
  Neighbors nb;
  if (a > 0) nb.left = values[at(a - 1, b)];
  if (a + 1 < nx) nb.right = values[at(a + 1, b)];
  if (b > 0) nb.down = values[at(a, b - 1)];
  if (b + 1 < ny) nb.up = values[at(a, b + 1)];
  return nb;
}

std::vector<Normal> TwoScaleSolver::gate_normals(std::size_t idx) const {
  const Normal e{1, 0}, w{-1, 0}, n{0, 1}, s{0, -1};
  if (spec_.dim() == 1) return {e, w};
  switch (skeleton_.family(idx)) {
    case Family::Coarse:
      return {e, w, n, s};
    case Family::HShift:
      return {n, s};
    case Family::VShift:
      return {e, w};
  }
  return {};
}

void TwoScaleSolver::initialize() {
  const double H = spec_.H();
  parallel_for(grids_.size(), options_.workers, [&](std::size_t t) {
    const GridData& g = grids_[t];
    Field f(g.grid.nx, g.grid.ny);
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (!g.fixed[k]) continue;
      f.fixed[k] = 1;
      f.value[k] = g.fixed_value[k].value;
      f.wind[k] = g.fixed_value[k].wind;
    }
    fsm_solve(f, g.slowness, H, options_.coarse_sweep);
    for (std::size_t k = 0; k < f.size(); ++k) {
      U_[g.skel[k]] = f.value[k];
      W_[g.skel[k]] = f.wind[k];
    }
  });
  causal_sweep();
  k_ = 0;
  u_prev_.reset();
  c_hist_.clear();
}

void TwoScaleSolver::causal_sweep() {
  const int m = spec_.M();
  if (spec_.dim() == 1) {
    const int n = spec_.N();
    for (int s1 = -1; s1 <= 1; s1 += 2) {
      for (int ii = 0; ii <= n; ++ii) {
        const int i = s1 > 0 ? ii : n - ii;
        const auto idx = static_cast<std::size_t>(i);
        if (coarse_fixed_[idx]) continue;
        const double xm = i > 0 ? U_[idx - 1] : kInf;
        const double xp = i < n ? U_[idx + 1] : kInf;
        U_[idx] = causal_update(U_[idx], W_[idx], xm, xp, kInf, kInf);
      }
    }
    return;
  }
  const int nm = spec_.fine_cells();
  auto value_at = [&](int p, int q) {
    if (p < 0 || p > nm || q < 0 || q > nm) return kInf;
    const auto idx = skeleton_.find(p, q);
    return idx ? U_[*idx] : kInf;
  };
  for (int s1 = -1; s1 <= 1; s1 += 2) {
    for (int s2 = -1; s2 <= 1; s2 += 2) {
      for (int pp = 0; pp <= nm; ++pp) {
        const int p = s1 > 0 ? pp : nm - pp;
        const bool vertical_line = p % m == 0;
        for (int qq = 0; qq <= nm; ++qq) {
          const int q = s2 > 0 ? qq : nm - qq;
          const bool horizontal_line = q % m == 0;
          if (!vertical_line && !horizontal_line) continue;
          const std::size_t idx = *skeleton_.find(p, q);
          if (coarse_fixed_[idx]) continue;
          const double xm = horizontal_line ? value_at(p - 1, q) : kInf;
          const double xp = horizontal_line ? value_at(p + 1, q) : kInf;
          const double ym = vertical_line ? value_at(p, q - 1) : kInf;
          const double yp = vertical_line ? value_at(p, q + 1) : kInf;
          U_[idx] = causal_update(U_[idx], W_[idx], xm, xp, ym, yp);
        }
      }
    }
  }
}

std::vector<double> TwoScaleSolver::subdomain_bcs(int i, int j) const {
  const auto boundary = boundary_of(spec_, i, j);
  std::vector<double> out;
  out.reserve(boundary.entries.size());
  for (const auto& e : boundary.entries) {
    const std::size_t idx = skeleton_.index(e.node);
    out.push_back(boundary_condition(U_[idx], W_[idx], e));
  }
  return out;
}

void TwoScaleSolver::solve_fine() {
  const int n = spec_.N();
  const int m = spec_.M();
  const bool one_d = spec_.dim() == 1;
  const int side = m + 1;
  const auto row = static_cast<std::size_t>(spec_.fine_nodes_per_axis());
  parallel_for(subdomains_.size(), options_.workers, [&](std::size_t t) {
    const int i = static_cast<int>(t) % n;
    const int j = one_d ? 0 : static_cast<int>(t) / n;
    Field f(side, one_d ? 1 : side);
    std::vector<double> r(f.size());
    for (int mm = 0; mm < f.ny; ++mm) {
      for (int l = 0; l < f.nx; ++l) {
        const std::size_t loc = f.at(l, mm);
        const std::size_t glob = static_cast<std::size_t>(j * m + mm) * row + static_cast<std::size_t>(i * m + l);
        r[loc] = fine_slowness_[glob];
        if (fine_fixed_[glob]) {
          f.fixed[loc] = 1;
          f.value[loc] = fine_fixed_value_[glob].value;
          f.wind[loc] = fine_fixed_value_[glob].wind;
        }
      }
    }
    const auto boundary = boundary_of(spec_, i, j);
    for (const auto& e : boundary.entries) {
      const std::size_t loc = f.at(e.l, e.m);
      if (f.fixed[loc]) continue;
      const std::size_t idx = skeleton_.index(e.node);
      const double v = boundary_condition(U_[idx], W_[idx], e);
      if (is_inf(v)) continue;
      // Seeded, not pinned: the sweep may still lower it from the interior.
      f.value[loc] = v;
      f.wind[loc] = W_[idx];
    }
    fsm_solve(f, r, spec_.h(), options_.fine_sweep);
    subdomains_[t] = std::move(f);
  });
  merge();
}

void TwoScaleSolver::merge() {
  const int n = spec_.N();
  const int m = spec_.M();
  auto cand = [&](int i, int j, int l, int mm) {
    const Field& f = subdomain(i, j);
    const std::size_t k = f.at(l, mm);
    return MergeCandidate{f.value[k], f.wind[k]};
  };
  for (std::size_t idx = 0; idx < skeleton_.size(); ++idx) {
    const auto [p, q] = skeleton_.position(idx);
    MergeCandidate chosen;
    if (spec_.dim() == 1) {
      const int i = p / m;
      if (i == 0) {
        chosen = cand(0, 0, 0, 0);
      } else if (i == n) {
        chosen = cand(n - 1, 0, m, 0);
      } else {
        const auto a = cand(i - 1, 0, m, 0);
        const auto b = cand(i, 0, 0, 0);
        chosen = merge_pair(a, b, W_[idx], Normal{-1, 0}) == 0 ? a : b;
      }
    } else if (p % m == 0 && q % m == 0) {
      const int i = p / m;
      const int j = q / m;
      std::array<std::optional<MergeCandidate>, 4> c{};
      if (i > 0 && j > 0) c[0] = cand(i - 1, j - 1, m, m);
      if (i < n && j > 0) c[1] = cand(i, j - 1, 0, m);
      if (i > 0 && j < n) c[2] = cand(i - 1, j, m, 0);
      if (i < n && j < n) c[3] = cand(i, j, 0, 0);
      const int present = static_cast<int>(std::count_if(c.begin(), c.end(), [](const auto& o) { return o.has_value(); }));
      if (present == 4) {
        chosen = *c[static_cast<std::size_t>(merge_corner(c, W_[idx]))];
      } else if (present == 1) {
        for (const auto& o : c)
          if (o) chosen = *o;
      } else {
        // Domain edge: two subdomains side by side along one axis.
        std::optional<MergeCandidate> lo, hi;
        Normal n1;
        if (j == 0) {
          lo = c[2], hi = c[3], n1 = Normal{-1, 0};
        } else if (j == n) {
          lo = c[0], hi = c[1], n1 = Normal{-1, 0};
        } else if (i == 0) {
          lo = c[1], hi = c[3], n1 = Normal{0, -1};
        } else {
          lo = c[0], hi = c[2], n1 = Normal{0, -1};
        }
        chosen = merge_pair(*lo, *hi, W_[idx], n1) == 0 ? *lo : *hi;
      }
    } else if (q % m == 0) {
      const int i = p / m;
      const int l = p % m;
      const int j = q / m;
      if (j == 0) {
        chosen = cand(i, 0, l, 0);
      } else if (j == n) {
        chosen = cand(i, n - 1, l, m);
      } else {
        const auto a = cand(i, j - 1, l, m);
        const auto b = cand(i, j, l, 0);
        chosen = merge_pair(a, b, W_[idx], Normal{0, -1}) == 0 ? a : b;
      }
    } else {
      const int i = p / m;
      const int j = q / m;
      const int mm = q % m;
      if (i == 0) {
        chosen = cand(0, j, 0, mm);
      } else if (i == n) {
        chosen = cand(n - 1, j, m, mm);
      } else {
        const auto a = cand(i - 1, j, m, mm);
        const auto b = cand(i, j, 0, mm);
        chosen = merge_pair(a, b, W_[idx], Normal{-1, 0}) == 0 ? a : b;
      }
    }
    u_[idx] = chosen.value;
    w_[idx] = chosen.wind;
  }
}

std::vector<double> TwoScaleSolver::coarse_solver_values(const std::vector<double>& U) const {
  std::vector<double> c(skeleton_.size(), kInf);
  const double H = spec_.H();
  for (const GridData& g : grids_) {
    for (int b = 0; b < g.grid.ny; ++b) {
      for (int a = 0; a < g.grid.nx; ++a) {
        const std::size_t k = static_cast<std::size_t>(b) * g.grid.nx + a;
        c[g.skel[k]] = local_candidate(grid_neighbors(g, U, a, b), g.slowness[k], H).value;
      }
    }
  }
  return c;
}

void TwoScaleSolver::sweep_coarse_grid(const GridData& g, const std::vector<double>& theta) {
  const double H = spec_.H();
  const int nx = g.grid.nx;
  const int ny = g.grid.ny;
  Field f(nx, ny);
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!g.fixed[k]) continue;
    const std::size_t idx = g.skel[k];
    f.fixed[k] = 1;
    if (!is_inf(u_[idx])) {
      f.value[k] = u_[idx];
      f.wind[k] = w_[idx];
    } else {
      f.value[k] = g.fixed_value[k].value;
      f.wind[k] = g.fixed_value[k].wind;
    }
  }
  const int y_orders = ny > 1 ? 2 : 1;
  for (int round = 0; round < options_.coarse_update_rounds; ++round) {
    for (int s1 = -1; s1 <= 1; s1 += 2) {
      for (int t = 0; t < y_orders; ++t) {
        const int s2 = t == 0 ? -1 : 1;
        for (int aa = 0; aa < nx; ++aa) {
          const int a = s1 > 0 ? aa : nx - 1 - aa;
          for (int bb = 0; bb < ny; ++bb) {
            const int b = s2 > 0 ? bb : ny - 1 - bb;
            const std::size_t k = f.at(a, b);
            if (f.fixed[k]) continue;
            const std::size_t idx = g.skel[k];
            const LocalResult cand = local_candidate(f.neighbors(a, b), g.slowness[k], H);
            if (is_inf(u_[idx])) {
              if (cand.value < f.value[k]) {
                f.value[k] = cand.value;
                f.wind[k] = cand.wind;
              }
              continue;
            }
            if (!is_inf(cand.value) && !is_inf(c_old_[idx]) &&
                weighted_gate(w_[idx], W_[idx], cand.wind, gate_normals(idx))) {
              // u + theta (Ut - C_old): exact fixed point once Ut == C_old.
              f.value[k] = u_[idx] + theta[idx] * (cand.value - c_old_[idx]);
            } else {
              f.value[k] = u_[idx];
            }
            f.wind[k] = w_[idx];
          }
        }
      }
    }
  }
  for (std::size_t k = 0; k < f.size(); ++k) {
    U_next_[g.skel[k]] = f.value[k];
    W_next_[g.skel[k]] = f.wind[k];
  }
}

std::pair<double, bool> TwoScaleSolver::coarse_update(IterationRecord* diag) {
  const std::size_t count = skeleton_.size();
  c_old_ = coarse_solver_values(U_);
  c_hist_.push_front(c_old_);
  if (c_hist_.size() > 4) c_hist_.pop_back();

  theta_bar_.assign(count, 0.0);
  theta_used_.assign(count, 0.0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    if (options_.policy == ThetaPolicy::Fixed) {
      theta_bar_[idx] = theta_used_[idx] = options_.fixed_theta;
      continue;
    }
    ThetaHistory h;
    if (!is_inf(u_[idx])) h.u_k = u_[idx];
    if (u_prev_ && !is_inf((*u_prev_)[idx])) h.u_km1 = (*u_prev_)[idx];
    for (std::size_t s = 0; s < c_hist_.size(); ++s)
      if (!is_inf(c_hist_[s][idx])) h.c[s] = c_hist_[s][idx];
    const ThetaChoice choice = choose_theta(h, options_.theta);
    theta_bar_[idx] = choice.theta_bar;
    theta_used_[idx] = choice.used;
  }

  U_next_.assign(count, kInf);
  W_next_.assign(count, Wind{});
  parallel_for(grids_.size(), options_.workers,
               [&](std::size_t t) { sweep_coarse_grid(grids_[t], theta_used_); });

  if (diag) {
    diag->weighted_nodes = 0;
    diag->max_theta_bar = 0.0;
    diag->max_theta_used = 0.0;
    for (std::size_t idx = 0; idx < count; ++idx) {
      if (coarse_fixed_[idx] || is_inf(u_[idx]) || U_next_[idx] == u_[idx]) continue;
      ++diag->weighted_nodes;
      diag->max_theta_bar = std::max(diag->max_theta_bar, theta_bar_[idx]);
      diag->max_theta_used = std::max(diag->max_theta_used, theta_used_[idx]);
    }
  }

  std::vector<double> previous = std::move(U_);
  const std::vector<Wind> previous_w = W_;
  U_ = std::move(U_next_);
  W_ = std::move(W_next_);
  U_next_.clear();
  W_next_.clear();
  causal_sweep();

  double change = 0.0;
  for (std::size_t idx = 0; idx < count; ++idx) change = std::max(change, change_between(U_[idx], previous[idx]));
  const bool winds_changed = W_ != previous_w;
  u_prev_ = u_;
  ++k_;
  return {change, winds_changed};
}

std::vector<double> TwoScaleSolver::patched_fine() const {
  const int n = spec_.N();
  const int m = spec_.M();
  const auto row = static_cast<std::size_t>(spec_.fine_nodes_per_axis());
  std::vector<double> out(spec_.fine_node_count(), kInf);
  for (std::size_t t = 0; t < subdomains_.size(); ++t) {
    const Field& f = subdomains_[t];
    if (f.size() == 0) continue;
    const int i = static_cast<int>(t) % n;
    const int j = spec_.dim() == 1 ? 0 : static_cast<int>(t) / n;
    for (int mm = 0; mm < f.ny; ++mm)
      for (int l = 0; l < f.nx; ++l)
        out[static_cast<std::size_t>(j * m + mm) * row + static_cast<std::size_t>(i * m + l)] = f.value[f.at(l, mm)];
  }
  for (std::size_t idx = 0; idx < skeleton_.size(); ++idx) {
    const auto [p, q] = skeleton_.position(idx);
    out[static_cast<std::size_t>(q) * row + static_cast<std::size_t>(p)] = u_[idx];
  }
  return out;
}

std::vector<double> TwoScaleSolver::restrict_to_skeleton(const std::vector<double>& global) const {
  if (global.size() != spec_.fine_node_count()) throw std::invalid_argument("restrict_to_skeleton: size mismatch");
  const auto row = static_cast<std::size_t>(spec_.fine_nodes_per_axis());
  std::vector<double> out(skeleton_.size());
  for (std::size_t idx = 0; idx < skeleton_.size(); ++idx) {
    const auto [p, q] = skeleton_.position(idx);
    out[idx] = global[static_cast<std::size_t>(q) * row + static_cast<std::size_t>(p)];
  }
  return out;
}

RunResult TwoScaleSolver::run(const std::vector<double>& reference,
                              const std::function<void(const TwoScaleSolver&, const IterationRecord&)>& observer) {
  using Clock = std::chrono::steady_clock;
  const auto ref_skel = restrict_to_skeleton(reference);
  const double line_weight = spec_.dim() == 1 ? spec_.H() : spec_.h();

  auto t0 = Clock::now();
  initialize();
  RunResult result;
  IterationRecord pending;
  bool converged = false;
  for (;;) {
    solve_fine();
    IterationRecord rec = pending;
    rec.k = k_;
    rec.l1_rel = l1_relative(U_, ref_skel);
    rec.l1_abs = l1_abs(U_, ref_skel, line_weight);
    rec.linf = linf(U_, ref_skel);
    const auto patched = patched_fine();
    rec.fine_l1_rel = l1_relative(patched, reference);
    rec.fine_linf = linf(patched, reference);
    rec.coarse_fine_gap = linf(U_, u_);
    rec.converged = converged;
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    result.history.push_back(rec);
    if (observer) observer(*this, rec);
    if (converged || k_ >= options_.max_iters) break;

    t0 = Clock::now();
    pending = IterationRecord{};
    const auto [change, winds_changed] = coarse_update(&pending);
    pending.max_change = change;
    pending.winds_changed = winds_changed;
    converged = change < options_.conv_tol && !winds_changed;
  }
  result.converged = converged;
  result.iterations = k_;
  return result;
}

}  // namespace eikonal
