#include "eikonal/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eikonal {

double godunov_solve(double a, double b, double r, double s) {
  const bool a_inf = is_inf(a);
  const bool b_inf = is_inf(b);
  if (a_inf && b_inf) return kInf;
  const double rs = r * s;
  if (a_inf) return b + rs;
  if (b_inf) return a + rs;
  const double d = a - b;
  if (std::abs(d) < rs) return 0.5 * (a + b + std::sqrt(2.0 * rs * rs - d * d));
  return std::min(a, b) + rs;
}

LocalResult local_candidate(const Neighbors& nb, double r, double s) {
  const int wx = nb.left < nb.right ? 1 : -1;
  const int wy = nb.down < nb.up ? 1 : -1;
  const double a = std::min(nb.left, nb.right);
  const double b = std::min(nb.down, nb.up);
  LocalResult out;
  out.value = godunov_solve(a, b, r, s);
  if (is_inf(out.value)) return out;
  if (out.value < b) {
    out.wind = {wx, 0};
  } else if (out.value < a) {
    out.wind = {0, wy};
  } else {
    out.wind = {wx, wy};
  }
  return out;
}

LocalResult local_update(const Neighbors& nb, double current, Wind current_wind, double r, double s) {
  const LocalResult cand = local_candidate(nb, r, s);
  if (cand.value < current) return cand;
  return {current, current_wind};
}

Field::Field(int nx_, int ny_) : nx(nx_), ny(ny_) {
  if (nx_ < 1 || ny_ < 1) throw std::invalid_argument("Field: empty lattice");
  const auto n = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  value.assign(n, kInf);
  wind.assign(n, Wind{});
  fixed.assign(n, 0);
}

Neighbors Field::neighbors(int i, int j) const {
  Neighbors nb;
  if (i > 0) nb.left = value[at(i - 1, j)];
  if (i + 1 < nx) nb.right = value[at(i + 1, j)];
  if (j > 0) nb.down = value[at(i, j - 1)];
  if (j + 1 < ny) nb.up = value[at(i, j + 1)];
  return nb;
}

double default_sweep_tol(int dim, const std::vector<double>& slowness) {
  double rmax = 0.0;
  for (double r : slowness) rmax = std::max(rmax, r);
  return 1e-12 * std::sqrt(static_cast<double>(dim)) * rmax;
}

SweepResult fsm_solve(Field& field, const std::vector<double>& slowness, double spacing,
                      const SweepOptions& options) {
  if (slowness.size() != field.size()) throw std::invalid_argument("fsm_solve: slowness size mismatch");
  if (options.max_rounds < 1) throw std::invalid_argument("fsm_solve: max_rounds must be >= 1");
  const int dim = field.ny > 1 ? 2 : 1;
  const double tol = options.tol >= 0.0 ? options.tol : default_sweep_tol(dim, slowness);
  const int nx = field.nx;
  const int ny = field.ny;
  const int y_orders = dim == 2 ? 2 : 1;

  SweepResult result;
  for (int round = 0; round < options.max_rounds; ++round) {
    double change = 0.0;
    for (int s1 = -1; s1 <= 1; s1 += 2) {
      for (int t = 0; t < y_orders; ++t) {
        const int s2 = t == 0 ? -1 : 1;
        for (int ii = 0; ii < nx; ++ii) {
          const int i = s1 > 0 ? ii : nx - 1 - ii;
          for (int jj = 0; jj < ny; ++jj) {
            const int j = s2 > 0 ? jj : ny - 1 - jj;
            const std::size_t k = field.at(i, j);
            if (field.fixed[k]) continue;
            const double old = field.value[k];
            const LocalResult res = local_update(field.neighbors(i, j), old, field.wind[k], slowness[k], spacing);
            if (res.value < old) {
              change = std::max(change, is_inf(old) ? kInf : old - res.value);
              field.value[k] = res.value;
              field.wind[k] = res.wind;
            }
          }
        }
      }
    }
    result.rounds = round + 1;
    result.max_change = change;
    if (change < tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace eikonal
