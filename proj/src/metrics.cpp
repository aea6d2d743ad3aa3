#include "eikonal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eikonal {

namespace {

void require_same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("metrics: node sets differ in size");
}

}  // namespace

double l1_relative(const std::vector<double>& U, const std::vector<double>& ref) {
  require_same(U, ref);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < U.size(); ++k) {
    num += std::abs(U[k] - ref[k]);
    den += std::abs(ref[k]);
  }
  if (den == 0.0) throw std::invalid_argument("l1_relative: reference is identically zero");
  return num / den;
}

double l1_abs(const std::vector<double>& U, const std::vector<double>& ref, double weight) {
  require_same(U, ref);
  double sum = 0.0;
  for (std::size_t k = 0; k < U.size(); ++k) sum += std::abs(U[k] - ref[k]);
  return weight * sum;
}

double linf(const std::vector<double>& U, const std::vector<double>& ref) {
  require_same(U, ref);
  double out = 0.0;
  for (std::size_t k = 0; k < U.size(); ++k) out = std::max(out, std::abs(U[k] - ref[k]));
  return out;
}

double fsm_flops(double c, int n, int d) {
  return c * std::pow(2.0, d) * std::pow(n + 1.0, d);
}

FlopEstimate speedup_threshold(const FlopModel& model) {
  if (model.n < 1 || model.m < 1 || model.k < 1 || !(model.c > 0.0) || (model.d != 1 && model.d != 2))
    throw std::invalid_argument("FlopModel: N, M, k, C must be positive and d in {1, 2}");
  const int d = model.d;
  const double two_d = std::pow(2.0, d);
  const double causal = two_d * std::pow(model.m, d - 1) * std::pow(model.n + 1.0, d);
  const double grids = d == 1 ? 1.0 : static_cast<double>(d) * model.m;

  FlopEstimate e;
  e.serial = fsm_flops(model.c, model.n * model.m, d);
  e.coarse_phase = grids * fsm_flops(model.c, model.n, d) + causal;
  e.fine_phase = std::pow(model.n, d) * fsm_flops(model.c, model.m, d);
  e.parallel_per_iteration = fsm_flops(model.c, model.n, d) + fsm_flops(model.c, model.m, d) + causal;
  e.threshold = e.serial / e.parallel_per_iteration;
  e.speedup = e.serial / (model.k * e.parallel_per_iteration);
  return e;
}

}  // namespace eikonal
