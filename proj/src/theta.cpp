#include "eikonal/theta.hpp"

#include <algorithm>
#include <cmath>

#include "eikonal/errors.hpp"

namespace eikonal {

void ThetaParams::validate() const {
  if (!(gamma > 0.0)) throw ConfigError("theta.gamma must be positive", "theta.gamma");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("theta.delta must lie in (0, 1]", "theta.delta");
  double total = 0.0;
  for (double w : omega) {
    if (!(w >= 0.0)) throw ConfigError("theta.omega entries must be >= 0", "theta.omega");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("theta.omega must not be all zero", "theta.omega");
  if (!(bootstrap >= 0.0)) throw ConfigError("theta.bootstrap must be >= 0", "theta.bootstrap");
  if (!(cap >= 0.0)) throw ConfigError("theta.cap must be >= 0", "theta.cap");
  if (!(denom_guard >= 0.0)) throw ConfigError("theta.denom_guard must be >= 0", "theta.denom_guard");
}

namespace {

std::optional<double> try_estimate(const ThetaHistory& history, const ThetaParams& params) {
  if (!history.u_k || !history.u_km1 || !history.c[0] || !history.c[1]) return std::nullopt;
  double weighted = 0.0;
  double weights = 0.0;
  for (std::size_t s = 0; s < 3; ++s) {
    if (!history.c[s] || !history.c[s + 1]) break;
    const double w = params.omega[s];
    if (w == 0.0) continue;
    weighted += w * (*history.c[s] - *history.c[s + 1]);
    weights += w;
  }
  // All available weights zero: fall back to the single most recent term.
  if (weights == 0.0) {
    weighted = *history.c[0] - *history.c[1];
    weights = 1.0;
  }
  const double denom = weighted / weights;
  if (!(std::abs(denom) >= params.denom_guard) || denom == 0.0) return std::nullopt;
  return (*history.u_k - *history.u_km1) / denom;
}

}  // namespace

double estimate_theta(const ThetaHistory& history, const ThetaParams& params) {
  return try_estimate(history, params).value_or(params.bootstrap);
}

ThetaChoice choose_theta(const ThetaHistory& history, const ThetaParams& params) {
  if (auto bar = try_estimate(history, params)) return {*bar, std::min(damp_theta(*bar, params), params.cap), false};
  return {params.bootstrap, params.bootstrap, true};
}

double damp_sigma(double theta_bar, const ThetaParams& params) {
  const double z = (theta_bar - params.x0) / params.gamma;
  if (z > 700.0) return 0.0;
  if (z < -700.0) return 1.0;
  return 1.0 / (1.0 + std::exp(z));
}

double damp_theta(double theta_bar, const ThetaParams& params) {
  const double s = damp_sigma(theta_bar, params);
  return std::max(0.0, s * theta_bar + (1.0 - s) * params.delta * theta_bar);
}

ThetaPolicy parse_theta_policy(const std::string& name) {
  if (name == "fixed") return ThetaPolicy::Fixed;
  if (name == "estimated") return ThetaPolicy::Estimated;
  if (name == "oracle") return ThetaPolicy::Oracle;
  throw ConfigError("unknown theta policy '" + name + "'", "theta.policy");
}

std::string to_string(ThetaPolicy policy) {
  switch (policy) {
    case ThetaPolicy::Fixed:
      return "fixed";
    case ThetaPolicy::Estimated:
      return "estimated";
    case ThetaPolicy::Oracle:
      return "oracle";
  }
  return "fixed";
}

}  // namespace eikonal
