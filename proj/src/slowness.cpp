#include "eikonal/slowness.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include "eikonal/errors.hpp"

namespace eikonal {

namespace {

constexpr double kPi = std::numbers::pi;

bool inside(const Rect& r, Point p) {
  return p.x >= r.x0 && p.x <= r.x1 && p.y >= r.y0 && p.y <= r.y1;
}

bool inside(const Disk& d, Point p) {
  return std::hypot(p.x - d.cx, p.y - d.cy) <= d.radius;
}

bool inside(const AnnularArc& a, Point p) {
  const double dx = p.x - a.cx;
  const double dy = p.y - a.cy;
  const double rad = std::hypot(dx, dy);
  if (rad < a.r_inner || rad > a.r_outer) return false;
  double deg = std::atan2(dy, dx) * 180.0 / kPi;
  if (deg < 0) deg += 360.0;
  // Allow sectors such as [300, 420] that wrap through 0.
  return (deg >= a.begin_deg && deg <= a.end_deg) ||
         (deg + 360.0 >= a.begin_deg && deg + 360.0 <= a.end_deg);
}

double distance_to_lattice(double v, double eps) {
  const double t = v / eps;
  return std::abs(t - std::round(t)) * eps;
}

double number(const nlohmann::json& params, const char* key, double fallback) {
  if (!params.is_object() || !params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_number()) throw ConfigError(std::string("slowness parameter '") + key + "' must be a number", key);
  return v.get<double>();
}

double required_number(const nlohmann::json& params, const char* key) {
  if (!params.is_object() || !params.contains(key))
    throw ConfigError(std::string("slowness parameter '") + key + "' is required", key);
  return number(params, key, 0.0);
}

void require_positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string("slowness parameter '") + key + "' must be positive", key);
}

Obstacle parse_shape(const nlohmann::json& s, double default_value) {
  if (!s.is_object() || !s.contains("type")) throw ConfigError("obstacle shape needs a 'type'", "shapes");
  const auto type = s.at("type").get<std::string>();
  Obstacle ob;
  ob.value = number(s, "value", default_value);
  require_positive(ob.value, "value");
  if (type == "rect") {
    ob.shape = Rect{required_number(s, "x0"), required_number(s, "x1"), required_number(s, "y0"),
                    required_number(s, "y1")};
  } else if (type == "disk") {
    ob.shape = Disk{required_number(s, "cx"), required_number(s, "cy"), required_number(s, "radius")};
  } else if (type == "arc") {
    ob.shape = AnnularArc{required_number(s, "cx"),      required_number(s, "cy"),
                          required_number(s, "r_inner"), required_number(s, "r_outer"),
                          number(s, "begin_deg", 0.0),   number(s, "end_deg", 360.0)};
  } else {
    throw ConfigError("unknown obstacle shape '" + type + "'", "shapes");
  }
  return ob;
}

nlohmann::json shape_json(const Obstacle& ob) {
  return std::visit(
      [&](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Rect>) {
          return {{"type", "rect"}, {"x0", s.x0}, {"x1", s.x1}, {"y0", s.y0}, {"y1", s.y1}, {"value", ob.value}};
        } else if constexpr (std::is_same_v<T, Disk>) {
          return {{"type", "disk"}, {"cx", s.cx}, {"cy", s.cy}, {"radius", s.radius}, {"value", ob.value}};
        } else {
          return {{"type", "arc"},           {"cx", s.cx},          {"cy", s.cy},
                  {"r_inner", s.r_inner},    {"r_outer", s.r_outer}, {"begin_deg", s.begin_deg},
                  {"end_deg", s.end_deg},    {"value", ob.value}};
        }
      },
      ob.shape);
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SlownessField SlownessField::constant(double c) {
  if (!(c > 0.0)) throw ConfigError("constant slowness must be positive", "c");
  return SlownessField(field_kind::Constant{c});
}

SlownessField SlownessField::gauss1d(double center, double width, double amplitude) {
  return SlownessField(field_kind::Gauss1d{center, width, amplitude});
}

SlownessField SlownessField::sine2d(double amplitude, double frequency) {
  if (!(std::abs(amplitude) < 1.0)) throw ConfigError("sine2d amplitude must satisfy |A| < 1", "amplitude");
  return SlownessField(field_kind::Sine2d{amplitude, frequency});
}

SlownessField SlownessField::varsine() { return SlownessField(field_kind::VarSine{}); }

SlownessField SlownessField::obstacles(std::vector<Obstacle> shapes, double outside) {
  require_positive(outside, "outside");
  for (const auto& s : shapes) require_positive(s.value, "value");
  return SlownessField(field_kind::Obstacles{std::move(shapes), outside});
}

SlownessField SlownessField::squares(double eps, double line_tolerance) {
  require_positive(eps, "epsilon");
  if (!(line_tolerance >= 0.0)) throw ConfigError("squares tolerance must be >= 0", "tolerance");
  return SlownessField(field_kind::Squares{eps, line_tolerance});
}

SlownessField SlownessField::checkerboard(double eps, std::uint64_t seed) {
  require_positive(eps, "epsilon");
  return SlownessField(field_kind::Checkerboard{eps, seed});
}

SlownessField SlownessField::maze() {
  std::vector<Obstacle> shapes;
  // Quarter ring around the source, open only near the x-axis.
  shapes.push_back({AnnularArc{0.0, 0.0, 0.35, 0.38, 12.0, 90.0}, 1000.0});
  // Ring enclosing the subdomain [0.6, 0.7] x [0.5, 0.6], open towards +x.
  shapes.push_back({AnnularArc{0.65, 0.55, 0.10, 0.13, 30.0, 330.0}, 1000.0});
  // Fast disk inside [0.2, 0.3] x [0.7, 0.8].
  shapes.push_back({Disk{0.25, 0.75, 0.03}, 0.01});
  return obstacles(std::move(shapes), 1.0);
}

SlownessField SlownessField::fast_obstacle() {
  return obstacles({Obstacle{Rect{0.26, 0.27, 0.0, 0.6}, 0.01}}, 1.0);
}

double SlownessField::evaluate(Point p) const {
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, field_kind::Constant>) {
          return k.c;
        } else if constexpr (std::is_same_v<T, field_kind::Gauss1d>) {
          const double d = p.x - k.center;
          return 1.0 + k.amplitude * std::exp(-d * d / (2.0 * k.width * k.width));
        } else if constexpr (std::is_same_v<T, field_kind::Sine2d>) {
          return 1.0 + k.amplitude * std::sin(k.frequency * kPi * p.x) * std::sin(k.frequency * kPi * p.y);
        } else if constexpr (std::is_same_v<T, field_kind::VarSine>) {
          const double e = (std::abs(p.x) + std::abs(p.y) + 0.001) / 50.0;
          return 1.0 + k.amplitude * std::sin(kPi * p.x / e) * std::sin(kPi * p.y / e);
        } else if constexpr (std::is_same_v<T, field_kind::Obstacles>) {
          double r = k.outside;
          for (const auto& ob : k.shapes) {
            if (std::visit([&](const auto& s) { return inside(s, p); }, ob.shape)) r = ob.value;
          }
          return r;
        } else if constexpr (std::is_same_v<T, field_kind::Squares>) {
          const bool on_line =
              distance_to_lattice(p.x, k.eps) <= k.tolerance || distance_to_lattice(p.y, k.eps) <= k.tolerance;
          return on_line ? 1.0 : 2.0;
        } else {
          const auto cx = static_cast<std::int64_t>(std::floor(p.x / k.eps));
          const auto cy = static_cast<std::int64_t>(std::floor(p.y / k.eps));
          const std::uint64_t key =
              mix64(static_cast<std::uint64_t>(cx) * 0x100000001b3ULL ^ mix64(static_cast<std::uint64_t>(cy)));
          return (mix64(key ^ k.seed) & 1U) ? 2.0 : 1.0;
        }
      },
      kind_);
}

double SlownessField::operator()(Point x) const {
  const double r = evaluate(x);
  if (!(r > 0.0)) throw std::domain_error("slowness must be positive at (" + std::to_string(x.x) + ", " +
                                          std::to_string(x.y) + ")");
  return r;
}

std::string SlownessField::name() const {
  static const char* names[] = {"constant", "gauss1d", "sine2d", "varsine", "obstacles", "squares", "checkerboard"};
  return names[kind_.index()];
}

nlohmann::json SlownessField::describe() const {
  nlohmann::json out{{"kind", name()}};
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, field_kind::Constant>) {
          out["c"] = k.c;
        } else if constexpr (std::is_same_v<T, field_kind::Gauss1d>) {
          out["center"] = k.center;
          out["width"] = k.width;
          out["amplitude"] = k.amplitude;
        } else if constexpr (std::is_same_v<T, field_kind::Sine2d>) {
          out["amplitude"] = k.amplitude;
          out["frequency"] = k.frequency;
        } else if constexpr (std::is_same_v<T, field_kind::VarSine>) {
          out["amplitude"] = k.amplitude;
        } else if constexpr (std::is_same_v<T, field_kind::Obstacles>) {
          out["outside"] = k.outside;
          out["shapes"] = nlohmann::json::array();
          for (const auto& s : k.shapes) out["shapes"].push_back(shape_json(s));
        } else if constexpr (std::is_same_v<T, field_kind::Squares>) {
          out["epsilon"] = k.eps;
          out["tolerance"] = k.tolerance;
        } else {
          out["epsilon"] = k.eps;
          out["seed"] = k.seed;
        }
      },
      kind_);
  return out;
}

SlownessField make_catalog_field(const std::string& kind, const nlohmann::json& params, std::uint64_t seed) {
  if (!params.is_null() && !params.is_object()) throw ConfigError("slowness parameters must be an object");
  if (kind == "constant") return SlownessField::constant(number(params, "c", 1.0));
  if (kind == "gauss1d") {
    field_kind::Gauss1d g;
    g.center = number(params, "center", g.center);
    g.width = number(params, "width", g.width);
    g.amplitude = number(params, "amplitude", g.amplitude);
    require_positive(g.width, "width");
    if (!(g.amplitude > -1.0)) throw ConfigError("gauss1d amplitude must exceed -1", "amplitude");
    return SlownessField::gauss1d(g.center, g.width, g.amplitude);
  }
  if (kind == "sine2d") return SlownessField::sine2d(required_number(params, "amplitude"), required_number(params, "frequency"));
  if (kind == "r1") return SlownessField::sine2d(0.99, 2.0);
  if (kind == "r2") return SlownessField::sine2d(0.5, 20.0);
  if (kind == "varsine") return SlownessField::varsine();
  if (kind == "maze" || kind == "r3") return SlownessField::maze();
  if (kind == "fast_obstacle" || kind == "r4") return SlownessField::fast_obstacle();
  if (kind == "obstacles") {
    if (!params.is_object() || !params.contains("shapes") || !params.at("shapes").is_array())
      throw ConfigError("obstacles need a 'shapes' array", "shapes");
    const double inside_value = number(params, "inside", 1000.0);
    std::vector<Obstacle> shapes;
    for (const auto& s : params.at("shapes")) shapes.push_back(parse_shape(s, inside_value));
    return SlownessField::obstacles(std::move(shapes), number(params, "outside", 1.0));
  }
  if (kind == "squares") return SlownessField::squares(required_number(params, "epsilon"), number(params, "tolerance", 1e-9));
  if (kind == "checkerboard") return SlownessField::checkerboard(required_number(params, "epsilon"), seed);
  throw ConfigError("unknown slowness kind '" + kind + "'", "kind");
}

}  // namespace eikonal
