#include "eikonal/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "eikonal/errors.hpp"
#include "eikonal/parallel.hpp"

namespace eikonal {

using nlohmann::json;

namespace {

// ---- config parsing ------------------------------------------------------

// 1-based line of the key at the end of a dotted path, found by locating each
// quoted segment in turn. Zero when the text is unavailable or the key absent.
int line_of(const std::string& source, const std::string& path) {
  if (source.empty() || path.empty()) return 0;
  std::size_t pos = 0;
  std::size_t found = std::string::npos;
  std::stringstream ss(path);
  std::string seg;
  while (std::getline(ss, seg, '.')) {
    const std::size_t bracket = seg.find('[');
    if (bracket != std::string::npos) seg = seg.substr(0, bracket);
    if (seg.empty()) continue;
    const std::size_t at = source.find('"' + seg + '"', pos);
    if (at == std::string::npos) break;
    found = at;
    pos = at + seg.size() + 2;
  }
  if (found == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(source.begin(), source.begin() + static_cast<long>(found), '\n'));
}

class Reader {
 public:
  explicit Reader(const std::string& source) : source_(source) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    const int line = line_of(source_, path);
    std::string msg = line > 0 ? "line " + std::to_string(line) + ": " : std::string();
    msg += path.empty() ? what : path + ": " + what;
    throw ConfigError(msg, path);
  }

  const json* child(const json& obj, const std::string& key) const {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) const {
    if (obj.is_null()) return;
    if (!obj.is_object()) fail(path, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!allowed.count(it.key())) fail(join(path, it.key()), "unknown key");
  }

  double number(const json& obj, const std::string& path, const std::string& key, double fallback) const {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) fail(join(path, key), "expected a number");
    return v->get<double>();
  }

  int integer(const json& obj, const std::string& path, const std::string& key, int fallback) const {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(join(path, key), "expected an integer");
    const auto x = v->get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) fail(join(path, key), "out of range");
    return static_cast<int>(x);
  }

  bool boolean(const json& obj, const std::string& path, const std::string& key, bool fallback) const {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(join(path, key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const json& obj, const std::string& path, const std::string& key, const std::string& fallback) const {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_string()) fail(join(path, key), "expected a string");
    return v->get<std::string>();
  }

  static std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

 private:
  const std::string& source_;
};

json cap_to_json(double cap) { return std::isinf(cap) ? json(nullptr) : json(cap); }

double cap_from(const Reader& rd, const json& theta, const std::string& key, double fallback) {
  const json* v = rd.child(theta, key);
  if (!v) return fallback;
  if (v->is_null()) return std::numeric_limits<double>::infinity();
  if (!v->is_number()) rd.fail("theta." + key, "expected a number or null");
  return v->get<double>();
}

std::string side_name(unsigned side) {
  switch (side) {
    case kLeft:
      return "left";
    case kRight:
      return "right";
    case kBottom:
      return "bottom";
    default:
      return "top";
  }
}

// ---- output --------------------------------------------------------------

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
}

void write_matrix(const std::filesystem::path& path, const std::vector<double>& values, int nx, int ny) {
  auto out = open_out(path);
  for (int q = 0; q < ny; ++q) {
    for (int p = 0; p < nx; ++p) {
      if (p) out << ',';
      out << format_number(values[static_cast<std::size_t>(q) * nx + p]);
    }
    out << '\n';
  }
  finish(out, path);
}

void write_coarse(const std::filesystem::path& path, const TwoScaleSolver& s) {
  auto out = open_out(path);
  out << "p,q,x,y,U,u,Wx,Wy\n";
  const auto& sk = s.skeleton();
  for (std::size_t idx = 0; idx < sk.size(); ++idx) {
    const auto [p, q] = sk.position(idx);
    const Point x = s.spec().fine_point(p, q);
    out << p << ',' << q << ',' << format_number(x.x) << ',' << format_number(x.y) << ',' << format_number(s.U()[idx])
        << ',' << format_number(s.u()[idx]) << ',' << s.W()[idx].x << ',' << s.W()[idx].y << '\n';
  }
  finish(out, path);
}

void write_errors(const std::filesystem::path& path, const std::vector<IterationRecord>& history, bool timing) {
  auto out = open_out(path);
  out << "k,l1_rel,l1_abs,linf,wall_ms,converged\n";
  for (const auto& r : history)
    out << r.k << ',' << format_number(r.l1_rel) << ',' << format_number(r.l1_abs) << ',' << format_number(r.linf) << ','
        << format_number(timing ? r.wall_ms : 0.0) << ',' << (r.converged ? 1 : 0) << '\n';
  finish(out, path);
}

void write_iterations(const std::filesystem::path& path, const std::vector<IterationRecord>& history) {
  auto out = open_out(path);
  out << "k,l1_rel,l1_abs,linf,fine_l1_rel,fine_linf,coarse_fine_gap,max_change,winds_changed,weighted_nodes,"
         "max_theta_bar,max_theta_used\n";
  for (const auto& r : history)
    out << r.k << ',' << format_number(r.l1_rel) << ',' << format_number(r.l1_abs) << ',' << format_number(r.linf) << ','
        << format_number(r.fine_l1_rel) << ',' << format_number(r.fine_linf) << ',' << format_number(r.coarse_fine_gap)
        << ',' << format_number(r.max_change) << ',' << (r.winds_changed ? 1 : 0) << ',' << r.weighted_nodes << ','
        << format_number(r.max_theta_bar) << ',' << format_number(r.max_theta_used) << '\n';
  finish(out, path);
}

void write_json(const std::filesystem::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

json number_json(double v) {
  if (is_inf(v) || std::isinf(v)) return "inf";
  if (std::isnan(v)) return "nan";
  return v;
}

std::string suffix(int trial, int trials) { return trials > 1 ? "_trial" + std::to_string(trial) : std::string(); }

void check_budget(const ExperimentConfig& config) {
  const double need = estimated_memory_mb(config);
  if (need > config.memory_budget_mb) {
    std::ostringstream msg;
    msg << "grid needs about " << std::ceil(need) << " MB, above memory_budget_mb = " << config.memory_budget_mb;
    throw ConfigError(msg.str(), "memory_budget_mb");
  }
}

}  // namespace

std::string format_number(double v) {
  if (is_inf(v) || v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ExperimentConfig parse_config(const json& doc, const std::string& source) {
  Reader rd(source);
  if (!doc.is_object()) rd.fail("", "config must be a JSON object");
  rd.only_keys(doc, "", {"problem", "solver", "theta", "outputs", "seed", "trials", "memory_budget_mb", "speedup"});

  ExperimentConfig c;
  const json empty = json::object();
  auto section = [&](const char* key) -> const json& {
    const json* v = rd.child(doc, key);
    if (!v) return empty;
    if (!v->is_object()) rd.fail(key, "expected an object");
    return *v;
  };

  // problem
  const json& pr = section("problem");
  rd.only_keys(pr, "problem", {"dimension", "N", "M", "geometry", "slowness", "gamma"});
  c.dimension = rd.integer(pr, "problem", "dimension", 2);
  if (c.dimension != 1 && c.dimension != 2) rd.fail("problem.dimension", "must be 1 or 2");
  c.n = rd.integer(pr, "problem", "N", 10);
  c.m = rd.integer(pr, "problem", "M", 50);
  if (c.n < 1) rd.fail("problem.N", "must be >= 1");
  if (c.m < 2) rd.fail("problem.M", "must be >= 2");
  const std::string geometry = rd.string(pr, "problem", "geometry", "square");
  if (geometry == "square") {
    c.geometry = Geometry::Square;
  } else if (geometry == "model_strip") {
    c.geometry = Geometry::ModelStrip;
    if (c.dimension != 2) rd.fail("problem.geometry", "model_strip requires dimension 2");
  } else {
    rd.fail("problem.geometry", "expected 'square' or 'model_strip'");
  }

  if (const json* sl = rd.child(pr, "slowness")) {
    if (!sl->is_object()) rd.fail("problem.slowness", "expected an object");
    rd.only_keys(*sl, "problem.slowness", {"kind", "params"});
    c.slowness_kind = rd.string(*sl, "problem.slowness", "kind", "constant");
    if (const json* params = rd.child(*sl, "params")) {
      if (!params->is_object()) rd.fail("problem.slowness.params", "expected an object");
      c.slowness_params = *params;
    }
  }

  if (const json* g = rd.child(pr, "gamma")) {
    if (!g->is_object()) rd.fail("problem.gamma", "expected an object");
    rd.only_keys(*g, "problem.gamma", {"sources", "sides", "side_data"});
    if (const json* src = rd.child(*g, "sources")) {
      if (!src->is_array()) rd.fail("problem.gamma.sources", "expected an array of points");
      for (std::size_t k = 0; k < src->size(); ++k) {
        const json& pt = (*src)[k];
        const std::string path = "problem.gamma.sources[" + std::to_string(k) + "]";
        const std::size_t want = c.dimension == 1 ? 1 : 2;
        if (!pt.is_array() || pt.size() < want || pt.size() > 2 || !pt[0].is_number() || (pt.size() == 2 && !pt[1].is_number()))
          rd.fail(path, c.dimension == 1 ? "expected [x]" : "expected [x, y]");
        Point p{pt[0].get<double>(), pt.size() == 2 ? pt[1].get<double>() : 0.0};
        if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1) rd.fail(path, "source lies outside the unit square");
        c.gamma.sources.push_back(p);
      }
    }
    if (const json* sides = rd.child(*g, "sides")) {
      if (!sides->is_array()) rd.fail("problem.gamma.sides", "expected an array of side names");
      for (const auto& sname : *sides) {
        const std::string s = sname.is_string() ? sname.get<std::string>() : std::string();
        if (s == "left") c.gamma.sides |= kLeft;
        else if (s == "right") c.gamma.sides |= kRight;
        else if (s == "bottom") c.gamma.sides |= kBottom;
        else if (s == "top") c.gamma.sides |= kTop;
        else rd.fail("problem.gamma.sides", "unknown side (expected left, right, bottom or top)");
      }
    }
    const std::string data = rd.string(*g, "problem.gamma", "side_data", "zero");
    if (data == "zero") c.gamma.side_data = SideData::Zero;
    else if (data == "distance") c.gamma.side_data = SideData::Distance;
    else rd.fail("problem.gamma.side_data", "expected 'zero' or 'distance'");
  } else {
    c.gamma.sources.push_back(Point{0.0, 0.0});
  }

  // solver
  const json& so = section("solver");
  rd.only_keys(so, "solver", {"max_iters", "conv_tol", "max_rounds", "coarse_update_rounds", "workers"});
  c.solver.max_iters = rd.integer(so, "solver", "max_iters", 100);
  if (c.solver.max_iters < 0) rd.fail("solver.max_iters", "must be >= 0");
  c.solver.conv_tol = rd.number(so, "solver", "conv_tol", 1e-10);
  if (!(c.solver.conv_tol > 0)) rd.fail("solver.conv_tol", "must be positive");
  const int rounds = rd.integer(so, "solver", "max_rounds", 50);
  if (rounds < 1) rd.fail("solver.max_rounds", "must be >= 1");
  c.solver.coarse_sweep.max_rounds = rounds;
  c.solver.fine_sweep.max_rounds = rounds;
  c.solver.coarse_update_rounds = rd.integer(so, "solver", "coarse_update_rounds", 1);
  if (c.solver.coarse_update_rounds < 1) rd.fail("solver.coarse_update_rounds", "must be >= 1");
  c.solver.workers = rd.integer(so, "solver", "workers", hardware_workers());
  if (c.solver.workers < 1) rd.fail("solver.workers", "must be >= 1");
  c.model.max_k = c.solver.max_iters;

  // theta
  const json& th = section("theta");
  rd.only_keys(th, "theta", {"policy", "value", "x0", "gamma", "delta", "omega", "bootstrap", "denom_guard", "cap",
                             "model_cap", "lambda"});
  ThetaParams tp;
  tp.x0 = rd.number(th, "theta", "x0", tp.x0);
  tp.gamma = rd.number(th, "theta", "gamma", tp.gamma);
  tp.delta = rd.number(th, "theta", "delta", tp.delta);
  if (const json* om = rd.child(th, "omega")) {
    if (!om->is_array() || om->size() != 3) rd.fail("theta.omega", "expected three numbers");
    for (std::size_t s = 0; s < 3; ++s) {
      if (!(*om)[s].is_number()) rd.fail("theta.omega", "expected three numbers");
      tp.omega[s] = (*om)[s].get<double>();
    }
  }
  tp.bootstrap = rd.number(th, "theta", "bootstrap", tp.bootstrap);
  tp.denom_guard = rd.number(th, "theta", "denom_guard", tp.denom_guard);
  const std::string policy_name = rd.string(th, "theta", "policy", "estimated");
  ThetaPolicy policy;
  try {
    policy = parse_theta_policy(policy_name);
  } catch (const ConfigError& e) {
    rd.fail("theta.policy", e.what());
  }
  const double value = rd.number(th, "theta", "value", 1.0);
  if (!(value >= 0)) rd.fail("theta.value", "must be >= 0");
  const double lambda = rd.number(th, "theta", "lambda", 0.5);
  if (!(lambda > 0 && lambda < 1)) rd.fail("theta.lambda", "must lie in (0, 1)");

  ThetaParams two = tp;
  two.cap = cap_from(rd, th, "cap", TwoScaleOptions{}.theta.cap);
  ThetaParams model = tp;
  model.cap = cap_from(rd, th, "model_cap", ThetaParams{}.cap);
  try {
    two.validate();
    model.validate();
  } catch (const ConfigError& e) {
    rd.fail(e.path(), e.what());
  }
  c.solver.theta = two;
  c.solver.policy = policy;
  c.solver.fixed_theta = value;
  c.model.params = model;
  c.model.policy = policy;
  c.model.fixed_theta = value;
  c.model.oracle_lambda = lambda;

  // outputs
  const json& out = section("outputs");
  rd.only_keys(out, "outputs", {"dir", "timing", "snapshot_every"});
  c.out_dir = rd.string(out, "outputs", "dir", "out");
  c.timing = rd.boolean(out, "outputs", "timing", false);
  c.snapshot_every = rd.integer(out, "outputs", "snapshot_every", 0);
  if (c.snapshot_every < 0) rd.fail("outputs.snapshot_every", "must be >= 0");

  if (const json* seed = rd.child(doc, "seed")) {
    if (!seed->is_number_integer() || (!seed->is_number_unsigned() && seed->get<std::int64_t>() < 0))
      rd.fail("seed", "expected a nonnegative integer");
    c.seed = seed->get<std::uint64_t>();
  }
  c.trials = rd.integer(doc, "", "trials", 1);
  if (c.trials < 1) rd.fail("trials", "must be >= 1");
  c.memory_budget_mb = rd.number(doc, "", "memory_budget_mb", 2048.0);
  if (!(c.memory_budget_mb > 0)) rd.fail("memory_budget_mb", "must be positive");

  // speedup
  if (const json* sp = rd.child(doc, "speedup")) {
    if (!sp->is_object()) rd.fail("speedup", "expected an object");
    rd.only_keys(*sp, "speedup", {"C", "k", "cases"});
    const double cc = rd.number(*sp, "speedup", "C", 10.0);
    const int kk = rd.integer(*sp, "speedup", "k", 1);
    if (!(cc > 0)) rd.fail("speedup.C", "must be positive");
    if (kk < 1) rd.fail("speedup.k", "must be >= 1");
    if (const json* cases = rd.child(*sp, "cases")) {
      if (!cases->is_array()) rd.fail("speedup.cases", "expected an array");
      for (std::size_t k = 0; k < cases->size(); ++k) {
        const std::string path = "speedup.cases[" + std::to_string(k) + "]";
        const json& e = (*cases)[k];
        rd.only_keys(e, path, {"N", "M", "d", "C", "k"});
        FlopModel fm{rd.integer(e, path, "N", c.n), rd.integer(e, path, "M", c.m), rd.integer(e, path, "d", c.dimension),
                     rd.number(e, path, "C", cc), rd.integer(e, path, "k", kk)};
        if (fm.n < 1 || fm.m < 1 || (fm.d != 1 && fm.d != 2) || !(fm.c > 0) || fm.k < 1)
          rd.fail(path, "needs N, M, k >= 1, d in {1, 2} and C > 0");
        c.speedup_cases.push_back(fm);
      }
    } else {
      c.speedup_cases.push_back(FlopModel{c.n, c.m, c.dimension, cc, kk});
    }
  } else {
    c.speedup_cases.push_back(FlopModel{c.n, c.m, c.dimension, 10.0, 1});
  }

  // Build the slowness once so bad kinds and parameters fail at parse time.
  if (c.geometry == Geometry::Square) {
    try {
      make_slowness(c, c.seed);
    } catch (const ConfigError& e) {
      const std::string path = e.path() == "kind" ? "problem.slowness.kind" : "problem.slowness.params." + e.path();
      rd.fail(e.path().empty() ? "problem.slowness" : path, e.what());
    }
  }

  // resolved
  json sources = json::array();
  for (const auto& s : c.gamma.sources) sources.push_back(c.dimension == 1 ? json::array({s.x}) : json::array({s.x, s.y}));
  json sides = json::array();
  for (unsigned s : {kLeft, kRight, kBottom, kTop})
    if (c.gamma.sides & s) sides.push_back(side_name(s));
  json speedup_cases = json::array();
  for (const auto& fm : c.speedup_cases) speedup_cases.push_back({{"N", fm.n}, {"M", fm.m}, {"d", fm.d}, {"C", fm.c}, {"k", fm.k}});
  c.resolved = {
      {"problem",
       {{"dimension", c.dimension},
        {"N", c.n},
        {"M", c.m},
        {"geometry", geometry},
        {"slowness", {{"kind", c.slowness_kind}, {"params", c.slowness_params}}},
        {"gamma", {{"sources", sources}, {"sides", sides}, {"side_data", c.gamma.side_data == SideData::Zero ? "zero" : "distance"}}}}},
      {"solver",
       {{"max_iters", c.solver.max_iters},
        {"conv_tol", c.solver.conv_tol},
        {"max_rounds", rounds},
        {"coarse_update_rounds", c.solver.coarse_update_rounds},
        {"workers", c.solver.workers}}},
      {"theta",
       {{"policy", to_string(policy)},
        {"value", value},
        {"x0", tp.x0},
        {"gamma", tp.gamma},
        {"delta", tp.delta},
        {"omega", tp.omega},
        {"bootstrap", tp.bootstrap},
        {"denom_guard", tp.denom_guard},
        {"cap", cap_to_json(two.cap)},
        {"model_cap", cap_to_json(model.cap)},
        {"lambda", lambda}}},
      {"outputs", {{"dir", c.out_dir.string()}, {"timing", c.timing}, {"snapshot_every", c.snapshot_every}}},
      {"seed", c.seed},
      {"trials", c.trials},
      {"memory_budget_mb", c.memory_budget_mb},
      {"speedup", {{"cases", speedup_cases}}},
  };
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto begin = text.begin();
    const int line = 1 + static_cast<int>(std::count(begin, begin + static_cast<long>(byte), '\n'));
    const std::size_t last_nl = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t col = last_nl == std::string::npos || byte == 0 ? byte + 1 : byte - last_nl;
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": invalid JSON");
  }
  return parse_config(doc, text);
}

void apply_overrides(ExperimentConfig& config, const Overrides& o) {
  if (o.workers > 0) config.solver.workers = o.workers;
  if (o.seed >= 0) config.seed = static_cast<std::uint64_t>(o.seed);
  if (!o.out_dir.empty()) config.out_dir = o.out_dir;
  if (o.snapshot_every >= 0) config.snapshot_every = o.snapshot_every;
  config.resolved["solver"]["workers"] = config.solver.workers;
  config.resolved["seed"] = config.seed;
  config.resolved["outputs"]["dir"] = config.out_dir.string();
  config.resolved["outputs"]["snapshot_every"] = config.snapshot_every;
}

double estimated_memory_mb(const ExperimentConfig& config) {
  const double per_axis = static_cast<double>(config.n) * config.m + 1.0;
  // value, wind, fixed flag and slowness per node, for the reference, the
  // subdomain copies and the patched output.
  constexpr double kBytesPerNode = 3.0 * (8 + 8 + 1 + 8);
  double nodes;
  if (config.geometry == Geometry::ModelStrip) nodes = per_axis * (config.m + 1);
  else nodes = config.dimension == 1 ? per_axis : per_axis * per_axis;
  return nodes * kBytesPerNode / (1024.0 * 1024.0);
}

SlownessField make_slowness(const ExperimentConfig& config, std::uint64_t seed) {
  return make_catalog_field(config.slowness_kind, config.slowness_params, seed);
}

// ---- commands ------------------------------------------------------------

int cmd_run(const ExperimentConfig& config, std::ostream& log) {
  if (config.geometry != Geometry::Square) throw ConfigError("the run command needs geometry 'square'", "problem.geometry");
  if (config.solver.policy == ThetaPolicy::Oracle)
    throw ConfigError("the oracle policy is only defined for the model problem", "theta.policy");
  check_budget(config);
  ensure_dir(config.out_dir);
  const auto& dir = config.out_dir;

  const GridSpec spec(config.dimension, config.n, config.m);
  const int nx = spec.fine_nodes_per_axis();
  const int ny = config.dimension == 1 ? 1 : nx;
  TwoScaleOptions options = config.solver;

  json trials = json::array();
  std::vector<std::vector<IterationRecord>> histories;
  bool all_converged = true;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(t);
    const SlownessField slowness = make_slowness(config, seed);
    const auto ref = reference_solution(spec, slowness, config.gamma, options.fine_sweep);
    const std::string sfx = suffix(t, config.trials);

    TwoScaleSolver solver(spec, slowness, config.gamma, options);
    auto observer = [&](const TwoScaleSolver& s, const IterationRecord& rec) {
      if (config.snapshot_every <= 0 || rec.k % config.snapshot_every != 0) return;
      const std::string tag = "_k" + std::to_string(rec.k) + sfx;
      write_coarse(dir / ("coarse" + tag + ".csv"), s);
      write_matrix(dir / ("fine" + tag + ".csv"), s.patched_fine(), nx, ny);
    };
    const RunResult result = solver.run(ref.field.value, observer);

    write_errors(dir / ("errors" + sfx + ".csv"), result.history, config.timing);
    write_iterations(dir / ("iterations" + sfx + ".csv"), result.history);
    write_coarse(dir / ("coarse" + sfx + ".csv"), solver);
    write_matrix(dir / ("fine" + sfx + ".csv"), solver.patched_fine(), nx, ny);
    write_matrix(dir / ("reference" + sfx + ".csv"), ref.field.value, nx, ny);

    const auto& last = result.history.back();
    trials.push_back({{"trial", t},
                      {"seed", seed},
                      {"converged", result.converged},
                      {"iterations", result.iterations},
                      {"reference_rounds", ref.sweep.rounds},
                      {"reference_converged", ref.sweep.converged},
                      {"final_l1_rel", number_json(last.l1_rel)},
                      {"final_fine_l1_rel", number_json(last.fine_l1_rel)},
                      {"final_linf", number_json(last.linf)}});
    all_converged = all_converged && result.converged;
    log << "trial " << t << ": " << (result.converged ? "converged" : "not converged") << " after " << result.iterations
        << " updates, l1_rel " << format_number(last.l1_rel) << ", fine l1_rel " << format_number(last.fine_l1_rel) << '\n';
    histories.push_back(result.history);
  }

  if (config.trials > 1) {
    // Shorter histories are extended with their final record: a run that has
    // stopped keeps its last error.
    std::size_t len = 0;
    for (const auto& h : histories) len = std::max(len, h.size());
    const auto path = dir / "errors_mean.csv";
    auto out = open_out(path);
    out << "k,l1_rel,l1_abs,linf,wall_ms,converged\n";
    for (std::size_t k = 0; k < len; ++k) {
      double l1r = 0, l1a = 0, li = 0, ms = 0;
      int conv = 0;
      for (const auto& h : histories) {
        const auto& r = h[std::min(k, h.size() - 1)];
        l1r += r.l1_rel;
        l1a += r.l1_abs;
        li += r.linf;
        ms += config.timing ? r.wall_ms : 0.0;
        conv += (k >= h.size() - 1 && h.back().converged) ? 1 : 0;
      }
      const double n = static_cast<double>(histories.size());
      out << k << ',' << format_number(l1r / n) << ',' << format_number(l1a / n) << ',' << format_number(li / n) << ','
          << format_number(ms / n) << ',' << (conv == static_cast<int>(histories.size()) ? 1 : 0) << '\n';
    }
    finish(out, path);
  }

  json diag = {{"command", "run"},
               {"config", config.resolved},
               {"status", all_converged ? "converged" : "not_converged"},
               {"trials", trials}};
  write_json(dir / "diagnostics.json", diag);
  return 0;
}

int cmd_reference(const ExperimentConfig& config, std::ostream& log) {
  check_budget(config);
  ensure_dir(config.out_dir);
  const auto& dir = config.out_dir;
  json diag = {{"command", "reference"}, {"config", config.resolved}};

  if (config.geometry == Geometry::ModelStrip) {
    const auto ref = model_strip_reference(config.n, config.m, config.solver.fine_sweep);
    write_matrix(dir / "reference.csv", ref.field.value, ref.field.nx, ref.field.ny);
    // Absolute L1 against sqrt(x^2 + y^2) on the coarse nodes (i H, j h),
    // weighted by the fine spacing along each coarse line.
    const GridSpec spec(2, config.n, config.m);
    double sum = 0.0;
    for (int i = 0; i <= config.n; ++i)
      for (int q = 0; q <= config.m; ++q) {
        const Point x = spec.fine_point(i * config.m, q);
        sum += std::abs(ref.field.value[ref.field.at(i * config.m, q)] - std::hypot(x.x, x.y));
      }
    const double l1 = spec.h() * sum;
    diag["exact_l1_abs"] = l1;
    diag["sweep_rounds"] = ref.sweep.rounds;
    diag["sweep_converged"] = ref.sweep.converged;
    log << "model strip reference: |u^f - u_exact|_L1 = " << format_number(l1) << '\n';
  } else {
    const GridSpec spec(config.dimension, config.n, config.m);
    const SlownessField slowness = make_slowness(config, config.seed);
    const auto ref = reference_solution(spec, slowness, config.gamma, config.solver.fine_sweep);
    write_matrix(dir / "reference.csv", ref.field.value, ref.field.nx, ref.field.ny);
    diag["sweep_rounds"] = ref.sweep.rounds;
    diag["sweep_converged"] = ref.sweep.converged;
    // With constant slowness and only point sources the exact solution is a
    // scaled distance, so report the discretization error as well.
    if (const auto* k = std::get_if<field_kind::Constant>(&slowness.kind());
        k && config.gamma.sides == 0 && !config.gamma.sources.empty()) {
      const auto pts = fine_points(spec);
      std::vector<double> exact(pts.size());
      for (std::size_t n = 0; n < pts.size(); ++n) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : config.gamma.sources) best = std::min(best, std::hypot(pts[n].x - s.x, pts[n].y - s.y));
        exact[n] = k->c * best;
      }
      const double cell = config.dimension == 1 ? spec.h() : spec.h() * spec.h();
      diag["exact_l1_abs"] = l1_abs(ref.field.value, exact, cell);
      diag["exact_linf"] = linf(ref.field.value, exact);
    }
    log << "reference: " << ref.sweep.rounds << " sweep rounds" << (ref.sweep.converged ? "" : " (not converged)") << '\n';
  }
  write_json(dir / "diagnostics.json", diag);
  return 0;
}

int cmd_model(const ExperimentConfig& config, std::ostream& log) {
  if (config.dimension != 2) throw ConfigError("the model problem is two-dimensional", "problem.dimension");
  check_budget(config);
  ensure_dir(config.out_dir);
  const auto& dir = config.out_dir;
  const ModelProblem problem{config.n, config.m};
  const ModelRun run = model_run(problem, config.model);
  const int rows = config.m + 1;
  const int cols = config.n + 1;

  {
    const auto path = dir / "model_errors.csv";
    auto out = open_out(path);
    out << "k,linf,l1_abs,min_Mbar,max_theta_used\n";
    for (const auto& it : run.iterates)
      out << it.k << ',' << format_number(it.linf) << ',' << format_number(it.l1_abs) << ',' << format_number(it.min_mbar)
          << ',' << format_number(it.max_theta_used) << '\n';
    finish(out, path);
  }
  {
    const auto path = dir / "model_bounds.csv";
    auto out = open_out(path);
    out << "k,i,j,m_tilde,M_bar\n";
    for (const auto& it : run.iterates) {
      if (it.bounds.empty()) continue;
      for (int i = 0; i < cols; ++i)
        for (int j = 0; j < rows; ++j) {
          const auto& b = it.bounds[static_cast<std::size_t>(i) * rows + j];
          out << it.k << ',' << i << ',' << j << ',' << format_number(b.m_tilde) << ',' << format_number(b.m_bar_upper) << '\n';
        }
    }
    finish(out, path);
  }
  // Coarse fields as matrices: one row per j, one column per i.
  auto transpose = [&](const std::vector<double>& v) {
    std::vector<double> t(v.size());
    for (int i = 0; i < cols; ++i)
      for (int j = 0; j < rows; ++j) t[static_cast<std::size_t>(j) * cols + i] = v[static_cast<std::size_t>(i) * rows + j];
    return t;
  };
  write_matrix(dir / "model_U.csv", transpose(run.iterates.back().U), cols, rows);
  write_matrix(dir / "model_uf.csv", transpose(run.uf), cols, rows);

  double exact_sum = 0.0;
  for (std::size_t k = 0; k < run.uf.size(); ++k) exact_sum += std::abs(run.uf[k] - run.exact[k]);
  const double exact_l1 = problem.h() * exact_sum;
  const auto& last = run.iterates.back();
  json diag = {{"command", "model"},
               {"config", config.resolved},
               {"iterations", last.k},
               {"final_linf", number_json(last.linf)},
               {"final_l1_abs", number_json(last.l1_abs)},
               {"exact_l1_abs", exact_l1}};
  write_json(dir / "diagnostics.json", diag);
  log << "model problem N=" << config.n << " M=" << config.m << " (" << to_string(config.model.policy) << "): " << last.k
      << " iterations, final linf " << format_number(last.linf) << ", |u^f - u_exact|_L1 " << format_number(exact_l1) << '\n';
  return 0;
}

int cmd_speedup(const ExperimentConfig& config, std::ostream& log) {
  ensure_dir(config.out_dir);
  const auto path = config.out_dir / "speedup.csv";
  auto out = open_out(path);
  out << "N,M,d,C,k,serial,coarse_phase,fine_phase,parallel_per_iteration,threshold,speedup\n";
  char line[256];
  std::snprintf(line, sizeof line, "%5s %5s %2s %6s %4s %14s %14s %10s\n", "N", "M", "d", "C", "k", "serial", "per_iter",
                "threshold");
  log << line;
  for (const auto& fm : config.speedup_cases) {
    const FlopEstimate e = speedup_threshold(fm);
    out << fm.n << ',' << fm.m << ',' << fm.d << ',' << format_number(fm.c) << ',' << fm.k << ',' << format_number(e.serial)
        << ',' << format_number(e.coarse_phase) << ',' << format_number(e.fine_phase) << ','
        << format_number(e.parallel_per_iteration) << ',' << format_number(e.threshold) << ',' << format_number(e.speedup)
        << '\n';
    std::snprintf(line, sizeof line, "%5d %5d %2d %6g %4d %14.6g %14.6g %10.4g\n", fm.n, fm.m, fm.d, fm.c, fm.k, e.serial,
                  e.parallel_per_iteration, e.threshold);
    log << line;
  }
  finish(out, path);
  return 0;
}

}  // namespace eikonal
