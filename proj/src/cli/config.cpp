#include "dzo/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "dzo/hard_instances.hpp"
#include "dzo/kernel.hpp"
#include "dzo/rand_geometry.hpp"

namespace dzo::cli {

using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string msg = "invalid config:";
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}

// Collects schema errors instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& path, const std::string& what) { problems.push_back(path + ": " + what); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : j.items()) {
      bool ok = false;
      for (std::string_view a : allowed) ok = ok || key == a;
      if (!ok) fail(join(path, key), "unknown key");
    }
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }

  const json* find(const json& j, std::string_view key) {
    auto it = j.find(std::string(key));
    return it == j.end() ? nullptr : &*it;
  }

  std::optional<double> number(const json& j, std::string_view key, const std::string& path) {
    const json* v = find(j, key);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(join(path, key), "expected a number");
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) {
      fail(join(path, key), "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::int64_t> integer(const json& j, std::string_view key, const std::string& path) {
    const json* v = find(j, key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      fail(join(path, key), "expected an integer");
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  std::optional<std::uint64_t> unsigned_integer(const json& j, std::string_view key,
                                                const std::string& path) {
    const json* v = find(j, key);
    if (!v) return std::nullopt;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      fail(join(path, key), "expected a non-negative integer");
      return std::nullopt;
    }
    return v->get<std::uint64_t>();
  }

  std::optional<std::string> string(const json& j, std::string_view key, const std::string& path) {
    const json* v = find(j, key);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(join(path, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<bool> boolean(const json& j, std::string_view key, const std::string& path) {
    const json* v = find(j, key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) {
      fail(join(path, key), "expected true or false");
      return std::nullopt;
    }
    return v->get<bool>();
  }

  std::optional<std::vector<double>> vector(const json& j, std::string_view key,
                                            const std::string& path) {
    const json* v = find(j, key);
    if (!v) return std::nullopt;
    if (!v->is_array()) {
      fail(join(path, key), "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const json& e : *v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) {
        fail(join(path, key), "expected an array of finite numbers");
        return std::nullopt;
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::optional<std::vector<std::vector<double>>> matrix(const json& j, std::string_view key,
                                                         const std::string& path) {
    const json* v = find(j, key);
    if (!v) return std::nullopt;
    std::vector<std::vector<double>> out;
    bool ok = v->is_array() && !v->empty();
    if (ok) {
      for (const json& row : *v) {
        if (!row.is_array() || row.empty()) {
          ok = false;
          break;
        }
        std::vector<double> r;
        for (const json& e : row) {
          if (!e.is_number() || !std::isfinite(e.get<double>())) {
            ok = false;
            break;
          }
          r.push_back(e.get<double>());
        }
        if (!out.empty() && r.size() != out.front().size()) ok = false;
        out.push_back(std::move(r));
      }
    }
    if (!ok) {
      fail(join(path, key), "expected a non-empty rectangular array of number rows");
      return std::nullopt;
    }
    return out;
  }

  template <typename Parse>
  auto enumeration(const json& j, std::string_view key, const std::string& path, Parse parse,
                   std::string_view choices) -> std::optional<decltype(parse(std::string_view{}))> {
    auto s = string(j, key, path);
    if (!s) return std::nullopt;
    try {
      return parse(*s);
    } catch (const Error&) {
      fail(join(path, key), "unknown value '" + *s + "' (expected " + std::string(choices) + ")");
      return std::nullopt;
    }
  }

  void require(const json& j, std::string_view key, const std::string& path) {
    if (!j.contains(std::string(key))) fail(join(path, key), "required");
  }
};

ObjectiveKind parse_objective_kind(std::string_view s) {
  if (s == "quadratic") return ObjectiveKind::Quadratic;
  if (s == "least_squares") return ObjectiveKind::LeastSquares;
  if (s == "logistic") return ObjectiveKind::Logistic;
  if (s == "hard") return ObjectiveKind::Hard;
  if (s == "constant") return ObjectiveKind::Constant;
  if (s == "linear") return ObjectiveKind::Linear;
  throw Error(ErrorKind::Input, "unknown objective");
}

std::string_view to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::Quadratic: return "quadratic";
    case ObjectiveKind::LeastSquares: return "least_squares";
    case ObjectiveKind::Logistic: return "logistic";
    case ObjectiveKind::Hard: return "hard";
    case ObjectiveKind::Constant: return "constant";
    case ObjectiveKind::Linear: return "linear";
  }
  return "unknown";
}

ProjectionSet::Kind parse_theta_kind(std::string_view s) {
  if (s == "ball") return ProjectionSet::Kind::Ball;
  if (s == "box") return ProjectionSet::Kind::Box;
  throw Error(ErrorKind::Input, "unknown theta");
}

std::string_view to_string(InitKind k) {
  switch (k) {
    case InitKind::Vertex: return "vertex";
    case InitKind::Point: return "point";
    case InitKind::Uniform: return "uniform";
  }
  return "unknown";
}

bool is_square(int n) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return r * r == n;
}

void parse_graph(Reader& rd, const json& j, ExperimentConfig& cfg) {
  const std::string path = "graph";
  if (!rd.object(j, path)) return;
  rd.only_keys(j, path, {"kind", "p"});
  if (auto k = rd.enumeration(j, "kind", path, parse_graph_kind,
                              "complete, ring, path, grid, erdos_renyi")) {
    cfg.graph.kind = *k;
  }
  cfg.graph.p = rd.number(j, "p", path);
  if (cfg.graph.kind == GraphKind::ErdosRenyi) {
    if (!cfg.graph.p) {
      rd.fail("graph.p", "required for erdos_renyi");
    } else if (!(*cfg.graph.p > 0.0 && *cfg.graph.p <= 1.0)) {
      rd.fail("graph.p", "must lie in (0, 1]");
    }
  } else if (cfg.graph.p) {
    rd.fail("graph.p", "only used by erdos_renyi");
  }
}

void parse_theta(Reader& rd, const json& j, ExperimentConfig& cfg) {
  const std::string path = "theta";
  if (!rd.object(j, path)) return;
  cfg.theta_given = true;
  if (auto k = rd.enumeration(j, "kind", path, parse_theta_kind, "ball, box")) cfg.theta.kind = *k;
  const auto d = static_cast<std::size_t>(std::max(cfg.d, 1));
  if (cfg.theta.kind == ProjectionSet::Kind::Ball) {
    rd.only_keys(j, path, {"kind", "center", "radius"});
    if (auto c = rd.vector(j, "center", path)) {
      if (c->size() != d) rd.fail("theta.center", "needs d entries");
      cfg.theta.center = *c;
    }
    if (auto r = rd.number(j, "radius", path)) {
      if (!(*r > 0.0)) rd.fail("theta.radius", "must be positive");
      cfg.theta.radius = *r;
    }
  } else {
    rd.only_keys(j, path, {"kind", "lo", "hi"});
    auto bound = [&](std::string_view key, double def) {
      std::vector<double> v{def};
      const json* e = rd.find(j, key);
      if (e && e->is_number()) {
        v = {e->get<double>()};
      } else if (auto vec = rd.vector(j, key, path)) {
        if (vec->size() != d && vec->size() != 1) rd.fail(Reader::join(path, key), "needs 1 or d entries");
        v = *vec;
      }
      if (v.size() == 1) v.assign(d, v.front());
      return v;
    };
    cfg.theta.lo = bound("lo", -1.0);
    cfg.theta.hi = bound("hi", 1.0);
    if (cfg.theta.lo.size() == cfg.theta.hi.size()) {
      for (std::size_t i = 0; i < cfg.theta.lo.size(); ++i) {
        if (!(cfg.theta.lo[i] <= cfg.theta.hi[i])) {
          rd.fail("theta", "lo must not exceed hi");
          break;
        }
      }
    }
  }
}

void parse_objective(Reader& rd, const json& j, ExperimentConfig& cfg) {
  const std::string path = "objective";
  if (!rd.object(j, path)) return;
  rd.require(j, "kind", path);
  ObjectiveSpec& o = cfg.objective;
  if (auto k = rd.enumeration(j, "kind", path, parse_objective_kind,
                              "quadratic, least_squares, logistic, hard, constant, linear")) {
    o.kind = *k;
  }
  if (auto s = rd.unsigned_integer(j, "instance_seed", path)) o.instance_seed = *s;
  const auto d = static_cast<std::size_t>(std::max(cfg.d, 1));

  switch (o.kind) {
    case ObjectiveKind::Quadratic: {
      rd.only_keys(j, path, {"kind", "instance_seed", "alpha", "Lbar", "xstar", "spectrum"});
      if (auto v = rd.number(j, "alpha", path)) o.alpha = *v;
      if (auto v = rd.number(j, "Lbar", path)) o.Lbar = *v;
      if (!(o.alpha > 0.0)) rd.fail("objective.alpha", "must be positive");
      if (o.alpha > o.Lbar) rd.fail("objective", "alpha must not exceed Lbar");
      if (auto v = rd.vector(j, "xstar", path)) {
        if (v->size() != d) rd.fail("objective.xstar", "needs d entries");
        o.xstar = *v;
      }
      if (auto v = rd.vector(j, "spectrum", path)) {
        if (v->size() != d) rd.fail("objective.spectrum", "needs d entries");
        for (double s : *v) {
          if (!(s > 0.0)) {
            rd.fail("objective.spectrum", "entries must be positive");
            break;
          }
        }
        o.spectrum = *v;
      }
      break;
    }
    case ObjectiveKind::LeastSquares:
    case ObjectiveKind::Logistic: {
      const bool ls = o.kind == ObjectiveKind::LeastSquares;
      if (ls) {
        rd.only_keys(j, path, {"kind", "instance_seed", "A", "y", "m", "rank", "sv_min", "sv_max",
                               "residual", "xstar_norm"});
      } else {
        rd.only_keys(j, path, {"kind", "instance_seed", "A", "m"});
      }
      if (auto A = rd.matrix(j, "A", path)) {
        o.A = *A;
        if (o.A.front().size() != d) rd.fail("objective.A", "needs d columns");
        if (ls) {
          if (auto y = rd.vector(j, "y", path)) {
            if (y->size() != o.A.size()) rd.fail("objective.y", "needs one entry per row of A");
            o.y = *y;
          } else {
            rd.fail("objective.y", "required with A");
          }
        }
        for (const char* k : {"m", "rank", "sv_min", "sv_max", "residual", "xstar_norm"}) {
          if (j.contains(k)) rd.fail(Reader::join(path, k), "cannot be combined with A");
        }
      } else {
        if (ls && j.contains("y")) rd.fail("objective.y", "only used with A");
        LeastSquaresSpec& g = o.generate;
        g.d = static_cast<Eigen::Index>(d);
        if (auto v = rd.integer(j, "m", path)) g.m = *v;
        if (g.m < 1) rd.fail("objective.m", "must be >= 1");
        if (ls) {
          if (auto v = rd.integer(j, "rank", path)) g.rank = *v;
          if (auto v = rd.number(j, "sv_min", path)) g.sv_min = *v;
          if (auto v = rd.number(j, "sv_max", path)) g.sv_max = *v;
          if (auto v = rd.number(j, "residual", path)) g.residual = *v;
          if (auto v = rd.number(j, "xstar_norm", path)) g.xstar_norm = *v;
          g.rank = std::min<Eigen::Index>(g.rank, std::min<Eigen::Index>(g.m, g.d));
          if (g.rank < 1) rd.fail("objective.rank", "must be >= 1");
          if (!(g.sv_min > 0.0 && g.sv_min <= g.sv_max)) {
            rd.fail("objective", "need 0 < sv_min <= sv_max");
          }
          if (g.residual < 0.0) rd.fail("objective.residual", "must be >= 0");
          if (g.xstar_norm < 0.0) rd.fail("objective.xstar_norm", "must be >= 0");
        }
      }
      break;
    }
    case ObjectiveKind::Hard: {
      rd.only_keys(j, path, {"kind", "instance_seed", "alpha", "omega"});
      if (auto v = rd.number(j, "alpha", path)) o.alpha = *v;
      if (!(o.alpha > 0.0)) rd.fail("objective.alpha", "must be positive");
      if (const json* w = rd.find(j, "omega")) {
        if (w->is_string()) {
          o.omega = w->get<std::string>();
          if (o.omega != "plus" && o.omega != "minus" && o.omega != "alternating") {
            rd.fail("objective.omega", "expected plus, minus, alternating or an array of +-1");
          }
        } else if (w->is_array()) {
          o.omega = "explicit";
          for (const json& e : *w) {
            if (!e.is_number_integer() || (e.get<int>() != 1 && e.get<int>() != -1)) {
              rd.fail("objective.omega", "entries must be +1 or -1");
              break;
            }
            o.omega_values.push_back(e.get<int>());
          }
          if (o.omega_values.size() != d) rd.fail("objective.omega", "needs d entries");
        } else {
          rd.fail("objective.omega", "expected a string or an array");
        }
      }
      break;
    }
    case ObjectiveKind::Constant:
      rd.only_keys(j, path, {"kind", "instance_seed", "value"});
      if (auto v = rd.number(j, "value", path)) o.value = *v;
      break;
    case ObjectiveKind::Linear:
      rd.only_keys(j, path, {"kind", "instance_seed", "c", "b"});
      if (auto v = rd.vector(j, "c", path)) {
        if (v->size() != d) rd.fail("objective.c", "needs d entries");
        o.c = *v;
      } else {
        rd.fail("objective.c", "required for linear");
      }
      if (auto v = rd.number(j, "b", path)) o.b = *v;
      break;
  }
}

void parse_noise(Reader& rd, const json& j, ExperimentConfig& cfg) {
  const std::string path = "noise";
  if (!rd.object(j, path)) return;
  rd.only_keys(j, path, {"kind", "sigma", "sequence"});
  NoiseKind kind = NoiseKind::Zero;
  if (auto k = rd.enumeration(j, "kind", path, parse_noise_kind,
                              "zero, gaussian, uniform, sign_alternating, constant_bias, "
                              "precommitted_sequence")) {
    kind = *k;
  }
  // A missing or invalid sigma reads as 0 (precommitted: as "derive from the values").
  double sigma = 0.0;
  bool sigma_given = false;
  if (const auto v = rd.number(j, "sigma", path)) {
    if (*v >= 0.0) {
      sigma = *v;
      sigma_given = true;
    } else {
      rd.fail("noise.sigma", "must be >= 0");
    }
  }
  auto sequence = rd.vector(j, "sequence", path);
  if (sequence && kind != NoiseKind::Precommitted) {
    rd.fail("noise.sequence", "only used by precommitted_sequence");
  }
  switch (kind) {
    case NoiseKind::Zero:
      if (sigma != 0.0) rd.fail("noise.sigma", "zero noise has sigma 0");
      cfg.noise = NoiseModel::zero();
      break;
    case NoiseKind::Gaussian: cfg.noise = NoiseModel::gaussian(sigma); break;
    case NoiseKind::Uniform: cfg.noise = NoiseModel::uniform(sigma); break;
    case NoiseKind::SignAlternating:
      cfg.noise = NoiseModel::sign_alternating(sigma);
      break;
    case NoiseKind::ConstantBias: cfg.noise = NoiseModel::constant_bias(sigma); break;
    case NoiseKind::Precommitted:
      if (!sequence) {
        rd.fail("noise.sequence", "required for precommitted_sequence");
        break;
      }
      if (sequence->size() < 2 * cfg.T) {
        rd.fail("noise.sequence", "needs at least 2*T values (one per query)");
      }
      try {
        cfg.noise = NoiseModel::precommitted(*sequence, sigma_given ? sigma : -1.0);
      } catch (const Error& e) {
        rd.fail("noise", e.what());
      }
      break;
  }
}

void parse_schedule(Reader& rd, const json& j, ExperimentConfig& cfg) {
  const std::string path = "schedule";
  if (!rd.object(j, path)) return;
  Schedule& s = cfg.schedule;
  if (auto k = rd.enumeration(j, "kind", path, parse_schedule_kind,
                              "strongly_convex_pl, improved_beta2, custom")) {
    s.kind = *k;
  }
  if (s.kind == ScheduleKind::Custom) {
    rd.only_keys(j, path, {"kind", "alpha", "eta0", "eta_power", "h0", "h_power"});
    for (const char* k : {"eta0", "eta_power", "h0", "h_power"}) rd.require(j, k, path);
    if (auto v = rd.number(j, "eta0", path)) s.eta0 = *v;
    if (auto v = rd.number(j, "eta_power", path)) s.eta_power = *v;
    if (auto v = rd.number(j, "h0", path)) s.h0 = *v;
    if (auto v = rd.number(j, "h_power", path)) s.h_power = *v;
    if (!(s.eta0 > 0.0)) rd.fail("schedule.eta0", "must be positive");
    if (!(s.h0 > 0.0)) rd.fail("schedule.h0", "must be positive");
    if (s.eta_power < 0.0) rd.fail("schedule.eta_power", "must be >= 0 (nonincreasing eta)");
    if (s.h_power < 0.0) rd.fail("schedule.h_power", "must be >= 0 (nonincreasing h)");
  } else {
    rd.only_keys(j, path, {"kind", "alpha"});
  }
  if (auto v = rd.number(j, "alpha", path)) {
    if (!(*v > 0.0)) rd.fail("schedule.alpha", "must be positive");
    s.alpha = *v;
    cfg.schedule_alpha_given = true;
  }
}

void parse_init(Reader& rd, const json& j, ExperimentConfig& cfg) {
  const std::string path = "init";
  if (!rd.object(j, path)) return;
  rd.only_keys(j, path, {"kind", "point"});
  if (auto k = rd.enumeration(j, "kind", path, parse_init_kind, "vertex, point, uniform")) {
    cfg.init.kind = *k;
  }
  auto p = rd.vector(j, "point", path);
  if (cfg.init.kind == InitKind::Point) {
    if (!p) {
      rd.fail("init.point", "required for init kind point");
    } else if (p->size() != static_cast<std::size_t>(std::max(cfg.d, 1))) {
      rd.fail("init.point", "needs d entries");
    } else {
      cfg.init.point = Eigen::Map<const Eigen::VectorXd>(p->data(), static_cast<Eigen::Index>(p->size()));
    }
  } else if (p) {
    rd.fail("init.point", "only used by init kind point");
  }
}

void parse_record(Reader& rd, const json& j, ExperimentConfig& cfg) {
  const std::string path = "record";
  if (!rd.object(j, path)) return;
  rd.only_keys(j, path, {"every", "log_spaced", "points"});
  auto every = rd.integer(j, "every", path);
  auto log_spaced = rd.boolean(j, "log_spaced", path);
  auto points = rd.integer(j, "points", path);
  if (every) {
    if (*every < 1) rd.fail("record.every", "must be >= 1");
    if (log_spaced && *log_spaced) rd.fail("record", "every and log_spaced=true are exclusive");
    if (points) rd.fail("record.points", "only used with log-spaced recording");
    cfg.record.every = static_cast<std::uint64_t>(std::max<std::int64_t>(*every, 1));
    cfg.record.log_spaced = false;
  } else {
    if (log_spaced) cfg.record.log_spaced = *log_spaced;
    if (points) {
      if (*points < 2) rd.fail("record.points", "must be >= 2");
      if (!cfg.record.log_spaced) rd.fail("record.points", "only used with log-spaced recording");
      cfg.record.points = static_cast<std::size_t>(std::max<std::int64_t>(*points, 2));
    }
  }
}

void parse_seeds(Reader& rd, const json& j, ExperimentConfig& cfg) {
  if (j.is_number_integer()) {
    const auto k = j.get<std::int64_t>();
    if (k < 2) rd.fail("seeds", "a sweep needs at least 2 seeds");
    cfg.seed_count = static_cast<int>(k);
  } else if (j.is_array()) {
    std::set<std::uint64_t> seen;
    for (const json& e : j) {
      if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0)) {
        rd.fail("seeds", "entries must be non-negative integers");
        return;
      }
      const auto s = e.get<std::uint64_t>();
      if (!seen.insert(s).second) rd.fail("seeds", "seeds must differ (duplicate " + std::to_string(s) + ")");
      cfg.seeds.push_back(s);
    }
    if (cfg.seeds.size() < 2) rd.fail("seeds", "a sweep needs at least 2 seeds");
  } else {
    rd.fail("seeds", "expected a count or an array of seeds");
  }
}

json vec_json(const std::vector<double>& v) { return json(v); }

json canonical_json(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["T"] = c.T;
  j["n"] = c.n;
  j["d"] = c.d;
  j["graph"] = {{"kind", std::string(to_string(c.graph.kind))}};
  if (c.graph.p) j["graph"]["p"] = *c.graph.p;
  j["beta"] = c.beta;
  j["estimator"] = std::string(to_string(c.estimator));

  const ObjectiveSpec& o = c.objective;
  json obj = {{"kind", std::string(to_string(o.kind))}, {"instance_seed", o.instance_seed}};
  switch (o.kind) {
    case ObjectiveKind::Quadratic:
      obj["alpha"] = o.alpha;
      obj["Lbar"] = o.Lbar;
      if (!o.xstar.empty()) obj["xstar"] = vec_json(o.xstar);
      if (!o.spectrum.empty()) obj["spectrum"] = vec_json(o.spectrum);
      break;
    case ObjectiveKind::LeastSquares:
    case ObjectiveKind::Logistic:
      if (!o.A.empty()) {
        obj["A"] = o.A;
        if (o.kind == ObjectiveKind::LeastSquares) obj["y"] = vec_json(o.y);
      } else {
        obj["m"] = o.generate.m;
        if (o.kind == ObjectiveKind::LeastSquares) {
          obj["rank"] = o.generate.rank;
          obj["sv_min"] = o.generate.sv_min;
          obj["sv_max"] = o.generate.sv_max;
          obj["residual"] = o.generate.residual;
          obj["xstar_norm"] = o.generate.xstar_norm;
        }
      }
      break;
    case ObjectiveKind::Hard:
      obj["alpha"] = o.alpha;
      if (o.omega == "explicit") {
        obj["omega"] = o.omega_values;
      } else {
        obj["omega"] = o.omega;
      }
      break;
    case ObjectiveKind::Constant: obj["value"] = o.value; break;
    case ObjectiveKind::Linear:
      obj["c"] = vec_json(o.c);
      obj["b"] = o.b;
      break;
  }
  j["objective"] = obj;

  if (o.kind != ObjectiveKind::Hard) {
    if (c.theta.kind == ProjectionSet::Kind::Ball) {
      j["theta"] = {{"kind", "ball"}, {"radius", c.theta.radius}};
      j["theta"]["center"] =
          c.theta.center.empty() ? vec_json(std::vector<double>(static_cast<std::size_t>(c.d), 0.0))
                                 : vec_json(c.theta.center);
    } else {
      j["theta"] = {{"kind", "box"}, {"lo", vec_json(c.theta.lo)}, {"hi", vec_json(c.theta.hi)}};
    }
  }

  json noise = {{"kind", std::string(to_string(c.noise.kind))}, {"sigma", c.noise.sigma}};
  if (c.noise.kind == NoiseKind::Precommitted) noise["sequence"] = c.noise.sequence;
  j["noise"] = noise;

  json sched = {{"kind", std::string(to_string(c.schedule.kind))}};
  if (c.schedule_alpha_given) sched["alpha"] = c.schedule.alpha;
  if (c.schedule.kind == ScheduleKind::Custom) {
    sched["eta0"] = c.schedule.eta0;
    sched["eta_power"] = c.schedule.eta_power;
    sched["h0"] = c.schedule.h0;
    sched["h_power"] = c.schedule.h_power;
  }
  j["schedule"] = sched;

  j["init"] = {{"kind", std::string(to_string(c.init.kind))}};
  if (c.init.kind == InitKind::Point) {
    j["init"]["point"] = std::vector<double>(c.init.point.data(), c.init.point.data() + c.init.point.size());
  }

  if (c.record.every > 0) {
    j["record"] = {{"every", c.record.every}, {"log_spaced", false}};
  } else {
    j["record"] = {{"log_spaced", c.record.log_spaced}};
    if (c.record.log_spaced) j["record"]["points"] = c.record.points;
  }
  if (!c.seeds.empty()) j["seeds"] = c.seeds;
  if (c.seed_count) j["seeds"] = *c.seed_count;
  return j;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(ErrorKind::Config, join_problems(problems)), problems_(std::move(problems)) {}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("parse error: ") + e.what()});
  }
  Reader rd;
  ExperimentConfig cfg;
  if (!rd.object(j, "(document)")) throw ConfigError(rd.problems);
  rd.only_keys(j, "", {"seed", "T", "n", "d", "graph", "beta", "estimator", "objective", "theta",
                       "noise", "schedule", "init", "record", "seeds"});
  for (const char* k : {"T", "n", "d", "objective"}) rd.require(j, k, "");

  if (auto v = rd.unsigned_integer(j, "seed", "")) cfg.seed = *v;
  if (auto v = rd.integer(j, "T", "")) {
    if (*v < 1) rd.fail("T", "must be >= 1");
    cfg.T = static_cast<std::uint64_t>(std::max<std::int64_t>(*v, 1));
  }
  if (auto v = rd.integer(j, "n", "")) {
    if (*v < 1) rd.fail("n", "must be >= 1");
    cfg.n = static_cast<int>(std::max<std::int64_t>(*v, 1));
  }
  if (auto v = rd.integer(j, "d", "")) {
    if (*v < 1) rd.fail("d", "must be >= 1");
    cfg.d = static_cast<int>(std::max<std::int64_t>(*v, 1));
  }
  if (auto v = rd.number(j, "beta", "")) {
    if (!(*v >= 2.0)) rd.fail("beta", "must be >= 2");
    cfg.beta = *v;
  }
  if (auto e = rd.enumeration(j, "estimator", "", parse_estimator_kind, "kernel, plain_beta2")) {
    cfg.estimator = *e;
  }
  if (cfg.estimator == EstimatorKind::PlainBeta2 && cfg.beta != 2.0) {
    rd.fail("estimator", "plain_beta2 requires beta = 2 (got beta = " + std::to_string(cfg.beta) + ")");
  }

  if (const json* g = rd.find(j, "graph")) parse_graph(rd, *g, cfg);
  if (cfg.graph.kind == GraphKind::Grid && !is_square(cfg.n)) {
    rd.fail("graph.kind", "grid needs a perfect-square n");
  }
  if (const json* o = rd.find(j, "objective")) parse_objective(rd, *o, cfg);
  if (const json* t = rd.find(j, "theta")) {
    if (cfg.objective.kind == ObjectiveKind::Hard) {
      rd.fail("theta", "the hard objective fixes theta = [0, a]^d; omit theta");
    } else {
      parse_theta(rd, *t, cfg);
    }
  }
  if (const json* v = rd.find(j, "noise")) parse_noise(rd, *v, cfg);
  if (const json* v = rd.find(j, "schedule")) parse_schedule(rd, *v, cfg);
  if (const json* v = rd.find(j, "init")) parse_init(rd, *v, cfg);
  if (const json* v = rd.find(j, "record")) parse_record(rd, *v, cfg);
  if (const json* v = rd.find(j, "seeds")) parse_seeds(rd, *v, cfg);

  if (!rd.problems.empty()) throw ConfigError(rd.problems);
  cfg.canonical = canonical_json(cfg);
  return cfg;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string text = cfg.canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return m;
}

ProjectionSet build_theta(const ExperimentConfig& cfg) {
  const ThetaSpec& t = cfg.theta;
  if (t.kind == ProjectionSet::Kind::Ball) {
    const Eigen::VectorXd c = t.center.empty() ? Eigen::VectorXd::Zero(cfg.d) : to_vector(t.center);
    return ProjectionSet::ball(c, t.radius);
  }
  return ProjectionSet::box(to_vector(t.lo), to_vector(t.hi));
}

Eigen::VectorXd theta_centre(const ProjectionSet& theta) {
  return theta.kind == ProjectionSet::Kind::Ball ? theta.center : Eigen::VectorXd(0.5 * (theta.lo + theta.hi));
}

Objective build_objective(const ExperimentConfig& cfg) {
  const ObjectiveSpec& o = cfg.objective;
  const std::uint64_t iseed = o.instance_seed;
  if (o.kind == ObjectiveKind::Hard) {
    Eigen::VectorXi omega;
    if (o.omega == "plus") {
      omega = omega_all(cfg.d, 1);
    } else if (o.omega == "minus") {
      omega = omega_all(cfg.d, -1);
    } else if (o.omega == "alternating") {
      omega = omega_alternating(cfg.d);
    } else {
      omega = Eigen::Map<const Eigen::VectorXi>(o.omega_values.data(),
                                                 static_cast<Eigen::Index>(o.omega_values.size()));
    }
    return make_hard_instance(cfg.d, cfg.beta, o.alpha, static_cast<double>(cfg.T), omega);
  }
  const ProjectionSet theta = build_theta(cfg);
  switch (o.kind) {
    case ObjectiveKind::Quadratic: {
      const Eigen::VectorXd xstar = o.xstar.empty() ? theta_centre(theta) : to_vector(o.xstar);
      if (!o.spectrum.empty()) return make_quadratic(to_vector(o.spectrum), xstar, theta, iseed);
      return make_quadratic(cfg.d, o.alpha, o.Lbar, xstar, theta, iseed);
    }
    case ObjectiveKind::LeastSquares: {
      if (!o.A.empty()) return make_least_squares(to_matrix(o.A), to_vector(o.y), theta, iseed);
      const auto [A, y] = generate_least_squares(o.generate, iseed);
      return make_least_squares(A, y, theta, iseed);
    }
    case ObjectiveKind::Logistic: {
      if (!o.A.empty()) return make_logistic(to_matrix(o.A), theta, iseed);
      Eigen::MatrixXd A(o.generate.m, cfg.d);
      RandomStream stream(iseed, {Purpose::Objective, 1, 0});
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index k = 0; k < A.cols(); ++k) A(i, k) = normal(stream);
      }
      return make_logistic(A, theta, iseed);
    }
    case ObjectiveKind::Constant: return make_constant(cfg.d, o.value, theta);
    case ObjectiveKind::Linear: return make_linear(to_vector(o.c), o.b, theta);
    case ObjectiveKind::Hard: break;
  }
  throw Error(ErrorKind::Config, "unsupported objective");
}

}  // namespace

RunConfig build_run_config(const ExperimentConfig& cfg, std::uint64_t seed) {
  RunConfig rc;
  rc.seed = seed;
  rc.T = cfg.T;
  rc.objective = build_objective(cfg);
  const GraphTopology topo =
      build_topology(cfg.graph.kind, cfg.n, cfg.graph.p, cfg.objective.instance_seed);
  rc.mixing = metropolis_matrix(topo);
  rc.estimator = cfg.estimator;
  if (cfg.estimator == EstimatorKind::Kernel) rc.kernel = build_legendre_kernel(cfg.beta);
  rc.noise = cfg.noise;
  rc.schedule = cfg.schedule;
  rc.schedule.beta = cfg.beta;
  rc.schedule.d = static_cast<double>(cfg.d);
  if (!cfg.schedule_alpha_given && cfg.schedule.kind != ScheduleKind::Custom) {
    if (!rc.objective.alpha || !(*rc.objective.alpha > 0.0)) {
      throw ConfigError({"schedule.alpha: required, the objective has no usable alpha"});
    }
    rc.schedule.alpha = *rc.objective.alpha;
  }
  rc.init = cfg.init;
  rc.record = cfg.record;
  rc.config_hash = config_hash(cfg);
  return rc;
}

std::vector<std::uint64_t> sweep_seeds(const ExperimentConfig& cfg, std::optional<int> k) {
  if (!cfg.seeds.empty()) {
    if (k && static_cast<std::size_t>(*k) != cfg.seeds.size()) {
      throw ConfigError({"seeds: --seeds " + std::to_string(*k) + " disagrees with the " +
                         std::to_string(cfg.seeds.size()) + " seeds listed in the config"});
    }
    return cfg.seeds;
  }
  const int count = k ? *k : cfg.seed_count.value_or(0);
  if (count < 2) throw ConfigError({"seeds: a sweep needs at least 2 seeds"});
  std::vector<std::uint64_t> out;
  for (int i = 0; i < count; ++i) out.push_back(cfg.seed + static_cast<std::uint64_t>(i));
  return out;
}

}  // namespace dzo::cli
