#include "cgvf/scenario_file.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "cgvf/error.hpp"

namespace cgvf {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Accumulates schema violations instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  void keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!ok.count(it.key())) fail(join(path, it.key()), "unknown key");
  }

  std::optional<double> number(const json& obj, const char* key, const std::string& path,
                               std::optional<double> fallback = std::nullopt) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (!fallback) fail(join(path, key), "required");
      return fallback;
    }
    if (!it->is_number() || !std::isfinite(it->get<double>())) {
      fail(join(path, key), "expected a finite number");
      return fallback;
    }
    return it->get<double>();
  }

  std::optional<std::vector<double>> numbers(const json& obj, const char* key,
                                             const std::string& path, bool required,
                                             std::optional<std::size_t> length = std::nullopt) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(join(path, key), "required");
      return std::nullopt;
    }
    return number_list(*it, join(path, key), length);
  }

  std::optional<std::vector<double>> number_list(const json& j, const std::string& path,
                                                 std::optional<std::size_t> length = std::nullopt) {
    if (!j.is_array()) {
      fail(path, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number() || !std::isfinite(j[i].get<double>())) {
        fail(index(path, i), "expected a finite number");
        return std::nullopt;
      }
      out.push_back(j[i].get<double>());
    }
    if (length && out.size() != *length) {
      fail(path, "expected " + std::to_string(*length) + " entries");
      return std::nullopt;
    }
    return out;
  }

  std::optional<std::string> string(const json& obj, const char* key, const std::string& path,
                                    std::optional<std::string> fallback = std::nullopt) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (!fallback) fail(join(path, key), "required");
      return fallback;
    }
    if (!it->is_string()) {
      fail(join(path, key), "expected a string");
      return fallback;
    }
    return it->get<std::string>();
  }

  bool boolean(const json& obj, const char* key, const std::string& path, bool fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) {
      fail(join(path, key), "expected true or false");
      return fallback;
    }
    return it->get<bool>();
  }

  std::optional<long long> integer(const json& obj, const char* key, const std::string& path,
                                   long long fallback) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer()) {
      fail(join(path, key), "expected an integer");
      return fallback;
    }
    return it->get<long long>();
  }
};

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::optional<TermKind> term_kind(const std::string& s) {
  if (s == "cos") return TermKind::kCosine;
  if (s == "sin") return TermKind::kSine;
  if (s == "power") return TermKind::kPower;
  if (s == "bent_lobe") return TermKind::kBentLobe;
  return std::nullopt;
}

const char* term_kind_name(TermKind k) {
  switch (k) {
    case TermKind::kCosine: return "cos";
    case TermKind::kSine: return "sin";
    case TermKind::kPower: return "power";
    case TermKind::kBentLobe: return "bent_lobe";
  }
  return "cos";
}

std::optional<ParametricPath> parse_explicit_path(Reader& rd, const json& j, const std::string& path) {
  rd.keys(j, path, {"coords", "period"});
  const auto period_it = j.find("period");
  std::optional<double> period;
  if (period_it != j.end()) {
    period = rd.number(j, "period", path, 0.0);
    if (period && !(*period > 0.0)) rd.fail(join(path, "period"), "must be > 0");
  }
  const auto it = j.find("coords");
  if (it == j.end() || !it->is_array()) {
    rd.fail(join(path, "coords"), "expected an array of term lists");
    return std::nullopt;
  }
  const std::size_t before = rd.errors.size();
  std::vector<CoordFunction> coords;
  for (std::size_t c = 0; c < it->size(); ++c) {
    const std::string cp = index(join(path, "coords"), c);
    const json& terms = (*it)[c];
    if (!terms.is_array()) {
      rd.fail(cp, "expected an array of terms");
      continue;
    }
    std::vector<Term> ts;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = index(cp, t);
      if (!rd.object(terms[t], tp)) continue;
      rd.keys(terms[t], tp, {"kind", "amplitude", "frequency", "phase", "offset", "degree"});
      Term term;
      const auto kind = rd.string(terms[t], "kind", tp);
      if (kind) {
        if (auto k = term_kind(*kind)) term.kind = *k;
        else rd.fail(join(tp, "kind"), "expected one of cos, sin, power, bent_lobe");
      }
      term.amplitude = rd.number(terms[t], "amplitude", tp).value_or(0.0);
      term.frequency = rd.number(terms[t], "frequency", tp, 1.0).value_or(1.0);
      term.phase = rd.number(terms[t], "phase", tp, 0.0).value_or(0.0);
      term.offset = rd.number(terms[t], "offset", tp, 0.0).value_or(0.0);
      const auto deg = rd.integer(terms[t], "degree", tp, term.kind == TermKind::kPower ? 1 : 0);
      term.degree = static_cast<int>(deg.value_or(0));
      if (term.degree < 0) rd.fail(join(tp, "degree"), "must be >= 0");
      ts.push_back(term);
    }
    coords.emplace_back(std::move(ts));
  }
  if (coords.size() < 2) rd.fail(join(path, "coords"), "need at least 2 coordinates");
  if (rd.errors.size() != before) return std::nullopt;
  return ParametricPath(std::move(coords), period);
}

std::optional<ParametricPath> parse_path(Reader& rd, const json& j, const std::string& path) {
  if (!rd.object(j, path)) return std::nullopt;
  if (!j.contains("catalog")) return parse_explicit_path(rd, j, path);
  const auto name = rd.string(j, "catalog", path);
  if (!name) return std::nullopt;
  const std::size_t before = rd.errors.size();
  auto altitude = [&]() -> std::optional<double> {
    if (!j.contains("altitude")) return std::nullopt;
    return rd.number(j, "altitude", path);
  };
  if (*name == "circle") {
    rd.keys(j, path, {"catalog", "radius", "center", "altitude"});
    const double r = rd.number(j, "radius", path).value_or(1.0);
    if (!(r > 0.0)) rd.fail(join(path, "radius"), "must be > 0");
    const auto c = rd.numbers(j, "center", path, false, 2).value_or(std::vector<double>{0, 0});
    const auto alt = altitude();
    if (rd.errors.size() != before) return std::nullopt;
    return catalog::circle(r, c[0], c[1], alt);
  }
  if (*name == "ellipse") {
    rd.keys(j, path, {"catalog", "semi_axes", "center", "altitude"});
    const auto ax = rd.numbers(j, "semi_axes", path, true, 2);
    if (ax && !((*ax)[0] > 0.0 && (*ax)[1] > 0.0)) rd.fail(join(path, "semi_axes"), "must be > 0");
    const auto c = rd.numbers(j, "center", path, false, 2).value_or(std::vector<double>{0, 0});
    const auto alt = altitude();
    if (rd.errors.size() != before) return std::nullopt;
    return catalog::ellipse((*ax)[0], (*ax)[1], c[0], c[1], alt);
  }
  if (*name == "lissajous") {
    rd.keys(j, path, {"catalog", "amplitude", "frequency", "phase", "offset", "period"});
    const auto amp = rd.numbers(j, "amplitude", path, true);
    const std::size_t n = amp ? amp->size() : 0;
    if (amp && n < 2) rd.fail(join(path, "amplitude"), "need at least 2 coordinates");
    const auto freq = rd.numbers(j, "frequency", path, true, n);
    const auto phase = rd.numbers(j, "phase", path, false, n).value_or(std::vector<double>(n, 0.0));
    const auto off = rd.numbers(j, "offset", path, false, n).value_or(std::vector<double>(n, 0.0));
    std::optional<double> period;
    if (j.contains("period")) {
      period = rd.number(j, "period", path);
      if (period && !(*period > 0.0)) rd.fail(join(path, "period"), "must be > 0");
    }
    if (rd.errors.size() != before) return std::nullopt;
    return catalog::lissajous(*amp, *freq, phase, off, period);
  }
  if (*name == "bent_infinity") {
    rd.keys(j, path, {"catalog"});
    return catalog::bent_infinity();
  }
  if (*name == "flight_lissajous") {
    rd.keys(j, path, {"catalog"});
    return catalog::flight_lissajous();
  }
  if (*name == "line") {
    rd.keys(j, path, {"catalog", "origin", "direction"});
    const auto o = rd.numbers(j, "origin", path, true);
    const auto d = rd.numbers(j, "direction", path, true, o ? std::optional(o->size()) : std::nullopt);
    if (o && o->size() < 2) rd.fail(join(path, "origin"), "need at least 2 coordinates");
    if (rd.errors.size() != before) return std::nullopt;
    return catalog::line(*o, *d);
  }
  rd.fail(join(path, "catalog"),
          "unknown catalog path '" + *name +
              "' (circle, ellipse, lissajous, bent_infinity, flight_lissajous, line)");
  return std::nullopt;
}

struct GainsSpec {
  std::optional<std::vector<double>> k;  // nullopt: broadcast k_scalar
  double k_scalar = 1.0;
  GainSet base;
};

GainsSpec parse_gains(Reader& rd, const json& root) {
  GainsSpec g;
  const auto it = root.find("gains");
  if (it == root.end()) return g;
  const std::string p = "gains";
  if (!rd.object(*it, p)) return g;
  const json& j = *it;
  rd.keys(j, p, {"k", "k_c", "v", "k_theta", "sat_lo", "sat_hi", "gamma"});
  if (j.contains("k")) {
    if (j["k"].is_number()) g.k_scalar = j["k"].get<double>();
    else g.k = rd.number_list(j["k"], join(p, "k"));
  }
  g.base.k_c = rd.number(j, "k_c", p, 1.0).value_or(1.0);
  g.base.v = rd.number(j, "v", p, 1.0).value_or(1.0);
  g.base.k_theta = rd.number(j, "k_theta", p, 1.0).value_or(1.0);
  g.base.sat_hi = rd.number(j, "sat_hi", p, 1.0).value_or(1.0);
  g.base.sat_lo = rd.number(j, "sat_lo", p, -g.base.sat_hi).value_or(-g.base.sat_hi);
  g.base.gamma = rd.number(j, "gamma", p, kDefaultGamma).value_or(kDefaultGamma);
  return g;
}

Eigen::VectorXd expand_k(const std::optional<std::vector<double>>& k, double scalar, int n) {
  if (k) return to_vec(*k);
  return Eigen::VectorXd::Constant(n, scalar);
}

}  // namespace

ScenarioDocument parse_scenario(const json& doc) {
  Reader rd;
  if (!doc.is_object()) throw ScenarioError({"<root>: expected a JSON object"});
  rd.keys(doc, "", {"name", "mode", "dt", "t_end", "comm_hz", "seed", "paths", "robots", "graph",
                    "offsets", "gains", "initial", "safety", "tolerances", "outputs"});

  ScenarioDocument out;
  Scenario& sc = out.scenario;
  sc.name = rd.string(doc, "name", "", std::string("scenario")).value_or("scenario");
  const auto mode = rd.string(doc, "mode", "", std::string("integrator")).value_or("integrator");
  if (mode == "integrator") sc.mode = Mode::kIntegrator;
  else if (mode == "dubins") sc.mode = Mode::kDubins;
  else rd.fail("mode", "expected 'integrator' or 'dubins'");
  sc.dt = rd.number(doc, "dt", "", 1e-2).value_or(1e-2);
  sc.t_end = rd.number(doc, "t_end", "", 10.0).value_or(10.0);
  sc.comm_hz = rd.number(doc, "comm_hz", "", 0.0).value_or(0.0);
  const auto seed = rd.integer(doc, "seed", "", 1).value_or(1);
  if (seed < 0) rd.fail("seed", "must be >= 0");
  sc.seed = static_cast<std::uint64_t>(seed);

  // paths
  std::map<std::string, ParametricPath> paths;
  if (const auto it = doc.find("paths"); it == doc.end()) {
    rd.fail("paths", "required");
  } else if (rd.object(*it, "paths")) {
    for (auto p = it->begin(); p != it->end(); ++p)
      if (auto path = parse_path(rd, p.value(), join("paths", p.key())))
        paths.emplace(p.key(), std::move(*path));
  }

  const GainsSpec gains = parse_gains(rd, doc);

  // safety (R is shared with the gain set)
  if (const auto it = doc.find("safety"); it != doc.end() && rd.object(*it, "safety")) {
    rd.keys(*it, "safety", {"enabled", "R"});
    sc.safety.enabled = rd.boolean(*it, "enabled", "safety", false);
    sc.safety.R = rd.number(*it, "R", "safety", 1.0).value_or(1.0);
    if (!(sc.safety.R > 0.0)) rd.fail("safety.R", "must be > 0");
  }

  // robots
  if (const auto it = doc.find("robots"); it == doc.end() || !it->is_array() || it->empty()) {
    rd.fail("robots", "expected a non-empty array of robot groups");
  } else {
    for (std::size_t g = 0; g < it->size(); ++g) {
      const std::string gp = index("robots", g);
      const json& grp = (*it)[g];
      if (!rd.object(grp, gp)) continue;
      rd.keys(grp, gp, {"count", "path", "k"});
      const auto count = rd.integer(grp, "count", gp, 1).value_or(1);
      if (count < 1) rd.fail(join(gp, "count"), "must be >= 1");
      const auto pname = rd.string(grp, "path", gp);
      std::optional<std::vector<double>> k_override;
      std::optional<double> k_scalar;
      if (grp.contains("k")) {
        if (grp["k"].is_number()) k_scalar = grp["k"].get<double>();
        else k_override = rd.number_list(grp["k"], join(gp, "k"));
      }
      if (!pname) continue;
      const auto pit = paths.find(*pname);
      if (pit == paths.end()) {
        if (!doc.contains("paths") || !doc["paths"].contains(*pname))
          rd.fail(join(gp, "path"), "no path named '" + *pname + "'");
        continue;
      }
      const int n = pit->second.dim();
      GainSet gs = gains.base;
      gs.R = sc.safety.R;
      if (k_override) gs.k = to_vec(*k_override);
      else if (k_scalar) gs.k = Eigen::VectorXd::Constant(n, *k_scalar);
      else gs.k = expand_k(gains.k, gains.k_scalar, n);
      if (gs.k.size() != n) rd.fail(join(gp, "k"), "needs " + std::to_string(n) + " entries");
      for (long long c = 0; c < count; ++c) sc.robots.push_back({*pname, pit->second, gs});
    }
  }
  {
    // Gain violations are reported once against the gains section.
    GainSet probe = gains.base;
    probe.R = sc.safety.R;
    probe.k = gains.k ? to_vec(*gains.k) : Eigen::VectorXd::Constant(1, gains.k_scalar);
    for (auto& v : probe.violations())
      if (v.rfind("gains.R", 0) != 0) rd.errors.push_back(std::move(v));
  }
  const int N = sc.n_robots();

  // graph
  std::optional<CommGraph> graph;
  if (const auto it = doc.find("graph"); it == doc.end()) {
    rd.fail("graph", "required");
  } else if (rd.object(*it, "graph")) {
    rd.keys(*it, "graph", {"type", "edges"});
    try {
      if (it->contains("edges")) {
        const json& e = (*it)["edges"];
        std::vector<Edge> edges;
        bool ok = e.is_array();
        for (std::size_t k = 0; ok && k < e.size(); ++k) {
          ok = e[k].is_array() && e[k].size() == 2 && e[k][0].is_number_integer() &&
               e[k][1].is_number_integer();
          if (ok) edges.emplace_back(e[k][0].get<int>(), e[k][1].get<int>());
        }
        if (!ok) rd.fail("graph.edges", "expected an array of [i, j] integer pairs");
        else if (N > 0) graph = CommGraph(N, edges);
      } else {
        const auto type = rd.string(*it, "type", "graph").value_or("");
        if (N > 0) {
          if (type == "cycle") graph = CommGraph::cycle(N);
          else if (type == "path") graph = CommGraph::path(N);
          else if (type == "complete") graph = CommGraph::complete(N);
          else rd.fail("graph.type", "expected cycle, path, complete or an explicit edge list");
        }
      }
    } catch (const Error& e) {
      rd.fail("graph", e.what());
    }
  }

  // offsets
  Eigen::VectorXd w_star = Eigen::VectorXd::Zero(N);
  if (const auto it = doc.find("offsets"); it != doc.end() && rd.object(*it, "offsets")) {
    rd.keys(*it, "offsets", {"w_star", "spacing", "spacing_pi"});
    const int given = static_cast<int>(it->contains("w_star")) + it->contains("spacing") +
                      it->contains("spacing_pi");
    if (given > 1) rd.fail("offsets", "give only one of w_star, spacing, spacing_pi");
    if (it->contains("w_star")) {
      if (auto ws = rd.numbers(*it, "w_star", "offsets", true, static_cast<std::size_t>(N)))
        w_star = to_vec(*ws);
    } else if (it->contains("spacing") || it->contains("spacing_pi")) {
      const bool pi = it->contains("spacing_pi");
      const double s = rd.number(*it, pi ? "spacing_pi" : "spacing", "offsets").value_or(0.0) *
                       (pi ? std::numbers::pi : 1.0);
      for (int i = 0; i < N; ++i) w_star[i] = i * s;
    }
  }

  // initial
  if (const auto it = doc.find("initial"); it != doc.end() && rd.object(*it, "initial")) {
    rd.keys(*it, "initial", {"type", "lo", "hi", "states"});
    const auto type = rd.string(*it, "type", "initial", std::string("on_path")).value_or("on_path");
    if (type == "on_path") {
      sc.initial.kind = InitialCondition::Kind::kOnPath;
    } else if (type == "box") {
      sc.initial.kind = InitialCondition::Kind::kBox;
      if (auto lo = rd.numbers(*it, "lo", "initial", true)) sc.initial.box_lo = to_vec(*lo);
      if (auto hi = rd.numbers(*it, "hi", "initial", true)) sc.initial.box_hi = to_vec(*hi);
    } else if (type == "states") {
      sc.initial.kind = InitialCondition::Kind::kExplicit;
      const auto st = it->find("states");
      if (st == it->end() || !st->is_array()) {
        rd.fail("initial.states", "expected an array of state vectors");
      } else {
        for (std::size_t i = 0; i < st->size(); ++i)
          if (auto v = rd.number_list((*st)[i], index("initial.states", i)))
            sc.initial.states.push_back(to_vec(*v));
      }
    } else {
      rd.fail("initial.type", "expected on_path, box or states");
    }
  }

  if (const auto it = doc.find("tolerances"); it != doc.end() && rd.object(*it, "tolerances")) {
    rd.keys(*it, "tolerances", {"phi", "coordination", "min_distance"});
    sc.tolerances.phi = rd.number(*it, "phi", "tolerances", 1e-2).value_or(1e-2);
    sc.tolerances.coordination =
        rd.number(*it, "coordination", "tolerances", 1e-3).value_or(1e-3);
    if (it->contains("min_distance"))
      sc.tolerances.min_distance = rd.number(*it, "min_distance", "tolerances");
  }

  if (const auto it = doc.find("outputs"); it != doc.end() && rd.object(*it, "outputs")) {
    rd.keys(*it, "outputs", {"record_stride", "plots", "csv"});
    sc.record_stride = static_cast<int>(rd.integer(*it, "record_stride", "outputs", 1).value_or(1));
    out.outputs.plots = rd.boolean(*it, "plots", "outputs", true);
    out.outputs.csv = rd.boolean(*it, "csv", "outputs", true);
  }

  if (!rd.errors.empty()) throw ScenarioError(std::move(rd.errors));
  sc.graph = *graph;
  sc.offsets = OffsetSpec::from_reference(sc.graph, w_star);
  sc.validate();
  return out;
}

ScenarioDocument parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError({std::string("<document>: malformed JSON: ") + e.what()});
  }
  return parse_scenario(doc);
}

ScenarioDocument load_scenario_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError({"<file>: cannot open " + file.string()});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

namespace {

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json path_json(const ParametricPath& p) {
  json coords = json::array();
  for (const auto& c : p.coords()) {
    json terms = json::array();
    for (const auto& t : c.terms())
      terms.push_back({{"kind", term_kind_name(t.kind)},
                       {"amplitude", t.amplitude},
                       {"frequency", t.frequency},
                       {"phase", t.phase},
                       {"offset", t.offset},
                       {"degree", t.degree}});
    coords.push_back(terms);
  }
  json j = {{"coords", coords}};
  if (p.period()) j["period"] = *p.period();
  return j;
}

}  // namespace

json serialize_scenario(const Scenario& sc, const OutputOptions& outputs) {
  if (sc.robots.empty()) throw Error("cannot serialize a scenario without robots");
  const GainSet& g0 = sc.robots.front().gains;
  json paths = json::object();
  json robots = json::array();
  std::map<std::string, ParametricPath> seen;
  for (const auto& r : sc.robots) {
    const GainSet& g = r.gains;
    if (g.k_c != g0.k_c || g.v != g0.v || g.k_theta != g0.k_theta || g.sat_lo != g0.sat_lo ||
        g.sat_hi != g0.sat_hi || g.gamma != g0.gamma)
      throw Error("scenario files carry one shared gain set; only k may vary per robot");
    if (const auto it = seen.find(r.path_name); it != seen.end() && !(it->second == r.path))
      throw Error("two different paths share the name '" + r.path_name + "'");
    seen.emplace(r.path_name, r.path);
    paths[r.path_name] = path_json(r.path);
    robots.push_back({{"count", 1}, {"path", r.path_name}, {"k", vec_json(g.k)}});
  }
  json edges = json::array();
  for (auto [i, j] : sc.graph.edges()) edges.push_back({i, j});

  json initial;
  switch (sc.initial.kind) {
    case InitialCondition::Kind::kOnPath: initial = {{"type", "on_path"}}; break;
    case InitialCondition::Kind::kBox:
      initial = {{"type", "box"}, {"lo", vec_json(sc.initial.box_lo)}, {"hi", vec_json(sc.initial.box_hi)}};
      break;
    case InitialCondition::Kind::kExplicit: {
      json states = json::array();
      for (const auto& s : sc.initial.states) states.push_back(vec_json(s));
      initial = {{"type", "states"}, {"states", states}};
      break;
    }
  }
  json tol = {{"phi", sc.tolerances.phi}, {"coordination", sc.tolerances.coordination}};
  if (sc.tolerances.min_distance) tol["min_distance"] = *sc.tolerances.min_distance;

  return {{"name", sc.name},
          {"mode", to_string(sc.mode)},
          {"dt", sc.dt},
          {"t_end", sc.t_end},
          {"comm_hz", sc.comm_hz},
          {"seed", sc.seed},
          {"paths", paths},
          {"robots", robots},
          {"graph", {{"edges", edges}}},
          {"offsets", {{"w_star", vec_json(sc.offsets.w_star)}}},
          {"gains",
           {{"k_c", g0.k_c},
            {"v", g0.v},
            {"k_theta", g0.k_theta},
            {"sat_lo", g0.sat_lo},
            {"sat_hi", g0.sat_hi},
            {"gamma", g0.gamma}}},
          {"initial", initial},
          {"safety", {{"enabled", sc.safety.enabled}, {"R", sc.safety.R}}},
          {"tolerances", tol},
          {"outputs",
           {{"record_stride", sc.record_stride}, {"plots", outputs.plots}, {"csv", outputs.csv}}}};
}

}  // namespace cgvf
