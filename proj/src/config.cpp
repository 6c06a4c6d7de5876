#include "kg/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "kg/errors.hpp"

namespace kg {

using nlohmann::json;

namespace {

template <typename T>
T get_key(const json& doc, const std::string& key, const std::string& path) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + path + key + "' has the wrong type");
  }
}

void reject_unknown(const json& doc, const std::set<std::string>& allowed, const std::string& path) {
  if (!doc.is_object()) throw ConfigError("config '" + (path.empty() ? std::string("<root>") : path) + "' must be an object");
  for (const auto& item : doc.items())
    if (!allowed.count(item.key())) throw ConfigError("unknown config key '" + path + item.key() + "'");
}

Eigen::Vector3d vec3(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("config key '" + key + "' must hold 3-vectors");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw ConfigError("config key '" + key + "' must hold numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

}  // namespace

void SimConfig::validate() const {
  if (n < 17) throw ConfigError("config key 'n' must be >= 17 (stencil width), got " + std::to_string(n));
  const double expect = 1.0 / (n - 1);
  if (!(std::abs(dx - expect) <= 1e-12 * expect))
    throw ConfigError("config key 'dx' must equal 1/(n-1) = " + std::to_string(expect));
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("config key 'dt' must be positive");
  if (!std::isfinite(mu2)) throw ConfigError("config key 'mu2' must be finite");
  if (!(lambda >= 0) || !std::isfinite(lambda)) throw ConfigError("config key 'lambda' must be non-negative");
  if (!(t_end > 0) || !std::isfinite(t_end)) throw ConfigError("config key 't_end' must be positive");
  if (!(snapshot_every > 0)) throw ConfigError("config key 'snapshot_every' must be positive");
  if (boundary != "zero") throw ConfigError("config key 'boundary' must be \"zero\"");
  if (init.type != "two_bumps" && init.type != "zero")
    throw ConfigError("config key 'init.type' must be \"two_bumps\" or \"zero\"");
  if (!std::isfinite(init.psi1_factor)) throw ConfigError("config key 'init.psi1_factor' must be finite");
  for (const auto& b : init.balls) {
    if (!(b.radius > 0)) throw ConfigError("config key 'init.radii' must be positive");
    for (int i = 0; i < 3; ++i)
      if (b.center(i) - b.radius < 0 || b.center(i) + b.radius > 1)
        throw ConfigError("config key 'init.centers': ball escapes the unit box");
  }
}

SimConfig make_sim_config(int n) {
  SimConfig c;
  c.n = n;
  c.dx = n > 1 ? 1.0 / (n - 1) : 0.0;
  return c;
}

SimConfig sim_config_from_json(const json& doc) {
  reject_unknown(doc, {"n", "dx", "dt", "mu2", "lambda", "t_end", "snapshot_every", "init", "boundary"}, "");
  if (!doc.contains("n")) throw ConfigError("config key 'n' is required");
  SimConfig c = make_sim_config(get_key<int>(doc, "n", ""));
  if (doc.contains("dx")) c.dx = get_key<double>(doc, "dx", "");
  if (doc.contains("dt")) c.dt = get_key<double>(doc, "dt", "");
  if (doc.contains("mu2")) c.mu2 = get_key<double>(doc, "mu2", "");
  if (doc.contains("lambda")) c.lambda = get_key<double>(doc, "lambda", "");
  if (doc.contains("t_end")) c.t_end = get_key<double>(doc, "t_end", "");
  if (doc.contains("snapshot_every")) c.snapshot_every = get_key<double>(doc, "snapshot_every", "");
  if (doc.contains("boundary")) c.boundary = get_key<std::string>(doc, "boundary", "");
  if (doc.contains("init")) {
    const json& in = doc.at("init");
    reject_unknown(in, {"type", "centers", "radii", "psi1_factor"}, "init.");
    if (in.contains("type")) c.init.type = get_key<std::string>(in, "type", "init.");
    if (in.contains("psi1_factor")) c.init.psi1_factor = get_key<double>(in, "psi1_factor", "init.");
    if (in.contains("centers") || in.contains("radii")) {
      if (!in.contains("centers") || !in.contains("radii"))
        throw ConfigError("config keys 'init.centers' and 'init.radii' must be given together");
      const json& cs = in.at("centers");
      const json& rs = in.at("radii");
      if (!cs.is_array() || !rs.is_array() || cs.size() != rs.size())
        throw ConfigError("config keys 'init.centers' and 'init.radii' must be arrays of equal length");
      c.init.balls.clear();
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!rs[i].is_number()) throw ConfigError("config key 'init.radii' must hold numbers");
        c.init.balls.push_back({vec3(cs[i], "init.centers"), rs[i].get<double>()});
      }
    }
  }
  c.validate();
  return c;
}

json to_json(const SimConfig& c) {
  json centers = json::array();
  json radii = json::array();
  for (const auto& b : c.init.balls) {
    centers.push_back({b.center(0), b.center(1), b.center(2)});
    radii.push_back(b.radius);
  }
  return json{{"n", c.n},
              {"dx", c.dx},
              {"dt", c.dt},
              {"mu2", c.mu2},
              {"lambda", c.lambda},
              {"t_end", c.t_end},
              {"snapshot_every", c.snapshot_every},
              {"boundary", c.boundary},
              {"init", {{"type", c.init.type}, {"centers", centers}, {"radii", radii}, {"psi1_factor", c.init.psi1_factor}}}};
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return sim_config_from_json(doc);
}

bool operator==(const SimConfig& a, const SimConfig& b) {
  if (a.init.balls.size() != b.init.balls.size()) return false;
  for (std::size_t i = 0; i < a.init.balls.size(); ++i)
    if (a.init.balls[i].center != b.init.balls[i].center || a.init.balls[i].radius != b.init.balls[i].radius)
      return false;
  return a.n == b.n && a.dx == b.dx && a.dt == b.dt && a.mu2 == b.mu2 && a.lambda == b.lambda &&
         a.t_end == b.t_end && a.snapshot_every == b.snapshot_every && a.boundary == b.boundary &&
         a.init.type == b.init.type && a.init.psi1_factor == b.init.psi1_factor;
}

}  // namespace kg
