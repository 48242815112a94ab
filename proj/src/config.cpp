#include "geoctrl/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "json.hpp"

#include "geoctrl/errors.hpp"

namespace geoctrl {

namespace {

using nlohmann::json;

using Setter = std::function<void(Config&, const json&, const std::string&)>;

double want_double(const json& v, const std::string& key) {
  if (!v.is_number())
    throw ConfigError("config field '" + key + "' must be a number");
  return v.get<double>();
}

int want_int(const json& v, const std::string& key) {
  if (!v.is_number_integer())
    throw ConfigError("config field '" + key + "' must be an integer");
  return v.get<int>();
}

std::uint64_t want_u64(const json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !v.is_number_integer())
    throw ConfigError("config field '" + key + "' must be an integer");
  return v.get<std::uint64_t>();
}

std::string want_string(const json& v, const std::string& key) {
  if (!v.is_string())
    throw ConfigError("config field '" + key + "' must be a string");
  return v.get<std::string>();
}

bool want_bool(const json& v, const std::string& key) {
  if (!v.is_boolean())
    throw ConfigError("config field '" + key + "' must be a boolean");
  return v.get<bool>();
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario", [](Config& c, const json& v, const std::string& k) { c.scenario = want_string(v, k); }},
      {"output_dir", [](Config& c, const json& v, const std::string& k) { c.output_dir = want_string(v, k); }},
      {"seed", [](Config& c, const json& v, const std::string& k) { c.seed = want_u64(v, k); }},
      {"flows.n_trajectories", [](Config& c, const json& v, const std::string& k) { c.flows.n_trajectories = want_int(v, k); }},
      {"flows.s_lo", [](Config& c, const json& v, const std::string& k) { c.flows.s_lo = want_double(v, k); }},
      {"flows.s_hi", [](Config& c, const json& v, const std::string& k) { c.flows.s_hi = want_double(v, k); }},
      {"flows.tol", [](Config& c, const json& v, const std::string& k) { c.flows.tol = want_double(v, k); }},
      {"flows.branch", [](Config& c, const json& v, const std::string& k) { c.flows.branch = want_string(v, k); }},
      {"flows.drift_tol", [](Config& c, const json& v, const std::string& k) { c.flows.drift_tol = want_double(v, k); }},
      {"trapping.n_seeds", [](Config& c, const json& v, const std::string& k) { c.trapping.n_seeds = want_int(v, k); }},
      {"trapping.horizon", [](Config& c, const json& v, const std::string& k) { c.trapping.horizon = want_double(v, k); }},
      {"trapping.n_trapped_samples", [](Config& c, const json& v, const std::string& k) { c.trapping.n_trapped_samples = want_int(v, k); }},
      {"trapping.s_max", [](Config& c, const json& v, const std::string& k) { c.trapping.s_max = want_double(v, k); }},
      {"gcc.n_samples", [](Config& c, const json& v, const std::string& k) { c.gcc.n_samples = want_int(v, k); }},
      {"gcc.T", [](Config& c, const json& v, const std::string& k) { c.gcc.T = want_double(v, k); }},
      {"gcc.threshold", [](Config& c, const json& v, const std::string& k) { c.gcc.threshold = want_double(v, k); }},
      {"gcc.s_max_equiv", [](Config& c, const json& v, const std::string& k) { c.gcc.s_max_equiv = want_double(v, k); }},
      {"escape.n_cover", [](Config& c, const json& v, const std::string& k) { c.escape.n_cover = want_int(v, k); }},
      {"escape.n_samples", [](Config& c, const json& v, const std::string& k) { c.escape.n_samples = want_int(v, k); }},
      {"escape.x_max", [](Config& c, const json& v, const std::string& k) { c.escape.x_max = want_double(v, k); }},
      {"escape.xi_hi", [](Config& c, const json& v, const std::string& k) { c.escape.xi_hi = want_double(v, k); }},
      {"decay.L", [](Config& c, const json& v, const std::string& k) { c.decay.L = want_double(v, k); }},
      {"decay.n", [](Config& c, const json& v, const std::string& k) { c.decay.n = want_int(v, k); }},
      {"decay.cfl", [](Config& c, const json& v, const std::string& k) { c.decay.cfl = want_double(v, k); }},
      {"decay.sponge", [](Config& c, const json& v, const std::string& k) { c.decay.sponge = want_bool(v, k); }},
      {"decay.T", [](Config& c, const json& v, const std::string& k) { c.decay.T = want_double(v, k); }},
      {"decay.n_report", [](Config& c, const json& v, const std::string& k) { c.decay.n_report = want_int(v, k); }},
      {"decay.expect", [](Config& c, const json& v, const std::string& k) { c.decay.expect = want_string(v, k); }},
      {"decay.ring_radius", [](Config& c, const json& v, const std::string& k) { c.decay.ring_radius = want_double(v, k); }},
      {"decay.ring_width", [](Config& c, const json& v, const std::string& k) { c.decay.ring_width = want_double(v, k); }},
      {"decay.ring_mode", [](Config& c, const json& v, const std::string& k) { c.decay.ring_mode = want_int(v, k); }},
  };
  return table;
}

void apply(Config& cfg, const std::string& key, const json& value) {
  auto it = setters().find(key);
  if (it == setters().end())
    throw ConfigError("unknown config field '" + key + "'");
  it->second(cfg, value, key);
}

void walk(Config& cfg, const json& node, const std::string& prefix) {
  if (!node.is_object())
    throw ConfigError("config field '" +
                      (prefix.empty() ? std::string("<root>") : prefix) +
                      "' must be an object");
  for (auto it = node.begin(); it != node.end(); ++it) {
    std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it.value().is_object())
      walk(cfg, it.value(), key);
    else
      apply(cfg, key, it.value());
  }
}

void validate(const Config& cfg) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string("config field '") + name +
                                      "' must be positive");
  };
  positive(cfg.flows.tol, "flows.tol");
  positive(cfg.flows.drift_tol, "flows.drift_tol");
  positive(cfg.trapping.horizon, "trapping.horizon");
  positive(cfg.gcc.T, "gcc.T");
  positive(cfg.decay.L, "decay.L");
  positive(cfg.decay.cfl, "decay.cfl");
  if (cfg.flows.branch != "plus" && cfg.flows.branch != "minus" &&
      cfg.flows.branch != "full_p")
    throw ConfigError("config field 'flows.branch' must be plus, minus, or full_p");
  if (cfg.decay.expect != "none" && cfg.decay.expect != "damped" &&
      cfg.decay.expect != "undamped")
    throw ConfigError("config field 'decay.expect' must be none, damped, or undamped");
  if (cfg.decay.n < 8) throw ConfigError("config field 'decay.n' must be >= 8");
}

}  // namespace

Config load_config(const std::string& path,
                   const std::vector<std::string>& overrides) {
  Config cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json root;
    try {
      in >> root;
    } catch (const json::parse_error& e) {
      throw ConfigError("config file '" + path + "': " + e.what());
    }
    walk(cfg, root, "");
  }
  for (const std::string& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override '" + ov + "' is not of the form key=value");
    std::string key = ov.substr(0, eq);
    std::string raw = ov.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;  // bare words are strings
    apply(cfg, key, value);
  }
  validate(cfg);
  return cfg;
}

}  // namespace geoctrl
