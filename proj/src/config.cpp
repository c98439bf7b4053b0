#include "cclab/config.hpp"

#include <fstream>

namespace cclab {

using nlohmann::json;

void PotentialMatrix::validate() const {
  PotentialSpec probe{sphere_degree, torus_kmax, amplitude, seed};
  probe.validate();
  if (count < 1) throw ConfigError("potentials.count must be >= 1");
}

void RunConfig::validate() const {
  grid.validate();
  potentials.validate();
}

double RunConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

namespace {

void reject_unknown(const json& j, const char* scope,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(scope) + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) known = true;
    if (!known) throw ConfigError(std::string("unknown key in ") + scope + ": " + item.key());
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

} // namespace

RunConfig parse_run_config(const json& j) {
  reject_unknown(j, "config",
                 {"grid", "class", "potentials", "convention", "tolerances", "output_dir"});
  RunConfig cfg;
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, "grid", {"n_theta", "n_phi", "n_x", "n_y"});
    read_field(g, "n_theta", cfg.grid.n_theta);
    read_field(g, "n_phi", cfg.grid.n_phi);
    read_field(g, "n_x", cfg.grid.n_x);
    read_field(g, "n_y", cfg.grid.n_y);
  }
  if (j.contains("class")) {
    const json& c = j.at("class");
    reject_unknown(c, "class", {"a", "b"});
    read_field(c, "a", cfg.cls.a);
    read_field(c, "b", cfg.cls.b);
  }
  if (j.contains("potentials")) {
    const json& p = j.at("potentials");
    reject_unknown(p, "potentials", {"sphere_degree", "torus_kmax", "amplitude", "seed", "count"});
    read_field(p, "sphere_degree", cfg.potentials.sphere_degree);
    read_field(p, "torus_kmax", cfg.potentials.torus_kmax);
    read_field(p, "amplitude", cfg.potentials.amplitude);
    read_field(p, "seed", cfg.potentials.seed);
    read_field(p, "count", cfg.potentials.count);
  }
  if (j.contains("convention")) cfg.convention = convention_from_name(j.at("convention").get<std::string>());
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances must be a JSON object");
    for (const auto& item : t.items()) {
      if (!item.value().is_number())
        throw ConfigError("tolerance " + item.key() + " must be a number");
      cfg.tolerances[item.key()] = item.value().get<double>();
    }
  }
  read_field(j, "output_dir", cfg.output_dir);
  cfg.validate();
  return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
  json j;
  j["grid"] = {{"n_theta", cfg.grid.n_theta},
               {"n_phi", cfg.grid.n_phi},
               {"n_x", cfg.grid.n_x},
               {"n_y", cfg.grid.n_y}};
  j["class"] = {{"a", cfg.cls.a}, {"b", cfg.cls.b}};
  j["potentials"] = {{"sphere_degree", cfg.potentials.sphere_degree},
                     {"torus_kmax", cfg.potentials.torus_kmax},
                     {"amplitude", cfg.potentials.amplitude},
                     {"seed", cfg.potentials.seed},
                     {"count", cfg.potentials.count}};
  j["convention"] = convention_name(cfg.convention);
  j["tolerances"] = json::object();
  for (const auto& [name, value] : cfg.tolerances) j["tolerances"][name] = value;
  j["output_dir"] = cfg.output_dir;
  return j;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_run_config(j);
}

ExperimentConfig experiment_config(const RunConfig& cfg) {
  ExperimentConfig out;
  out.cls = cfg.cls;
  out.grid = cfg.grid;
  out.convention = cfg.convention;
  const PotentialMatrix& m = cfg.potentials;
  std::vector<double> amplitudes;
  if (m.amplitude == 0.0)
    amplitudes = {0.0};
  else
    amplitudes = {0.5 * m.amplitude, m.amplitude};
  for (int i = 0; i < m.count; ++i)
    for (double amp : amplitudes)
      out.potential_specs.push_back(
          PotentialSpec{m.sphere_degree, m.torus_kmax, amp, m.seed + static_cast<std::uint64_t>(i)});
  return out;
}

} // namespace cclab
