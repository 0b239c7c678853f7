#include "mfe/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mfe {

using nlohmann::json;

std::vector<double> SweepRange::values() const {
  if (steps < 1) throw InvalidArgumentError("sweep range: steps must be >= 1");
  std::vector<double> out;
  out.reserve(steps);
  if (steps == 1) {
    out.push_back(lo);
    return out;
  }
  for (int k = 0; k < steps; ++k) out.push_back(lo + k * (hi - lo) / (steps - 1));
  return out;
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) known = true;
    if (!known)
      throw InvalidArgumentError("config: unknown key '" + item.key() + "' in " + where);
  }
}

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw InvalidArgumentError("config: " + where + " needs numeric '" + key + "'");
  return obj[key].get<double>();
}

SweepRange parse_range(const json& arr, const char* name) {
  if (!arr.is_array() || arr.size() != 3 || !arr[0].is_number() || !arr[1].is_number() ||
      !arr[2].is_number_integer())
    throw InvalidArgumentError(std::string("config: sweep '") + name +
                               "' must be [lo, hi, steps]");
  SweepRange r;
  r.lo = arr[0].get<double>();
  r.hi = arr[1].get<double>();
  r.steps = arr[2].get<int>();
  if (r.steps < 1)
    throw InvalidArgumentError(std::string("config: sweep '") + name + "' has no points");
  return r;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgumentError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw InvalidArgumentError("config: top level must be an object");
  reject_unknown_keys(root,
                      {"grid", "weight", "params", "sweep", "solver", "out", "formats", "jobs"},
                      "top level");

  RunConfig cfg;
  if (root.contains("grid")) {
    const json& g = root["grid"];
    reject_unknown_keys(g, {"L", "N"}, "grid");
    GridConfig gc;
    gc.length = require_number(g, "L", "grid");
    if (!g.contains("N") || !g["N"].is_number_integer())
      throw InvalidArgumentError("config: grid needs integer 'N'");
    gc.n = g["N"].get<int>();
    cfg.grid = gc;
  }
  if (root.contains("weight")) {
    if (!root["weight"].is_string())
      throw InvalidArgumentError("config: 'weight' must be a string");
    cfg.weight = root["weight"].get<std::string>();
  }
  if (root.contains("params")) {
    const json& p = root["params"];
    reject_unknown_keys(p, {"alpha1", "alpha2"}, "params");
    InteractionParams ip;
    ip.alpha1 = require_number(p, "alpha1", "params");
    ip.alpha2 = require_number(p, "alpha2", "params");
    ip.validate();
    cfg.params = ip;
  }
  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    reject_unknown_keys(s, {"alpha1", "alpha2"}, "sweep");
    if (!s.contains("alpha1") || !s.contains("alpha2"))
      throw InvalidArgumentError("config: sweep needs 'alpha1' and 'alpha2' ranges");
    SweepConfig sc;
    sc.alpha1 = parse_range(s["alpha1"], "alpha1");
    sc.alpha2 = parse_range(s["alpha2"], "alpha2");
    cfg.sweep = sc;
  }
  if (cfg.params && cfg.sweep)
    throw InvalidArgumentError("config: 'params' and 'sweep' are mutually exclusive");
  if (root.contains("solver")) {
    const json& s = root["solver"];
    reject_unknown_keys(s,
                        {"path_nodes", "max_outer_iters", "residual_tol", "initial_step",
                         "step_shrink", "sufficient_decrease", "endpoint_scaling_budget",
                         "reparametrize_every", "seed", "stall_window", "stall_rel_tol"},
                        "solver");
    SolverConfig& sv = cfg.solver;
    if (s.contains("path_nodes")) sv.path_nodes = s["path_nodes"].get<int>();
    if (s.contains("max_outer_iters")) sv.max_outer_iters = s["max_outer_iters"].get<int>();
    if (s.contains("residual_tol")) sv.residual_tol = s["residual_tol"].get<double>();
    if (s.contains("initial_step")) sv.initial_step = s["initial_step"].get<double>();
    if (s.contains("step_shrink")) sv.step_shrink = s["step_shrink"].get<double>();
    if (s.contains("sufficient_decrease"))
      sv.sufficient_decrease = s["sufficient_decrease"].get<double>();
    if (s.contains("endpoint_scaling_budget"))
      sv.endpoint_scaling_budget = s["endpoint_scaling_budget"].get<int>();
    if (s.contains("reparametrize_every"))
      sv.reparametrize_every = s["reparametrize_every"].get<int>();
    if (s.contains("seed")) sv.rng_seed = s["seed"].get<unsigned long long>();
    if (s.contains("stall_window")) sv.stall_window = s["stall_window"].get<int>();
    if (s.contains("stall_rel_tol")) sv.stall_rel_tol = s["stall_rel_tol"].get<double>();
    sv.validate();
  }
  if (root.contains("out")) {
    if (!root["out"].is_string()) throw InvalidArgumentError("config: 'out' must be a string");
    cfg.out_dir = root["out"].get<std::string>();
  }
  if (root.contains("formats")) {
    const json& f = root["formats"];
    if (!f.is_array()) throw InvalidArgumentError("config: 'formats' must be an array");
    cfg.formats.clear();
    for (const auto& item : f) {
      if (!item.is_string()) throw InvalidArgumentError("config: formats entries are strings");
      const std::string fmt = item.get<std::string>();
      if (fmt != "field" && fmt != "json" && fmt != "csv")
        throw InvalidArgumentError("config: unknown format '" + fmt + "'");
      cfg.formats.push_back(fmt);
    }
  }
  if (root.contains("jobs")) {
    if (!root["jobs"].is_number_integer() || root["jobs"].get<int>() < 0)
      throw InvalidArgumentError("config: 'jobs' must be a nonnegative integer");
    cfg.jobs = root["jobs"].get<int>();
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

WeightField resolve_weight(const TorusGrid& grid, const std::string& spec) {
  if (is_weight_preset(spec)) return make_weight_preset(grid, spec);
  ScalarField rho = read_field(spec);
  if (rho.grid() != grid)
    throw InvalidArgumentError("weight file '" + spec + "' grid does not match run grid");
  return WeightField(std::move(rho));
}

}  // namespace mfe
