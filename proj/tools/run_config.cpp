#include "run_config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cylcs/custom_density.hpp"
#include "cylcs/errors.hpp"

namespace cylcs::cli {

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"distributions",
       {{"dist", [](RunConfig& c, auto&, auto& v) { c.dist = v; }},
        {"sigma", [](RunConfig& c, auto& k, auto& v) { c.sigma = to_double(k, v); }},
        {"custom_file", [](RunConfig& c, auto&, auto& v) { c.custom_file = v; }},
        {"allow_sigma_out_of_range", [](RunConfig& c, auto& k, auto& v) { c.allow_sigma_out_of_range = to_bool(k, v); }},
        {"sigma_sweep", [](RunConfig& c, auto&, auto& v) { c.sigma_sweep = parse_list(v); }},
        {"index_cutoff", [](RunConfig& c, auto& k, auto& v) { c.index_cutoff = to_int(k, v); }}}},
      {"cs-core",
       {{"trunc", [](RunConfig& c, auto& k, auto& v) { c.trunc = to_int(k, v); }},
        {"J0", [](RunConfig& c, auto& k, auto& v) { c.J0 = to_double(k, v); }},
        {"phi0", [](RunConfig& c, auto& k, auto& v) { c.phi0 = to_double(k, v); }}}},
      {"quantizer",
       {{"tol", [](RunConfig& c, auto& k, auto& v) { c.tol = to_double(k, v); }},
        {"observable", [](RunConfig& c, auto&, auto& v) { c.observable_file = v; }},
        {"builtin", [](RunConfig& c, auto&, auto& v) { c.builtin = v; }},
        {"lambda", [](RunConfig& c, auto& k, auto& v) { c.lambda = to_double(k, v); }},
        {"generic", [](RunConfig& c, auto& k, auto& v) { c.generic = to_bool(k, v); }}}},
      {"symbols",
       {{"operator", [](RunConfig& c, auto&, auto& v) { c.operator_file = v; }},
        {"M", [](RunConfig& c, auto& k, auto& v) { c.M = to_int(k, v); }},
        {"C", [](RunConfig& c, auto& k, auto& v) { c.C = to_double(k, v); }}}},
      {"dynamics",
       {{"hamiltonian", [](RunConfig& c, auto&, auto& v) { c.hamiltonian = v; }},
        {"times", [](RunConfig& c, auto&, auto& v) { c.times = parse_list(v); }},
        {"track", [](RunConfig& c, auto&, auto& v) { c.track = v; }}}},
      {"grid",
       {{"J_min", [](RunConfig& c, auto& k, auto& v) { c.grid_J_min = to_double(k, v); c.grid_J_given = true; }},
        {"J_max", [](RunConfig& c, auto& k, auto& v) { c.grid_J_max = to_double(k, v); c.grid_J_given = true; }},
        {"J_steps", [](RunConfig& c, auto& k, auto& v) { c.grid_J_steps = to_int(k, v); }},
        {"phi_steps", [](RunConfig& c, auto& k, auto& v) { c.grid_phi_steps = to_int(k, v); }}}},
      {"cli",
       {{"out", [](RunConfig& c, auto&, auto& v) { c.out = v; }},
        {"format", [](RunConfig& c, auto&, auto& v) { c.format = v; }}}},
  };
  return table;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(to_double("list", item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError("config: empty list '" + text + "'");
  return out;
}

void RunConfig::validate() const {
  if (dist != "gaussian" && dist != "uniform" && dist != "custom")
    throw ConfigError("unknown --dist '" + dist + "' (gaussian, uniform, custom)");
  if (!(sigma > 0) || !std::isfinite(sigma)) throw ConfigError("--sigma must be a positive number");
  if (dist == "custom" && custom_file.empty()) throw ConfigError("--dist custom needs --custom-file");
  if (trunc < 1) throw ConfigError("--trunc must be >= 1");
  if (!(tol > 0)) throw ConfigError("--tol must be > 0");
  if (index_cutoff < 1) throw ConfigError("--index-cutoff must be >= 1");
  if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
  if (grid_J_steps < 1 || grid_phi_steps < 1) throw ConfigError("grid step counts must be >= 1");
  if (!(grid_J_max >= grid_J_min)) throw ConfigError("grid: J_max must be >= J_min");
}

PhaseGrid RunConfig::grid() const { return PhaseGrid{grid_J_min, grid_J_max, grid_J_steps, grid_phi_steps}; }

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const auto& table = setters();
  for (const auto& [section, entries] : tree) {
    auto sec = table.find(section);
    if (sec == table.end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, node] : entries) {
      auto it = sec->second.find(key);
      if (it == sec->second.end()) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      it->second(cfg, key, node.get_value<std::string>());
    }
  }
}

ActionDistribution make_distribution(const RunConfig& cfg) {
  if (cfg.dist == "gaussian") return ActionDistribution::gaussian(cfg.sigma);
  if (cfg.dist == "uniform") return ActionDistribution::uniform(cfg.sigma, cfg.allow_sigma_out_of_range);
  if (cfg.dist == "custom") return ActionDistribution::custom(make_shape(load_sampled_density(cfg.custom_file)), cfg.sigma);
  throw ConfigError("unknown distribution '" + cfg.dist + "'");
}

ObservableSpec builtin_observable(const std::string& name, double lambda, int saw_harmonics) {
  if (name == "J") return ObservableSpec::action();
  if (name == "J2") return ObservableSpec::action_squared();
  if (name == "exp+") return ObservableSpec::harmonic(1);
  if (name == "exp-") return ObservableSpec::harmonic(-1);
  if (name == "cos") return ObservableSpec::cosine(lambda);
  if (name == "sin") return ObservableSpec::sine(lambda);
  if (name == "saw") return ObservableSpec::saw(saw_harmonics);
  if (name == "one") return ObservableSpec::constant(1.0);
  throw ConfigError("unknown builtin observable '" + name + "' (J, J2, exp+, exp-, cos, sin, saw, one, angle)");
}

ObservableSpec resolve_observable(const RunConfig& cfg) {
  if (!cfg.observable_file.empty() && !cfg.builtin.empty())
    throw ConfigError("give either --observable or --builtin, not both");
  if (!cfg.observable_file.empty()) return load_observable(cfg.observable_file);
  if (!cfg.builtin.empty()) return builtin_observable(cfg.builtin, cfg.lambda, cfg.M >= 0 ? cfg.M : 2 * cfg.trunc);
  throw ConfigError("no observable: pass --observable FILE or --builtin NAME");
}

TruncatedOperator build_operator(const ActionDistribution& dist, const RunConfig& cfg) {
  if (cfg.builtin == "angle" && cfg.observable_file.empty()) return angle_operator(dist, cfg.trunc);
  const QuantizeOptions opt{cfg.generic ? QuantizeMethod::generic : QuantizeMethod::automatic, cfg.tol,
                            Exec::parallel};
  return quantize(dist, resolve_observable(cfg), cfg.trunc, opt);
}

}  // namespace cylcs::cli
