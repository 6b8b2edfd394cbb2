#include "cfmimo/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace cfmimo {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 9e15) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return static_cast<long long>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> to_list(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : to_list(v)) out.push_back(to_double(key, item));
  return out;
}

}  // namespace

void SystemConfig::validate() const {
  if (num_ues < 1) throw ConfigError("system.K must be at least 1");
  if (num_aps < num_ues) throw ConfigError("system.M must be at least system.K");
  if (!(bandwidth_hz > 0.0) || !(temperature_k > 0.0) || !(p_bar_w > 0.0) || !(p_u_w > 0.0)) {
    throw ConfigError("bandwidth, temperature and powers must be strictly positive");
  }
  if (!std::isfinite(noise_figure_db)) throw ConfigError("system.noise_figure_db must be finite");
  if (pilot_len != 0 && pilot_len < num_ues) {
    throw ConfigError("system.pilot_len must be at least K for orthogonal pilots");
  }
  if (pilot_snr < 0.0) throw ConfigError("system.pilot_snr must be non-negative");
  if (!(target_se >= 0.0)) throw ConfigError("system.target_se must be non-negative");
  if (!ue_weights.empty()) {
    if (static_cast<int>(ue_weights.size()) != num_ues) {
      throw ConfigError("system.ue_weights must have K entries");
    }
    for (double w : ue_weights) {
      if (!(w > 0.0)) throw ConfigError("system.ue_weights must be positive");
    }
  }
  if (num_realizations < 1) throw ConfigError("system.num_realizations must be at least 1");
}

void Geometry::validate() const {
  if (!(area_side_m > 0.0) || !(ap_height_m > 0.0) || !(ue_height_m > 0.0) ||
      !(ref_distance_m > 0.0)) {
    throw ConfigError("geometry lengths must be positive");
  }
  if (!(pathloss_exponent > 0.0)) throw ConfigError("geometry.pathloss_exponent must be positive");
  if (!(shadowing_sigma_db >= 0.0)) {
    throw ConfigError("geometry.shadowing_sigma_db must be non-negative");
  }
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
    kv[key] = value;
  }
  return kv;
}

ExperimentSpec experiment_from_key_values(const KeyValues& kv) {
  ExperimentSpec spec;
  auto& cfg = spec.cfg;
  auto& geom = spec.geom;
  auto& solver = spec.solver;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto real = [](double& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); };
  };
  auto integer = [](int& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) {
      field = static_cast<int>(to_integer(k, v));
    };
  };
  auto flag = [](bool& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_bool(k, v); };
  };
  auto reals = [](std::vector<double>& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_double_list(k, v); };
  };

  const std::map<std::string, Setter> setters{
      {"system.M", integer(cfg.num_aps)},
      {"system.K", integer(cfg.num_ues)},
      {"system.bandwidth_hz", real(cfg.bandwidth_hz)},
      {"system.temperature_K", real(cfg.temperature_k)},
      {"system.noise_figure_db", real(cfg.noise_figure_db)},
      {"system.p_bar_w", real(cfg.p_bar_w)},
      {"system.p_u_w", real(cfg.p_u_w)},
      {"system.pilot_len", integer(cfg.pilot_len)},
      {"system.pilot_snr", real(cfg.pilot_snr)},
      {"system.target_se", real(cfg.target_se)},
      {"system.ue_weights", reals(cfg.ue_weights)},
      {"system.master_seed",
       [&cfg](const std::string& k, const std::string& v) {
         const long long s = to_integer(k, v);
         if (s < 0) throw ConfigError(k + " must be non-negative");
         cfg.master_seed = static_cast<std::uint64_t>(s);
       }},
      {"system.num_realizations", integer(cfg.num_realizations)},
      {"geometry.area_side_m", real(geom.area_side_m)},
      {"geometry.ap_height_m", real(geom.ap_height_m)},
      {"geometry.ue_height_m", real(geom.ue_height_m)},
      {"geometry.pathloss_exponent", real(geom.pathloss_exponent)},
      {"geometry.pathloss_ref_db", real(geom.pathloss_ref_db)},
      {"geometry.ref_distance_m", real(geom.ref_distance_m)},
      {"geometry.shadowing_sigma_db", real(geom.shadowing_sigma_db)},
      {"geometry.measurement_file",
       [&spec](const std::string&, const std::string& v) { spec.measurement_file = v; }},
      {"solver.bisection_rel_tol", real(solver.bisection_rel_tol)},
      {"solver.fixedpoint_tol", real(solver.fixedpoint_tol)},
      {"solver.fixedpoint_max_iter", integer(solver.fixedpoint_max_iter)},
      {"solver.bisection_max_iter", integer(solver.bisection_max_iter)},
      {"solver.nu_grid_points", integer(solver.nu_grid_points)},
      {"solver.nu_refine_rounds", integer(solver.nu_refine_rounds)},
      {"experiment.algorithms",
       [&spec](const std::string& k, const std::string& v) {
         spec.algorithms.clear();
         for (const auto& name : to_list(v)) spec.algorithms.push_back(parse_algorithm(name));
         if (spec.algorithms.empty()) throw ConfigError(k + " must not be empty");
       }},
      {"experiment.target_se_list", reals(spec.target_se_list)},
      {"experiment.sweep_p_bar_w", reals(spec.sweep_p_bar_w)},
      {"experiment.sweep_p_u_w", reals(spec.sweep_p_u_w)},
      {"experiment.freeze_pilot_snr", flag(spec.freeze_pilot_snr)},
      {"experiment.fixed_ap_positions", flag(spec.fixed_ap_positions)},
      {"experiment.threads", integer(spec.threads)},
  };

  for (const auto& [key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(key, value);
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return experiment_from_key_values(parse_key_values(in));
}

}  // namespace cfmimo
