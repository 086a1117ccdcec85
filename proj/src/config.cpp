#include "ufilter/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ufilter/csv.hpp"
#include "ufilter/errors.hpp"

namespace ufilter {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    try {
      out.push_back(parse_double(cur));
    } catch (const ConfigError&) {
      throw ConfigError(key + ": not a number list: '" + s + "'");
    }
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string join_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

int to_pos_int(const std::string& key, const std::string& v) {
  const long long x = [&] {
    try {
      return parse_int(v);
    } catch (const ConfigError&) {
      throw ConfigError(key + ": not an integer: '" + v + "'");
    }
  }();
  return static_cast<int>(x);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const ConfigError&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
}

}  // namespace

int RunConfig::param_dim() const {
  if (experiment == "sir") return 2;
  if (experiment == "fokker_planck") return 2;
  if (experiment == "lorenz96") return 3;
  if (experiment == "linear_gaussian_oracle") return 1;
  throw ConfigError("experiment.kind: unknown experiment '" + experiment + "'");
}

int RunConfig::state_dim() const {
  if (experiment == "sir") return 3;
  if (experiment == "fokker_planck")
    return static_cast<int>(std::lround((fp_x_max - fp_x_min) / fp_dx));
  if (experiment == "lorenz96") return l96_dim;
  if (experiment == "linear_gaussian_oracle") return 1;
  throw ConfigError("experiment.kind: unknown experiment '" + experiment + "'");
}

RunConfig default_config(const std::string& experiment_kind,
                         const std::string& filter_kind) {
  RunConfig c;
  c.experiment = experiment_kind;
  c.filter = filter_kind;

  if (experiment_kind == "sir") {
    c.steps = 100;
    c.dt = 0.2;
    c.sigma = 0.005 * std::sqrt(0.2);
    c.obs_noise = 0.01;
    c.prior_sd = 0.05;
    c.truth_params = {0.5, 2.0};
    c.ensemble_size = 100;
    c.particle_count = 400;
    c.pseudo_steps = 100;
    c.exploration_std = {0.01, 0.04};
    c.exploration_decay = 0.98;
    c.param_init = {0.5, 2.0};
    c.param_init_spread = {0.5, 2.0};
    c.param_init_kind = "uniform";
    c.fresh_prediction_noise = false;
  } else if (experiment_kind == "fokker_planck") {
    c.steps = 100;
    c.dt = 0.01;
    c.sigma = 0.5 * 0.01;
    c.obs_noise = 0.02;
    c.prior_sd = 0.3;
    c.truth_params = {10.0, 2.0};
    c.ensemble_size = 200;
    c.particle_count = 400;
    c.pseudo_steps = 100;
    c.exploration_std = {0.4, 0.4};
    c.exploration_decay = 0.98;
    c.param_init = {2.0, 10.0};
    c.param_init_spread = {0.5, 0.5};
  } else if (experiment_kind == "lorenz96") {
    c.steps = 50;
    c.dt = 0.02;
    c.sigma = 0.1 * std::sqrt(0.02);
    c.obs_noise = 0.05;
    c.prior_sd = 1.0;
    c.truth_params = {2.0, 5.0, 8.0};
    c.ensemble_size = 200;
    c.particle_count = 1000;
    c.pseudo_steps = 50;
    c.exploration_std = {0.4, 0.4, 0.4};
    c.exploration_decay = 0.97;
    c.param_init = {8.0, 1.0, 1.0};
    c.param_init_spread = {0.5, 0.5, 0.5};
    c.augenkf_size = 1000;
  } else if (experiment_kind == "linear_gaussian_oracle") {
    c.steps = 50;
    c.dt = 1.0;
    c.sigma = 0.1;
    c.obs_noise = 0.2;
    c.prior_sd = 1.0;
    c.truth_params = {0.9};
    c.ensemble_size = 2000;
    c.particle_count = 400;
    c.pseudo_steps = 100;
    c.exploration_std = {0.05};
    c.exploration_decay = 0.98;
    c.param_init = {0.5};
    c.param_init_spread = {0.3};
    c.augenkf_size = 2000;
  } else {
    throw ConfigError("experiment.kind: unknown experiment '" +
                      experiment_kind + "'");
  }
  return c;
}

namespace {

void apply_key(RunConfig& c, const std::string& key, const std::string& value) {
  const bool sir = c.experiment == "sir";
  const bool fp = c.experiment == "fokker_planck";
  const bool l96 = c.experiment == "lorenz96";
  const bool lg = c.experiment == "linear_gaussian_oracle";

  auto wrong_experiment = [&] {
    throw ConfigError("key '" + key + "' does not apply to experiment '" +
                      c.experiment + "'");
  };

  if (key == "experiment.kind" || key == "filter.kind") return;  // pre-read
  if (key == "experiment.steps") { c.steps = to_pos_int(key, value); return; }
  if (key == "experiment.dt") { c.dt = to_double(key, value); return; }
  if (key == "experiment.sigma") { c.sigma = to_double(key, value); return; }
  if (key == "experiment.obs_noise") { c.obs_noise = to_double(key, value); return; }
  if (key == "experiment.prior_sd") { c.prior_sd = to_double(key, value); return; }

  if (key == "experiment.contact_rate") {
    if (!sir) wrong_experiment();
    c.truth_params[0] = to_double(key, value);
    return;
  }
  if (key == "experiment.recovery_rate") {
    if (!sir) wrong_experiment();
    c.truth_params[1] = to_double(key, value);
    return;
  }
  if (key == "experiment.init") {
    if (!sir) wrong_experiment();
    c.sir_init = parse_list(key, value);
    return;
  }
  if (key == "experiment.drift") {
    if (!fp) wrong_experiment();
    c.truth_params[0] = to_double(key, value);
    return;
  }
  if (key == "experiment.diffusion") {
    if (!fp) wrong_experiment();
    c.truth_params[1] = to_double(key, value);
    return;
  }
  if (key == "experiment.dx") { if (!fp) wrong_experiment(); c.fp_dx = to_double(key, value); return; }
  if (key == "experiment.x_min") { if (!fp) wrong_experiment(); c.fp_x_min = to_double(key, value); return; }
  if (key == "experiment.x_max") { if (!fp) wrong_experiment(); c.fp_x_max = to_double(key, value); return; }
  if (key == "experiment.cutoff") { if (!fp) wrong_experiment(); c.fp_cutoff = to_double(key, value); return; }

  if (key == "experiment.advection") { if (!l96) wrong_experiment(); c.truth_params[0] = to_double(key, value); return; }
  if (key == "experiment.damping") { if (!l96) wrong_experiment(); c.truth_params[1] = to_double(key, value); return; }
  if (key == "experiment.forcing") { if (!l96) wrong_experiment(); c.truth_params[2] = to_double(key, value); return; }
  if (key == "experiment.dim") { if (!l96) wrong_experiment(); c.l96_dim = to_pos_int(key, value); return; }
  if (key == "experiment.n_obs") { if (!l96) wrong_experiment(); c.l96_n_obs = to_pos_int(key, value); return; }
  if (key == "experiment.n_arctan") { if (!l96) wrong_experiment(); c.l96_n_arctan = to_pos_int(key, value); return; }
  if (key == "experiment.truth_init_sd") { if (!l96) wrong_experiment(); c.l96_truth_init_sd = to_double(key, value); return; }

  if (key == "experiment.coefficient") { if (!lg) wrong_experiment(); c.truth_params[0] = to_double(key, value); return; }
  if (key == "experiment.init_mean") { if (!lg) wrong_experiment(); c.lg_init_mean = to_double(key, value); return; }
  if (key == "experiment.init_sd") { if (!lg) wrong_experiment(); c.lg_init_sd = to_double(key, value); return; }

  if (key == "filter.ensemble_size") { c.ensemble_size = to_pos_int(key, value); return; }
  if (key == "filter.particles") { c.particle_count = to_pos_int(key, value); return; }
  if (key == "filter.iterations") { c.iterations = to_pos_int(key, value); return; }
  if (key == "filter.minibatch") { c.minibatch = to_pos_int(key, value); return; }
  if (key == "filter.pseudo_steps") { c.pseudo_steps = to_pos_int(key, value); return; }
  if (key == "filter.t_min") { c.t_min = to_double(key, value); return; }
  if (key == "filter.exploration_std") { c.exploration_std = parse_list(key, value); return; }
  if (key == "filter.exploration_decay") { c.exploration_decay = to_double(key, value); return; }
  if (key == "filter.param_init") { c.param_init = parse_list(key, value); return; }
  if (key == "filter.param_init_spread") { c.param_init_spread = parse_list(key, value); return; }
  if (key == "filter.param_init_kind") { c.param_init_kind = value; return; }
  if (key == "filter.fresh_prediction_noise") {
    try {
      c.fresh_prediction_noise = parse_bool(value);
    } catch (const ConfigError&) {
      throw ConfigError(key + ": not a boolean: '" + value + "'");
    }
    return;
  }
  if (key == "filter.augenkf_size") { c.augenkf_size = to_pos_int(key, value); return; }
  if (key == "filter.inflation") { c.inflation = to_double(key, value); return; }
  if (key == "filter.fixed_params") { c.fixed_params = parse_list(key, value); return; }

  if (key == "run.n_repeats") { c.n_repeats = to_pos_int(key, value); return; }
  if (key == "run.master_seed") {
    try {
      c.master_seed = parse_uint(value);
    } catch (const ConfigError&) {
      throw ConfigError(key + ": not an unsigned integer: '" + value + "'");
    }
    return;
  }
  if (key == "run.threads") { c.threads = to_pos_int(key, value); return; }
  if (key == "output.dir") { c.output_dir = value; return; }

  throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::map<std::string, int> seen;

  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (key.rfind("info.", 0) == 0) continue;  // manifest metadata
    if (seen.count(key))
      throw ConfigError("duplicate key '" + key + "' (lines " +
                        std::to_string(seen[key]) + " and " +
                        std::to_string(line_no) + ")");
    seen[key] = line_no;
    pairs.emplace_back(std::move(key), std::move(value));
  }

  std::string experiment, filter;
  for (const auto& [k, v] : pairs) {
    if (k == "experiment.kind") experiment = v;
    if (k == "filter.kind") filter = v;
  }
  if (experiment.empty()) throw ConfigError("missing required key 'experiment.kind'");
  if (filter.empty()) throw ConfigError("missing required key 'filter.kind'");

  RunConfig c = default_config(experiment, filter);
  for (const auto& [k, v] : pairs) apply_key(c, k, v);
  validate_config(c);
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const RunConfig& c) {
  if (c.experiment != "sir" && c.experiment != "fokker_planck" &&
      c.experiment != "lorenz96" && c.experiment != "linear_gaussian_oracle")
    throw ConfigError("experiment.kind: unknown experiment '" + c.experiment + "'");
  if (c.filter != "united" && c.filter != "augenkf" &&
      c.filter != "ensf_fixed_param")
    throw ConfigError("filter.kind: unknown filter '" + c.filter + "'");

  const int l = c.param_dim();
  auto check_len = [&](const std::vector<double>& v, const std::string& key) {
    if (static_cast<int>(v.size()) != l)
      throw ConfigError(key + ": expected " + std::to_string(l) +
                        " values, got " + std::to_string(v.size()));
  };

  if (c.steps < 1) throw ConfigError("experiment.steps: must be >= 1");
  if (!(c.dt > 0)) throw ConfigError("experiment.dt: must be > 0");
  if (c.sigma < 0) throw ConfigError("experiment.sigma: must be >= 0");
  if (!(c.obs_noise > 0)) throw ConfigError("experiment.obs_noise: must be > 0");
  if (c.prior_sd < 0) throw ConfigError("experiment.prior_sd: must be >= 0");

  if (c.experiment == "sir" && c.sir_init.size() != 3)
    throw ConfigError("experiment.init: expected 3 values");
  if (c.experiment == "fokker_planck") {
    if (!(c.fp_dx > 0)) throw ConfigError("experiment.dx: must be > 0");
    const double cells = (c.fp_x_max - c.fp_x_min) / c.fp_dx;
    if (!(cells >= 3) || std::abs(cells - std::lround(cells)) > 1e-9)
      throw ConfigError("experiment.dx: grid must divide the domain");
  }
  if (c.experiment == "lorenz96") {
    if (c.l96_dim < 4) throw ConfigError("experiment.dim: must be >= 4");
    if (c.l96_n_obs < 1 || c.l96_n_obs > c.l96_dim)
      throw ConfigError("experiment.n_obs: must lie in [1, dim]");
    if (c.l96_n_arctan < 0 || c.l96_n_arctan > c.l96_n_obs)
      throw ConfigError("experiment.n_arctan: must lie in [0, n_obs]");
  }

  if (c.ensemble_size < 1) throw ConfigError("filter.ensemble_size: must be >= 1");
  if (c.particle_count < 1) throw ConfigError("filter.particles: must be >= 1");
  if (c.iterations < 1) throw ConfigError("filter.iterations: must be >= 1");
  if (c.minibatch < 0 || c.minibatch > c.ensemble_size)
    throw ConfigError("filter.minibatch: must lie in [0, ensemble_size]");
  if (c.pseudo_steps < 1) throw ConfigError("filter.pseudo_steps: must be >= 1");
  if (!(c.t_min > 0 && c.t_min < 1))
    throw ConfigError("filter.t_min: must lie in (0, 1)");
  if (!(c.exploration_decay > 0 && c.exploration_decay <= 1))
    throw ConfigError("filter.exploration_decay: must lie in (0, 1]");
  if (c.param_init_kind != "normal" && c.param_init_kind != "uniform")
    throw ConfigError("filter.param_init_kind: must be 'normal' or 'uniform'");
  if (c.augenkf_size < 2) throw ConfigError("filter.augenkf_size: must be >= 2");
  if (!(c.inflation > 0)) throw ConfigError("filter.inflation: must be > 0");

  check_len(c.exploration_std, "filter.exploration_std");
  check_len(c.param_init, "filter.param_init");
  check_len(c.param_init_spread, "filter.param_init_spread");
  if (!c.fixed_params.empty()) check_len(c.fixed_params, "filter.fixed_params");
  if (static_cast<int>(c.truth_params.size()) != l)
    throw ConfigError("experiment truth parameters: wrong count");

  if (c.n_repeats < 1) throw ConfigError("run.n_repeats: must be >= 1");
  if (c.threads < 0) throw ConfigError("run.threads: must be >= 0");
  if (c.output_dir.empty()) throw ConfigError("output.dir: must be non-empty");
}

std::string manifest_text(const RunConfig& c) {
  std::ostringstream out;
  auto kv = [&](const std::string& k, const std::string& v) {
    out << k << " = " << v << "\n";
  };

  kv("experiment.kind", c.experiment);
  kv("experiment.steps", format_int(c.steps));
  kv("experiment.dt", format_double(c.dt));
  kv("experiment.sigma", format_double(c.sigma));
  kv("experiment.obs_noise", format_double(c.obs_noise));
  kv("experiment.prior_sd", format_double(c.prior_sd));
  if (c.experiment == "sir") {
    kv("experiment.contact_rate", format_double(c.truth_params[0]));
    kv("experiment.recovery_rate", format_double(c.truth_params[1]));
    kv("experiment.init", join_list(c.sir_init));
  } else if (c.experiment == "fokker_planck") {
    kv("experiment.drift", format_double(c.truth_params[0]));
    kv("experiment.diffusion", format_double(c.truth_params[1]));
    kv("experiment.dx", format_double(c.fp_dx));
    kv("experiment.x_min", format_double(c.fp_x_min));
    kv("experiment.x_max", format_double(c.fp_x_max));
    kv("experiment.cutoff", format_double(c.fp_cutoff));
  } else if (c.experiment == "lorenz96") {
    kv("experiment.advection", format_double(c.truth_params[0]));
    kv("experiment.damping", format_double(c.truth_params[1]));
    kv("experiment.forcing", format_double(c.truth_params[2]));
    kv("experiment.dim", format_int(c.l96_dim));
    kv("experiment.n_obs", format_int(c.l96_n_obs));
    kv("experiment.n_arctan", format_int(c.l96_n_arctan));
    kv("experiment.truth_init_sd", format_double(c.l96_truth_init_sd));
  } else if (c.experiment == "linear_gaussian_oracle") {
    kv("experiment.coefficient", format_double(c.truth_params[0]));
    kv("experiment.init_mean", format_double(c.lg_init_mean));
    kv("experiment.init_sd", format_double(c.lg_init_sd));
  }

  kv("filter.kind", c.filter);
  kv("filter.ensemble_size", format_int(c.ensemble_size));
  kv("filter.particles", format_int(c.particle_count));
  kv("filter.iterations", format_int(c.iterations));
  kv("filter.minibatch", format_int(c.minibatch));
  kv("filter.pseudo_steps", format_int(c.pseudo_steps));
  kv("filter.t_min", format_double(c.t_min));
  kv("filter.exploration_std", join_list(c.exploration_std));
  kv("filter.exploration_decay", format_double(c.exploration_decay));
  kv("filter.param_init", join_list(c.param_init));
  kv("filter.param_init_spread", join_list(c.param_init_spread));
  kv("filter.param_init_kind", c.param_init_kind);
  kv("filter.fresh_prediction_noise", c.fresh_prediction_noise ? "true" : "false");
  kv("filter.augenkf_size", format_int(c.augenkf_size));
  kv("filter.inflation", format_double(c.inflation));
  if (!c.fixed_params.empty()) kv("filter.fixed_params", join_list(c.fixed_params));

  kv("run.n_repeats", format_int(c.n_repeats));
  kv("run.master_seed", format_uint(c.master_seed));
  kv("run.threads", format_int(c.threads));
  kv("output.dir", c.output_dir);
  return out.str();
}

}  // namespace ufilter
