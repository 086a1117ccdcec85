#include "ufilter/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ufilter/augenkf.hpp"
#include "ufilter/csv.hpp"
#include "ufilter/errors.hpp"
#include "ufilter/metrics.hpp"
#include "ufilter/models/fokker_planck.hpp"
#include "ufilter/models/linear_gaussian.hpp"
#include "ufilter/models/lorenz96.hpp"
#include "ufilter/models/sir.hpp"

namespace ufilter {
namespace {

namespace fs = std::filesystem;

struct Problem {
  DynamicsModel model;
  ObservationProvider obs_provider;
  std::vector<Eigen::VectorXd> truth_states;
  std::vector<Eigen::VectorXd> observations;
  std::string mask_info;  // info.* manifest lines for sampled masks
};

Problem build_problem(const RunConfig& cfg, std::uint64_t repeat_seed,
                      int repeat_index) {
  Problem p;
  if (cfg.experiment == "sir") {
    models::SirConfig mc;
    mc.contact_rate = cfg.truth_params[0];
    mc.recovery_rate = cfg.truth_params[1];
    mc.dt = cfg.dt;
    mc.sigma = cfg.sigma;
    mc.obs_noise_std = cfg.obs_noise;
    mc.steps = cfg.steps;
    mc.init = Eigen::Vector3d(cfg.sir_init[0], cfg.sir_init[1], cfg.sir_init[2]);
    p.model = models::sir_dynamics(mc);
    p.obs_provider = fixed_observation(models::sir_observation(mc));
    TruthRun truth = models::simulate_sir_truth(mc, repeat_seed);
    p.truth_states = std::move(truth.states);
    p.observations = std::move(truth.observations);
  } else if (cfg.experiment == "fokker_planck") {
    models::FokkerPlanckConfig mc;
    mc.drift = cfg.truth_params[0];
    mc.diffusion = cfg.truth_params[1];
    mc.x_min = cfg.fp_x_min;
    mc.x_max = cfg.fp_x_max;
    mc.dx = cfg.fp_dx;
    mc.dt = cfg.dt;
    mc.steps = cfg.steps;
    mc.sigma = cfg.sigma;
    mc.obs_noise_std = cfg.obs_noise;
    mc.cutoff = cfg.fp_cutoff;
    p.model = models::fp_dynamics(mc);
    p.obs_provider = fixed_observation(models::fp_observation(mc));
    TruthRun truth = models::simulate_fp_truth(mc, repeat_seed);
    p.truth_states = std::move(truth.states);
    p.observations = std::move(truth.observations);
  } else if (cfg.experiment == "lorenz96") {
    models::Lorenz96Config mc;
    mc.advection = cfg.truth_params[0];
    mc.damping = cfg.truth_params[1];
    mc.forcing = cfg.truth_params[2];
    mc.dim = cfg.l96_dim;
    mc.dt = cfg.dt;
    mc.steps = cfg.steps;
    mc.sigma = cfg.sigma;
    mc.n_obs = cfg.l96_n_obs;
    mc.n_arctan = cfg.l96_n_arctan;
    mc.obs_noise_std = cfg.obs_noise;
    mc.truth_init_sd = cfg.l96_truth_init_sd;
    p.model = models::lorenz96_dynamics(mc);
    models::Lorenz96Truth truth = models::simulate_lorenz96_truth(mc, repeat_seed);
    p.truth_states = std::move(truth.states);
    p.observations = std::move(truth.observations);

    std::ostringstream info;
    for (std::size_t n = 0; n < truth.masks.size(); ++n) {
      const auto& mask = truth.masks[n];
      info << "info.repeat" << repeat_index << ".mask.step" << n << " = ";
      for (std::size_t j = 0; j < mask.indices.size(); ++j)
        info << (j ? "," : "") << mask.indices[j];
      info << "\ninfo.repeat" << repeat_index << ".arctan.step" << n << " = ";
      bool first = true;
      for (std::size_t j = 0; j < mask.indices.size(); ++j)
        if (mask.arctan[j]) {
          info << (first ? "" : ",") << mask.indices[j];
          first = false;
        }
      info << "\n";
    }
    p.mask_info = info.str();

    const double obs_std = cfg.obs_noise;
    const Eigen::Index dim = cfg.l96_dim;
    auto masks = std::make_shared<std::vector<models::ObservationMask>>(
        std::move(truth.masks));
    p.obs_provider = [masks, obs_std, dim](int step) {
      return models::lorenz96_observation(masks->at(step), obs_std, dim);
    };
  } else {  // linear_gaussian_oracle
    models::LinearGaussianConfig mc;
    mc.coefficient = cfg.truth_params[0];
    mc.process_std = cfg.sigma;
    mc.obs_noise_std = cfg.obs_noise;
    mc.steps = cfg.steps;
    mc.init_mean = cfg.lg_init_mean;
    mc.init_sd = cfg.lg_init_sd;
    p.model = models::linear_gaussian_dynamics(mc);
    p.obs_provider = fixed_observation(models::linear_gaussian_observation(mc));
    TruthRun truth = models::simulate_linear_gaussian_truth(mc, repeat_seed);
    p.truth_states = std::move(truth.states);
    p.observations = std::move(truth.observations);
  }
  return p;
}

StateEnsemble draw_initial_ensemble(const RunConfig& cfg,
                                    const Eigen::VectorXd& truth0, int count,
                                    std::uint64_t repeat_seed) {
  RngStream rng = make_stream(repeat_seed, StreamId::kInitEnsemble);
  const Eigen::Index d = truth0.size();
  Eigen::MatrixXd samples(d, count);
  if (cfg.experiment == "linear_gaussian_oracle") {
    // matches the exact filter's prior N(init_mean, init_sd^2)
    for (int j = 0; j < count; ++j)
      samples.col(j) = Eigen::VectorXd::Constant(
          1, cfg.lg_init_mean + cfg.lg_init_sd * rng.normal());
  } else {
    for (int j = 0; j < count; ++j)
      samples.col(j) = truth0 + cfg.prior_sd * rng.normal_vector(d);
  }
  return StateEnsemble{std::move(samples)};
}

ParameterCloud draw_initial_cloud(const RunConfig& cfg, int count,
                                  std::uint64_t repeat_seed) {
  RngStream rng = make_stream(repeat_seed, StreamId::kInitCloud);
  const int l = cfg.param_dim();
  Eigen::MatrixXd particles(l, count);
  for (int k = 0; k < count; ++k)
    for (int i = 0; i < l; ++i) {
      if (cfg.param_init_kind == "uniform")
        particles(i, k) = cfg.param_init[i] +
                          cfg.param_init_spread[i] * (2.0 * rng.uniform() - 1.0);
      else
        particles(i, k) = cfg.param_init[i] +
                          cfg.param_init_spread[i] * rng.normal();
    }
  return ParameterCloud{std::move(particles)};
}

ExplorationNoise exploration_from(const RunConfig& cfg) {
  const int l = cfg.param_dim();
  Eigen::VectorXd var(l);
  for (int i = 0; i < l; ++i)
    var[i] = cfg.exploration_std[i] * cfg.exploration_std[i];
  return ExplorationNoise{var.asDiagonal().toDenseMatrix(),
                          cfg.exploration_decay};
}

UnitedFilterConfig united_config(const RunConfig& cfg, std::uint64_t seed) {
  UnitedFilterConfig u;
  u.ensemble_size = cfg.ensemble_size;
  u.particle_count = cfg.particle_count;
  u.iterations = cfg.iterations;
  u.minibatch = cfg.minibatch;
  u.schedule = NoiseSchedule{cfg.t_min, cfg.pseudo_steps};
  u.exploration = exploration_from(cfg);
  u.seed = seed;
  u.fresh_prediction_noise = cfg.fresh_prediction_noise;
  return u;
}

}  // namespace

RepeatResult run_repeat(const RunConfig& cfg, int repeat_index) {
  const std::uint64_t repeat_seed =
      substream_seed(cfg.master_seed, StreamId::kRepeat,
                     static_cast<std::uint64_t>(repeat_index));
  Problem p = build_problem(cfg, repeat_seed, repeat_index);

  RepeatResult out;
  out.truth_states = p.truth_states;
  out.mask_manifest = std::move(p.mask_info);

  AssimilationRecord record;
  try {
    if (cfg.filter == "united") {
      StateEnsemble init = draw_initial_ensemble(cfg, p.truth_states.front(),
                                                 cfg.ensemble_size, repeat_seed);
      ParameterCloud cloud =
          draw_initial_cloud(cfg, cfg.particle_count, repeat_seed);
      record = run(p.model, p.obs_provider, p.observations, init, cloud,
                   united_config(cfg, repeat_seed));
    } else if (cfg.filter == "ensf_fixed_param") {
      StateEnsemble init = draw_initial_ensemble(cfg, p.truth_states.front(),
                                                 cfg.ensemble_size, repeat_seed);
      Eigen::VectorXd params = Eigen::Map<const Eigen::VectorXd>(
          (cfg.fixed_params.empty() ? cfg.truth_params : cfg.fixed_params).data(),
          cfg.param_dim());
      record = run_fixed_param(p.model, p.obs_provider, p.observations, init,
                               params, united_config(cfg, repeat_seed));
    } else {  // augenkf
      const int N = cfg.augenkf_size;
      StateEnsemble init_states =
          draw_initial_ensemble(cfg, p.truth_states.front(), N, repeat_seed);
      ParameterCloud init_params = draw_initial_cloud(cfg, N, repeat_seed);
      AugmentedEnsemble aug;
      aug.dim_state = cfg.state_dim();
      aug.dim_param = cfg.param_dim();
      aug.samples.resize(aug.dim_state + aug.dim_param, N);
      aug.samples.topRows(aug.dim_state) = init_states.samples;
      aug.samples.bottomRows(aug.dim_param) = init_params.particles;
      AugEnKFConfig acfg{exploration_from(cfg), cfg.inflation, repeat_seed};
      record = run_augenkf(p.model, p.obs_provider, p.observations, aug, acfg);
    }
  } catch (const NumericalError& e) {
    out.failed = true;
    out.failure = e.what();
    return out;
  }

  out.state_rmse = compute_rmse(record.x_bar, p.truth_states);
  const Eigen::VectorXd truth_params = Eigen::Map<const Eigen::VectorXd>(
      cfg.truth_params.data(), cfg.param_dim());
  out.param_abs_err.reserve(record.gamma_bar.size());
  for (const auto& g : record.gamma_bar)
    out.param_abs_err.push_back((g - truth_params).cwiseAbs());
  out.record = std::move(record);
  return out;
}

namespace {

std::string trajectory_csv(const RunConfig& cfg, const RepeatResult& r) {
  const int l = cfg.param_dim();
  const Eigen::Index d = r.truth_states.front().size();
  const Eigen::VectorXd truth_params = Eigen::Map<const Eigen::VectorXd>(
      cfg.truth_params.data(), l);

  std::vector<std::string> header{"step", "state_rmse"};
  for (int i = 0; i < l; ++i) header.push_back("param_est_" + std::to_string(i));
  for (int i = 0; i < l; ++i) header.push_back("param_true_" + std::to_string(i));
  for (int i = 0; i < l; ++i)
    header.push_back("param_abs_err_" + std::to_string(i));
  for (Eigen::Index i = 0; i < d; ++i)
    header.push_back("x_est_" + std::to_string(i));
  for (Eigen::Index i = 0; i < d; ++i)
    header.push_back("x_true_" + std::to_string(i));

  std::string text = csv_row(header);
  for (std::size_t n = 0; n < r.record.x_bar.size(); ++n) {
    std::vector<std::string> row;
    row.reserve(header.size());
    row.push_back(format_int(static_cast<long long>(n)));
    row.push_back(format_double(r.state_rmse[n]));
    for (int i = 0; i < l; ++i)
      row.push_back(format_double(r.record.gamma_bar[n][i]));
    for (int i = 0; i < l; ++i) row.push_back(format_double(truth_params[i]));
    for (int i = 0; i < l; ++i)
      row.push_back(format_double(r.param_abs_err[n][i]));
    for (Eigen::Index i = 0; i < d; ++i)
      row.push_back(format_double(r.record.x_bar[n][i]));
    for (Eigen::Index i = 0; i < d; ++i)
      row.push_back(format_double(r.truth_states[n][i]));
    text += csv_row(row);
  }
  return text;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

int run_experiment(const RunConfig& cfg, std::ostream& log) {
  validate_config(cfg);
  fs::create_directories(cfg.output_dir);

  std::vector<RepeatResult> results(cfg.n_repeats);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = cfg.threads == 0
                          ? static_cast<int>(hw)
                          : std::max(1, cfg.threads);

  if (workers == 1) {
    for (int r = 0; r < cfg.n_repeats; ++r) results[r] = run_repeat(cfg, r);
  } else {
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (int w = 0; w < std::min(workers, cfg.n_repeats); ++w)
      futures.push_back(std::async(std::launch::async, [&] {
        for (int r = next.fetch_add(1); r < cfg.n_repeats;
             r = next.fetch_add(1))
          results[r] = run_repeat(cfg, r);
      }));
    for (auto& f : futures) f.get();
  }

  // per-repeat trajectories
  int failures = 0;
  for (int r = 0; r < cfg.n_repeats; ++r) {
    if (results[r].failed) {
      ++failures;
      log << "repeat " << r << " failed: " << results[r].failure << "\n";
      continue;
    }
    write_file(fs::path(cfg.output_dir) /
                   ("trajectory_r" + std::to_string(r) + ".csv"),
               trajectory_csv(cfg, results[r]));
  }

  // long-format metrics
  const int l = cfg.param_dim();
  std::string metrics = csv_row({"run", "step", "metric", "value"});
  auto add = [&](const std::string& run, long long step,
                 const std::string& metric, double value) {
    metrics += csv_row({run, format_int(step), metric, format_double(value)});
  };
  for (int r = 0; r < cfg.n_repeats; ++r) {
    if (results[r].failed) continue;
    const auto& res = results[r];
    const std::string rid = format_int(r);
    double rmse_sum = 0.0;
    for (std::size_t n = 0; n < res.state_rmse.size(); ++n) {
      add(rid, static_cast<long long>(n), "state_rmse", res.state_rmse[n]);
      for (int i = 0; i < l; ++i)
        add(rid, static_cast<long long>(n), "param_abs_err_" + std::to_string(i),
            res.param_abs_err[n][i]);
      rmse_sum += res.state_rmse[n];
    }
    add(rid, -1, "time_avg_state_rmse",
        rmse_sum / static_cast<double>(res.state_rmse.size()));
  }
  // across-repeat mean and spread per step
  const int steps_plus_1 = cfg.steps + 1;
  std::vector<std::string> metric_names{"state_rmse"};
  for (int i = 0; i < l; ++i)
    metric_names.push_back("param_abs_err_" + std::to_string(i));
  for (const auto& name : metric_names) {
    for (int n = 0; n < steps_plus_1; ++n) {
      std::vector<double> vals;
      for (const auto& res : results) {
        if (res.failed) continue;
        if (name == "state_rmse")
          vals.push_back(res.state_rmse[n]);
        else
          vals.push_back(
              res.param_abs_err[n][std::stoi(name.substr(name.rfind('_') + 1))]);
      }
      if (vals.empty()) continue;
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      double sd = 0.0;
      if (vals.size() > 1) {
        for (double v : vals) sd += (v - mean) * (v - mean);
        sd = std::sqrt(sd / static_cast<double>(vals.size() - 1));
      }
      add("mean", n, name, mean);
      add("sd", n, name, sd);
    }
  }
  write_file(fs::path(cfg.output_dir) / "metrics.csv", metrics);

  // manifest: resolved config plus informational lines
  std::string manifest = manifest_text(cfg);
  for (int r = 0; r < cfg.n_repeats; ++r) {
    if (results[r].failed)
      manifest += "info.repeat" + std::to_string(r) + ".failed = " +
                  results[r].failure + "\n";
    manifest += results[r].mask_manifest;
  }
  write_file(fs::path(cfg.output_dir) / "manifest.txt", manifest);

  if (failures == cfg.n_repeats) return 2;
  if (failures > 0) return 3;
  return 0;
}

}  // namespace ufilter
