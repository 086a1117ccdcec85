#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>

#include "ufilter/augenkf.hpp"
#include "ufilter/config.hpp"
#include "ufilter/direct_filter.hpp"
#include "ufilter/ensf.hpp"
#include "ufilter/experiment.hpp"
#include "ufilter/metrics.hpp"
#include "ufilter/models/fokker_planck.hpp"
#include "ufilter/models/linear_gaussian.hpp"
#include "ufilter/models/lorenz96.hpp"
#include "ufilter/models/sir.hpp"
#include "ufilter/sampler.hpp"
#include "ufilter/schedule.hpp"
#include "ufilter/score.hpp"
#include "ufilter/united_filter.hpp"

namespace py = pybind11;
using namespace ufilter;

namespace {

Eigen::MatrixXd record_matrix(const std::vector<Eigen::VectorXd>& rows) {
  if (rows.empty()) return {};
  Eigen::MatrixXd out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = rows[i];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint state-parameter estimation: ensemble score filter, direct "
            "particle filter, united filter, and an augmented EnKF baseline";

  py::register_exception<NumericalError>(m, "NumericalError");
  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<NoiseSchedule>(m, "NoiseSchedule")
      .def(py::init<double, int>(), py::arg("t_min") = 1e-3,
           py::arg("n_steps") = 100)
      .def_readwrite("t_min", &NoiseSchedule::t_min)
      .def_readwrite("n_steps", &NoiseSchedule::n_steps);

  m.def("schedule_eval",
        [](const NoiseSchedule& s, double t) { return schedule_eval(s, t); },
        py::arg("sched"), py::arg("t"),
        "(alpha_t, beta_t) of the linear schedule");

  py::class_<StateEnsemble>(m, "StateEnsemble")
      .def(py::init([](const Eigen::MatrixXd& samples) {
             return StateEnsemble{samples};
           }),
           py::arg("samples"), "samples: one column per ensemble member")
      .def_property_readonly(
          "samples", [](const StateEnsemble& e) { return e.samples; })
      .def_property_readonly("dim", &StateEnsemble::dim)
      .def_property_readonly("count", &StateEnsemble::count)
      .def("mean", &StateEnsemble::mean);

  py::class_<ScoreField>(m, "ScoreField")
      .def(py::init([](const Eigen::MatrixXd& ensemble, int minibatch,
                       py::object likelihood_grad, double t_min) {
             LikelihoodGrad grad = nullptr;
             if (!likelihood_grad.is_none()) {
               grad = [fn = py::reinterpret_borrow<py::function>(
                           likelihood_grad)](const Eigen::MatrixXd& Z) {
                 return fn(Z).cast<Eigen::MatrixXd>();
               };
             }
             return ScoreField{StateEnsemble{ensemble}, minibatch,
                               std::move(grad), nullptr, t_min};
           }),
           py::arg("ensemble"), py::arg("minibatch") = 0,
           py::arg("likelihood_grad") = py::none(), py::arg("t_min") = 1e-3)
      .def("prior_score",
           [](const ScoreField& f, const Eigen::VectorXd& z, double t,
              std::uint64_t seed) {
             RngStream rng(seed);
             return f.prior_score(z, t, &rng);
           },
           py::arg("z"), py::arg("t"), py::arg("seed") = 0)
      .def("posterior_score",
           [](const ScoreField& f, const Eigen::VectorXd& z, double t,
              std::uint64_t seed) {
             RngStream rng(seed);
             return f.posterior_score(z, t, &rng);
           },
           py::arg("z"), py::arg("t"), py::arg("seed") = 0)
      .def("kernel_weights", &ScoreField::kernel_weights, py::arg("z"),
           py::arg("t"));

  m.def("reverse_sde_sample",
        [](const ScoreField& field, const NoiseSchedule& sched, int n_out,
           std::uint64_t seed) {
          RngStream rng(seed);
          return reverse_sde_sample(field, sched, n_out, rng).samples;
        },
        py::arg("field"), py::arg("sched"), py::arg("n_out"), py::arg("seed"),
        "Samples (one per column) drawn through the reverse-time SDE");

  py::class_<DynamicsModel>(m, "DynamicsModel")
      .def_readonly("dim_state", &DynamicsModel::dim_state)
      .def_readonly("dim_param", &DynamicsModel::dim_param)
      .def("step",
           [](const DynamicsModel& mdl, const Eigen::VectorXd& x,
              const Eigen::VectorXd& p, const Eigen::VectorXd& w) {
             return mdl.step(x, p, w);
           });

  py::class_<ObservationModel>(m, "ObservationModel")
      .def_readonly("dim_obs", &ObservationModel::dim_obs)
      .def("observe", [](const ObservationModel& o, const Eigen::VectorXd& x) {
        return o.observe(x);
      })
      .def("log_likelihood",
           [](const ObservationModel& o, const Eigen::VectorXd& z,
              const Eigen::VectorXd& y) { return o.log_likelihood(z, y); })
      .def("log_likelihood_grad",
           [](const ObservationModel& o, const Eigen::MatrixXd& Z,
              const Eigen::VectorXd& y) { return o.log_likelihood_grad(Z, y); });

  m.def("predict_ensemble",
        [](const Eigen::MatrixXd& posterior, const Eigen::VectorXd& params,
           const DynamicsModel& model, std::uint64_t seed) {
          RngStream rng(seed);
          return predict_ensemble(StateEnsemble{posterior}, params, model, rng)
              .samples;
        },
        py::arg("posterior"), py::arg("params"), py::arg("model"),
        py::arg("seed"));

  m.def("analysis_step",
        [](const Eigen::MatrixXd& predicted, const Eigen::VectorXd& y,
           const ObservationModel& obs, const NoiseSchedule& sched,
           int minibatch, int n_out, std::uint64_t seed) {
          RngStream rng(seed);
          AnalysisResult res = analysis_step(
              StateEnsemble{predicted}, y, obs,
              AnalysisConfig{sched, minibatch, n_out}, rng);
          return py::make_tuple(res.posterior.samples, res.estimate);
        },
        py::arg("predicted"), py::arg("y"), py::arg("obs"), py::arg("sched"),
        py::arg("minibatch") = 0, py::arg("n_out") = 0, py::arg("seed") = 0,
        "(posterior_samples, estimate)");

  // direct filter
  py::class_<ParameterCloud>(m, "ParameterCloud")
      .def(py::init([](const Eigen::MatrixXd& particles) {
             return ParameterCloud{particles};
           }),
           py::arg("particles"), "particles: one column per particle")
      .def_property_readonly(
          "particles", [](const ParameterCloud& c) { return c.particles; })
      .def_property_readonly("dim", &ParameterCloud::dim)
      .def_property_readonly("count", &ParameterCloud::count);

  m.def("perturb",
        [](const ParameterCloud& cloud, const Eigen::MatrixXd& cov,
           std::uint64_t seed) {
          RngStream rng(seed);
          return perturb(cloud, ExplorationNoise{cov, 1.0}, rng);
        },
        py::arg("cloud"), py::arg("cov"), py::arg("seed"));

  m.def("weigh",
        [](const ParameterCloud& cloud, const Eigen::VectorXd& x_prev,
           const Eigen::VectorXd& x_est, const DynamicsModel& model,
           std::uint64_t seed, bool fresh_noise) {
          RngStream rng(seed);
          WeighResult res =
              weigh(cloud, x_prev, x_est, model, rng, WeighOptions{fresh_noise});
          return py::make_tuple(res.weights, res.degenerate);
        },
        py::arg("cloud"), py::arg("x_prev"), py::arg("x_est"), py::arg("model"),
        py::arg("seed") = 0, py::arg("fresh_noise") = true,
        "(weights, degenerate)");

  m.def("resample",
        [](const ParameterCloud& cloud, const Eigen::VectorXd& weights,
           std::uint64_t seed) {
          RngStream rng(seed);
          return resample(cloud, weights, rng);
        },
        py::arg("cloud"), py::arg("weights"), py::arg("seed"));

  m.def("estimate", [](const ParameterCloud& c) { return estimate(c); },
        py::arg("cloud"), "arithmetic mean over particles");

  // augmented EnKF
  py::class_<AugmentedEnsemble>(m, "AugmentedEnsemble")
      .def(py::init([](const Eigen::MatrixXd& samples, Eigen::Index dim_state,
                       Eigen::Index dim_param) {
             AugmentedEnsemble e;
             e.samples = samples;
             e.dim_state = dim_state;
             e.dim_param = dim_param;
             return e;
           }),
           py::arg("samples"), py::arg("dim_state"), py::arg("dim_param"))
      .def_property_readonly(
          "samples", [](const AugmentedEnsemble& e) { return e.samples; })
      .def_readonly("dim_state", &AugmentedEnsemble::dim_state)
      .def_readonly("dim_param", &AugmentedEnsemble::dim_param);

  m.def("augenkf_forecast",
        [](const AugmentedEnsemble& ens, const DynamicsModel& model,
           const Eigen::MatrixXd& param_cov, std::uint64_t seed) {
          RngStream rng(seed);
          return augenkf_forecast(ens, model, ExplorationNoise{param_cov, 1.0},
                                  rng);
        },
        py::arg("ens"), py::arg("model"), py::arg("param_cov"), py::arg("seed"));

  m.def("augenkf_analysis",
        [](const AugmentedEnsemble& ens, const Eigen::VectorXd& y,
           const ObservationModel& obs, std::uint64_t seed, double inflation) {
          RngStream rng(seed);
          return augenkf_analysis(ens, y, obs, rng, inflation);
        },
        py::arg("ens"), py::arg("y"), py::arg("obs"), py::arg("seed"),
        py::arg("inflation") = 1.0);

  // benchmark systems
  py::class_<models::SirConfig>(m, "SirConfig")
      .def(py::init<>())
      .def_readwrite("contact_rate", &models::SirConfig::contact_rate)
      .def_readwrite("recovery_rate", &models::SirConfig::recovery_rate)
      .def_readwrite("dt", &models::SirConfig::dt)
      .def_readwrite("sigma", &models::SirConfig::sigma)
      .def_readwrite("obs_noise_std", &models::SirConfig::obs_noise_std)
      .def_readwrite("steps", &models::SirConfig::steps);

  m.def("sir_step", &models::sir_step, py::arg("state"), py::arg("contact_rate"),
        py::arg("recovery_rate"), py::arg("dt"), py::arg("noise"));
  m.def("sir_dynamics", &models::sir_dynamics);
  m.def("sir_observation", &models::sir_observation);
  m.def("simulate_sir_truth",
        [](const models::SirConfig& cfg, std::uint64_t seed) {
          TruthRun t = models::simulate_sir_truth(cfg, seed);
          return py::make_tuple(record_matrix(t.states),
                                record_matrix(t.observations));
        },
        py::arg("cfg"), py::arg("seed"), "(states, observations), row per step");

  py::class_<models::FokkerPlanckConfig>(m, "FokkerPlanckConfig")
      .def(py::init<>())
      .def_readwrite("drift", &models::FokkerPlanckConfig::drift)
      .def_readwrite("diffusion", &models::FokkerPlanckConfig::diffusion)
      .def_readwrite("dx", &models::FokkerPlanckConfig::dx)
      .def_readwrite("dt", &models::FokkerPlanckConfig::dt)
      .def_readwrite("steps", &models::FokkerPlanckConfig::steps)
      .def_readwrite("sigma", &models::FokkerPlanckConfig::sigma)
      .def_readwrite("obs_noise_std", &models::FokkerPlanckConfig::obs_noise_std)
      .def_readwrite("cutoff", &models::FokkerPlanckConfig::cutoff)
      .def_property_readonly("dim", &models::FokkerPlanckConfig::dim)
      .def("grid", &models::FokkerPlanckConfig::grid)
      .def("initial_profile", &models::FokkerPlanckConfig::initial_profile);

  m.def("fp_step", &models::fp_step, py::arg("state"), py::arg("drift"),
        py::arg("diffusion"), py::arg("dx"), py::arg("dt"), py::arg("noise"));
  m.def("fp_observe", &models::fp_observe, py::arg("state"), py::arg("cutoff"),
        py::arg("noise"));
  m.def("fp_dynamics", &models::fp_dynamics);
  m.def("fp_observation", &models::fp_observation);
  m.def("simulate_fp_truth",
        [](const models::FokkerPlanckConfig& cfg, std::uint64_t seed) {
          TruthRun t = models::simulate_fp_truth(cfg, seed);
          return py::make_tuple(record_matrix(t.states),
                                record_matrix(t.observations));
        },
        py::arg("cfg"), py::arg("seed"));

  py::class_<models::Lorenz96Config>(m, "Lorenz96Config")
      .def(py::init<>())
      .def_readwrite("advection", &models::Lorenz96Config::advection)
      .def_readwrite("damping", &models::Lorenz96Config::damping)
      .def_readwrite("forcing", &models::Lorenz96Config::forcing)
      .def_readwrite("dim", &models::Lorenz96Config::dim)
      .def_readwrite("dt", &models::Lorenz96Config::dt)
      .def_readwrite("steps", &models::Lorenz96Config::steps)
      .def_readwrite("sigma", &models::Lorenz96Config::sigma)
      .def_readwrite("n_obs", &models::Lorenz96Config::n_obs)
      .def_readwrite("n_arctan", &models::Lorenz96Config::n_arctan)
      .def_readwrite("obs_noise_std", &models::Lorenz96Config::obs_noise_std);

  m.def("lorenz96_step", &models::lorenz96_step, py::arg("state"),
        py::arg("advection"), py::arg("damping"), py::arg("forcing"),
        py::arg("dt"), py::arg("noise"));
  m.def("lorenz96_dynamics", &models::lorenz96_dynamics);

  m.def("compute_rmse",
        [](const std::vector<Eigen::VectorXd>& est,
           const std::vector<Eigen::VectorXd>& truth) {
          return compute_rmse(est, truth);
        },
        py::arg("estimates"), py::arg("truth"));

  // configuration + full runs
  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("experiment", &RunConfig::experiment)
      .def_readwrite("filter", &RunConfig::filter)
      .def_readwrite("steps", &RunConfig::steps)
      .def_readwrite("obs_noise", &RunConfig::obs_noise)
      .def_readwrite("ensemble_size", &RunConfig::ensemble_size)
      .def_readwrite("particle_count", &RunConfig::particle_count)
      .def_readwrite("iterations", &RunConfig::iterations)
      .def_readwrite("pseudo_steps", &RunConfig::pseudo_steps)
      .def_readwrite("exploration_std", &RunConfig::exploration_std)
      .def_readwrite("exploration_decay", &RunConfig::exploration_decay)
      .def_readwrite("param_init", &RunConfig::param_init)
      .def_readwrite("param_init_spread", &RunConfig::param_init_spread)
      .def_readwrite("param_init_kind", &RunConfig::param_init_kind)
      .def_readwrite("fresh_prediction_noise",
                     &RunConfig::fresh_prediction_noise)
      .def_readwrite("augenkf_size", &RunConfig::augenkf_size)
      .def_readwrite("n_repeats", &RunConfig::n_repeats)
      .def_readwrite("master_seed", &RunConfig::master_seed)
      .def_readwrite("threads", &RunConfig::threads)
      .def_readwrite("output_dir", &RunConfig::output_dir)
      .def_readwrite("truth_params", &RunConfig::truth_params);

  m.def("default_config", &default_config, py::arg("experiment"),
        py::arg("filter"));
  m.def("parse_config_text", &parse_config_text, py::arg("text"));
  m.def("manifest_text", &manifest_text, py::arg("cfg"));

  m.def("run_repeat",
        [](const RunConfig& cfg, int repeat_index) {
          validate_config(cfg);
          RepeatResult r = run_repeat(cfg, repeat_index);
          py::dict out;
          out["failed"] = r.failed;
          out["failure"] = r.failure;
          if (!r.failed) {
            out["x_bar"] = record_matrix(r.record.x_bar);
            out["gamma_bar"] = record_matrix(r.record.gamma_bar);
            out["truth_states"] = record_matrix(r.truth_states);
            out["state_rmse"] = r.state_rmse;
            out["param_abs_err"] = record_matrix(r.param_abs_err);
          }
          return out;
        },
        py::arg("cfg"), py::arg("repeat_index") = 0,
        "One twin-experiment repeat; returns a dict of trajectories");

  m.def("run_experiment",
        [](const RunConfig& cfg) {
          std::ostringstream log;
          const int code = run_experiment(cfg, log);
          return py::make_tuple(code, log.str());
        },
        py::arg("cfg"), "(exit_code, log_text); writes CSVs and the manifest");
}
