// Experiment runner for the united filter library.
//
//   ufilter run      --config cfg.txt    execute a configured run
//   ufilter validate --config cfg.txt    parse and check only
//   ufilter rmse     --est a.csv --truth b.csv   per-step RMSE of existing files
//
// Exit codes: 0 success, 1 configuration error, 2 all repeats failed
// numerically, 3 partial failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "ufilter/config.hpp"
#include "ufilter/csv.hpp"
#include "ufilter/errors.hpp"
#include "ufilter/experiment.hpp"
#include "ufilter/metrics.hpp"

namespace {

// Column subset used by the rmse subcommand: trajectory files contribute
// their x_est_* / x_true_* blocks, generic numeric files everything but
// "step".
std::vector<int> pick_columns(const ufilter::NumericCsv& csv,
                              const std::string& prefix) {
  std::vector<int> cols;
  for (std::size_t i = 0; i < csv.columns.size(); ++i)
    if (csv.columns[i].rfind(prefix, 0) == 0) cols.push_back(static_cast<int>(i));
  if (!cols.empty()) return cols;
  for (std::size_t i = 0; i < csv.columns.size(); ++i)
    if (csv.columns[i] != "step") cols.push_back(static_cast<int>(i));
  return cols;
}

std::vector<Eigen::VectorXd> extract(const ufilter::NumericCsv& csv,
                                     const std::vector<int>& cols) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(csv.rows.size());
  for (const auto& row : csv.rows) {
    Eigen::VectorXd v(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) v[i] = row[cols[i]];
    out.push_back(std::move(v));
  }
  return out;
}

int cmd_rmse(const std::string& est_path, const std::string& truth_path) {
  const auto est_csv = ufilter::read_numeric_csv(est_path);
  const auto truth_csv = ufilter::read_numeric_csv(truth_path);
  const auto est = extract(est_csv, pick_columns(est_csv, "x_est_"));
  const auto truth = extract(truth_csv, pick_columns(truth_csv, "x_true_"));
  const auto rmse = ufilter::compute_rmse(est, truth);
  std::cout << "step,rmse\n";
  for (std::size_t n = 0; n < rmse.size(); ++n)
    std::cout << n << "," << ufilter::format_double(rmse[n]) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"United filter experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "execute a configured experiment");
  run_cmd->add_option("--config", config_path, "configuration file")->required();

  std::string validate_path;
  auto* validate_cmd =
      app.add_subcommand("validate", "parse and validate a configuration");
  validate_cmd->add_option("--config", validate_path, "configuration file")
      ->required();

  std::string est_path, truth_path;
  auto* rmse_cmd =
      app.add_subcommand("rmse", "per-step RMSE between two trajectory files");
  rmse_cmd->add_option("--est", est_path, "estimate CSV")->required();
  rmse_cmd->add_option("--truth", truth_path, "truth CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const ufilter::RunConfig cfg = ufilter::parse_config_file(config_path);
      return ufilter::run_experiment(cfg, std::cerr);
    }
    if (validate_cmd->parsed()) {
      ufilter::parse_config_file(validate_path);
      std::cout << "ok\n";
      return 0;
    }
    if (rmse_cmd->parsed()) return cmd_rmse(est_path, truth_path);
  } catch (const ufilter::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const ufilter::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
