// Experiment runner: seeded problem generation, solver lineups, trace export.
//
//   restartkit run   --experiment lasso --seed 7 --out traces.csv
//   restartkit sweep --experiment logsumexp --param rho=0.05,0.1,0.5,1 --out sweep.csv
//
// Exit codes: 0 success, 2 input error, 3 numeric failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "restartkit/restartkit.hpp"

namespace {

struct CliOptions {
  std::string experiment;
  std::uint64_t seed = 0;
  int n = -1, m = -1, s = -1, max_iters = -1;
  double rho = std::numeric_limits<double>::quiet_NaN();
  double cond = std::numeric_limits<double>::quiet_NaN();
  double noise_sigma = std::numeric_limits<double>::quiet_NaN();
  std::string restart;
  std::string out;
  std::string format = "csv";
  std::string config_path;
  std::string sweep_param;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--experiment", opt.experiment,
                  "q_sensitivity|trajectory_2d|restart_comparison|logsumexp|lasso|boxqp");
  cmd->add_option("--seed", opt.seed, "random seed");
  cmd->add_option("--n", opt.n, "problem dimension");
  cmd->add_option("--m", opt.m, "rows / terms");
  cmd->add_option("--s", opt.s, "planted sparsity (lasso)");
  cmd->add_option("--rho", opt.rho, "l1 weight or smoothing parameter");
  cmd->add_option("--cond", opt.cond, "condition number");
  cmd->add_option("--noise_sigma", opt.noise_sigma, "lasso noise level");
  cmd->add_option("--max_iters", opt.max_iters, "iteration budget");
  cmd->add_option("--restart", opt.restart,
                  "none|fixed:<k>|func|grad (restricts the lineup)");
  cmd->add_option("--out", opt.out, "trace output path");
  cmd->add_option("--format", opt.format, "csv|json");
  cmd->add_option("--config", opt.config_path,
                  "JSON config file mirroring these flags (CLI overrides)");
}

// Fill every flag the command line did not set from the JSON config file.
void merge_config(const CLI::App& cmd, CliOptions& opt) {
  if (opt.config_path.empty()) return;
  std::ifstream in(opt.config_path);
  if (!in) throw std::invalid_argument("cannot open config file: " + opt.config_path);
  nlohmann::json doc = nlohmann::json::parse(in);
  auto unset = [&](const std::string& flag) { return cmd.count(flag) == 0; };
  if (doc.contains("experiment") && unset("--experiment"))
    opt.experiment = doc["experiment"].get<std::string>();
  if (doc.contains("seed") && unset("--seed"))
    opt.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("n") && unset("--n")) opt.n = doc["n"].get<int>();
  if (doc.contains("m") && unset("--m")) opt.m = doc["m"].get<int>();
  if (doc.contains("s") && unset("--s")) opt.s = doc["s"].get<int>();
  if (doc.contains("rho") && unset("--rho")) opt.rho = doc["rho"].get<double>();
  if (doc.contains("cond") && unset("--cond"))
    opt.cond = doc["cond"].get<double>();
  if (doc.contains("noise_sigma") && unset("--noise_sigma"))
    opt.noise_sigma = doc["noise_sigma"].get<double>();
  if (doc.contains("max_iters") && unset("--max_iters"))
    opt.max_iters = doc["max_iters"].get<int>();
  if (doc.contains("restart") && unset("--restart"))
    opt.restart = doc["restart"].get<std::string>();
  if (doc.contains("out") && unset("--out"))
    opt.out = doc["out"].get<std::string>();
  if (doc.contains("format") && unset("--format"))
    opt.format = doc["format"].get<std::string>();
  if (doc.contains("param") && unset("--param"))
    opt.sweep_param = doc["param"].get<std::string>();
}

restartkit::ExperimentConfig to_config(const CliOptions& opt) {
  if (opt.experiment.empty())
    throw std::invalid_argument("--experiment is required");
  restartkit::ExperimentConfig cfg;
  cfg.experiment = restartkit::parse_experiment(opt.experiment);
  cfg.seed = opt.seed;
  cfg.n = opt.n;
  cfg.m = opt.m;
  cfg.s = opt.s;
  cfg.rho = opt.rho;
  cfg.cond = opt.cond;
  cfg.noise_sigma = opt.noise_sigma;
  cfg.max_iters = opt.max_iters;
  if (!opt.restart.empty())
    cfg.restart = restartkit::RestartPolicy::parse(opt.restart);
  return cfg;
}

void write_result(const restartkit::ExperimentResult& result,
                  const CliOptions& opt) {
  if (!opt.out.empty()) {
    const auto format = restartkit::parse_format(opt.format);
    if (result.trajectory && format == restartkit::ExportFormat::csv) {
      restartkit::write_file(opt.out,
                             restartkit::trajectories_to_csv(result.traces));
    } else {
      restartkit::export_traces(result.traces, opt.out, format);
    }
  }
  std::cout << result.summary.to_json().dump(2) << '\n';
}

int run_command(const CLI::App& cmd, CliOptions& opt) {
  merge_config(cmd, opt);
  const restartkit::ExperimentConfig cfg = to_config(opt);
  write_result(restartkit::run_experiment(cfg), opt);
  return 0;
}

// --param name=v1,v2,...
std::pair<std::string, std::vector<double>> parse_sweep_spec(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= s.size())
    throw std::invalid_argument("--param expects name=v1,v2,...");
  const std::string name = s.substr(0, eq);
  std::vector<double> values;
  std::string rest = s.substr(eq + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string tok =
        rest.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    if (tok.empty()) throw std::invalid_argument("--param: empty value");
    std::size_t pos = 0;
    values.push_back(std::stod(tok, &pos));
    if (pos != tok.size())
      throw std::invalid_argument("--param: bad value '" + tok + "'");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return {name, values};
}

int sweep_command(const CLI::App& cmd, CliOptions& opt) {
  merge_config(cmd, opt);
  if (opt.sweep_param.empty())
    throw std::invalid_argument("--param is required for sweep");
  const auto [name, values] = parse_sweep_spec(opt.sweep_param);
  const restartkit::ExperimentConfig base = to_config(opt);
  const auto sweep = restartkit::sweep_experiment(base, name, values);

  restartkit::NamedTraces combined;
  nlohmann::json summaries = nlohmann::json::array();
  bool trajectory = false;
  for (const auto& entry : sweep) {
    trajectory = entry.result.trajectory;
    for (const auto& [id, tr] : entry.result.traces)
      combined.push_back({entry.label + ":" + id, tr});
    nlohmann::json s = entry.result.summary.to_json();
    s["sweep_label"] = entry.label;
    summaries.push_back(std::move(s));
  }
  if (!opt.out.empty()) {
    const auto format = restartkit::parse_format(opt.format);
    if (trajectory && format == restartkit::ExportFormat::csv) {
      restartkit::write_file(opt.out, restartkit::trajectories_to_csv(combined));
    } else {
      restartkit::export_traces(combined, opt.out, format);
    }
  }
  std::cout << summaries.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accelerated gradient schemes with fixed and adaptive restart"};
  app.require_subcommand(1);

  CliOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "run one experiment lineup");
  add_common_options(run, run_opt);

  CliOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand("sweep", "run an experiment over a parameter list");
  add_common_options(sweep, sweep_opt);
  sweep->add_option("--param", sweep_opt.sweep_param, "name=v1,v2,...");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return run_command(*run, run_opt);
    return sweep_command(*sweep, sweep_opt);
  } catch (const restartkit::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
