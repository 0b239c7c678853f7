#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mfe/commands.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<unsigned long long> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("-c,--config", args.config_path, "JSON run configuration");
  if (config_required) opt->required();

  cmd->add_option_function<unsigned long long>(
      "--seed", [&args](unsigned long long v) { args.seed = v; }, "override solver seed");
  cmd->add_option_function<std::string>(
      "--out", [&args](const std::string& v) { args.out = v; }, "override output directory");
  cmd->add_option_function<int>(
      "--jobs", [&args](int v) { args.jobs = v; }, "override worker count");
}

mfe::RunConfig load(const CommonArgs& args) {
  mfe::RunConfig cfg =
      args.config_path.empty() ? mfe::RunConfig{} : mfe::load_run_config(args.config_path);
  if (args.seed) cfg.solver.rng_seed = *args.seed;
  if (args.out) cfg.out_dir = *args.out;
  if (args.jobs) {
    if (*args.jobs < 0) throw mfe::InvalidArgumentError("--jobs must be nonnegative");
    cfg.jobs = *args.jobs;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean field equation solver on the flat torus"};
  app.require_subcommand(1);

  CommonArgs solve_args, sweep_args, diag_args, eigen_args;
  std::string field_file;

  CLI::App* solve_cmd = app.add_subcommand("solve", "single mountain-pass run");
  add_common(solve_cmd, solve_args);

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "parameter sweep over (alpha1, alpha2)");
  add_common(sweep_cmd, sweep_args);

  CLI::App* diag_cmd = app.add_subcommand("diagnose", "re-evaluate a stored field");
  diag_cmd->add_option("field", field_file, "field file to diagnose")->required();
  add_common(diag_cmd, diag_args);

  CLI::App* eigen_cmd = app.add_subcommand("eigen", "first Laplace eigenvalue and gate product");
  add_common(eigen_cmd, eigen_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return mfe::cmd_solve(load(solve_args));
    if (sweep_cmd->parsed()) return mfe::cmd_sweep(load(sweep_args));
    if (diag_cmd->parsed()) return mfe::cmd_diagnose(field_file, load(diag_args));
    if (eigen_cmd->parsed()) return mfe::cmd_eigen(load(eigen_args));
  } catch (const mfe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mfe::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return mfe::kExitConfigError;
  }
  return mfe::kExitConfigError;
}
