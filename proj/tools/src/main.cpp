#include <fmt/format.h>

#include <cstdio>
#include <string>
#include <vector>

#include "command.hpp"
#include "commands.hpp"
#include "navsynth/error.hpp"

int main(int argc, char** argv) {
  using namespace navsynth::cli;

  CLI::App app{"navsynth: synthetic navigation sequence toolkit", "navsynth"};
  app.set_version_flag("--version", std::string(NAVSYNTH_VERSION));
  app.require_subcommand(1);

  GlobalOptions globals;
  app.add_option("--seed", globals.seed, "Master seed for every random stream")
      ->capture_default_str()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--workers", globals.workers,
                 "Worker threads; results do not depend on it except for train-emb with workers > 1")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", globals.config, "Flat key = value file; command-line flags take precedence")
      ->check(CLI::ExistingFile);
  app.add_option("--out-dir", globals.out_dir, "Directory for output artifacts")
      ->capture_default_str()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Registry registry(app, globals);
  register_data_commands(registry);
  register_analysis_commands(registry);
  register_eval_commands(registry);
  register_report_command(registry);

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = apply_config(app, args);
  } catch (const navsynth::Error& e) {
    fmt::print(stderr, "navsynth: {}\n", e.what());
    return 2;
  }
  std::vector<char*> raw;
  raw.reserve(args.size());
  for (auto& a : args) raw.push_back(a.data());

  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "navsynth: {}\n", e.what());
    return 1;
  }
  return 0;
}
