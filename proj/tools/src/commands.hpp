#pragma once

#include <memory>
#include <string>
#include <vector>

#include "command.hpp"

namespace navsynth::cli {

class Registry {
 public:
  Registry(CLI::App& app, const GlobalOptions& globals) : app_(app), globals_(globals) {}

  Command& add(const std::string& name, const std::string& description) {
    commands_.push_back(std::make_unique<Command>(app_, name, description, globals_));
    return *commands_.back();
  }

  // Storage for option values that must outlive parsing.
  template <typename T>
  T& keep() {
    auto p = std::make_shared<T>();
    T& ref = *p;
    storage_.push_back(std::move(p));
    return ref;
  }

 private:
  CLI::App& app_;
  const GlobalOptions& globals_;
  std::vector<std::unique_ptr<Command>> commands_;
  std::vector<std::shared_ptr<void>> storage_;
};

void register_data_commands(Registry& registry);      // ingest, build-sessions, synth, planted-world
void register_analysis_commands(Registry& registry);  // mixing, diffusion
void register_eval_commands(Registry& registry);      // eval-next, eval-link, train-emb, eval-related, eval-topic
void register_report_command(Registry& registry);

}  // namespace navsynth::cli
