#pragma once

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace navsynth::cli {

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
};

// One subcommand. Options registered through param()/input()/inputs() take the
// last value when repeated and contribute to the config digest written into
// every artifact header. Input files are digested by content, so the digest
// does not depend on where the inputs live.
class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& description,
          const GlobalOptions& globals);
  Command(const Command&) = delete;
  Command& operator=(const Command&) = delete;

  CLI::App& app() noexcept { return *app_; }
  const std::string& name() const noexcept { return name_; }
  const GlobalOptions& globals() const noexcept { return globals_; }

  template <typename T>
  CLI::Option* param(const std::string& flag, T& value, const std::string& description) {
    auto* opt = app_->add_option("--" + flag, value, description)
                    ->capture_default_str()
                    ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    digest_entries_.push_back([flag, &value] { return flag + "=" + render(value); });
    return opt;
  }

  // A list option; accepts repeated flags and comma-separated values.
  template <typename T>
  CLI::Option* list(const std::string& flag, std::vector<T>& values, const std::string& description) {
    auto* opt = app_->add_option("--" + flag, values, description)->delimiter(',')->capture_default_str();
    digest_entries_.push_back([flag, &values] { return flag + "=" + render(values); });
    return opt;
  }

  // With must_exist = false the caller checks existence before header() is used.
  CLI::Option* input(const std::string& flag, std::filesystem::path& value, const std::string& description,
                     bool must_exist = true);
  CLI::Option* inputs(const std::string& flag, std::vector<std::filesystem::path>& values,
                      const std::string& description);

  void on_run(std::function<void(Command&)> body);

  // MD5 over the sorted "option=value" lines of this invocation.
  std::string config_digest() const;
  // "navsynth <version> seed=<seed> config=<digest>"; cached after the first call.
  const std::string& header();

  std::filesystem::path output_path(std::string_view file) const;
  // Writes out_dir/file and records it for the completion summary.
  void write_output(std::string_view file, std::string_view contents);
  const std::vector<std::filesystem::path>& written() const noexcept { return written_; }

 private:
  static std::string render(const std::string& v) { return v; }
  static std::string render(const std::filesystem::path& v) { return v.string(); }
  template <typename T>
  static std::string render(const T& v) {
    return fmt::format("{}", v);
  }
  template <typename T>
  static std::string render(const std::vector<T>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i > 0) out += ',';
      out += render(vs[i]);
    }
    return out;
  }

  CLI::App* app_;
  std::string name_;
  const GlobalOptions& globals_;
  std::vector<std::function<std::string()>> digest_entries_;
  std::string header_;
  std::vector<std::filesystem::path> written_;
};

// Reads a flat "key = value" file; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

// Returns argv with config entries spliced in after the subcommand token as
// "--key=value". Keys unknown to the chosen subcommand and the global options
// are ignored; keys already given on the command line are skipped, so flags win.
std::vector<std::string> apply_config(const CLI::App& app, const std::vector<std::string>& args);

}  // namespace navsynth::cli
