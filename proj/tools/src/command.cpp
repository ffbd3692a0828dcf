#include "command.hpp"

#include <algorithm>
#include <cstdlib>

#include "navsynth/digest.hpp"
#include "navsynth/error.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string digest_of(const std::filesystem::path& p) {
  return "md5:" + md5_file_hex(p);
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.starts_with(flag + "=");
  });
}

}  // namespace

Command::Command(CLI::App& parent, const std::string& name, const std::string& description,
                 const GlobalOptions& globals)
    : app_(parent.add_subcommand(name, description)), name_(name), globals_(globals) {
  app_->fallthrough();
}

CLI::Option* Command::input(const std::string& flag, std::filesystem::path& value,
                            const std::string& description, bool must_exist) {
  auto* opt = app_->add_option("--" + flag, value, description)
                  ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  if (must_exist) opt->check(CLI::ExistingFile);
  digest_entries_.push_back([flag, &value] {
    return flag + "=" + (value.empty() ? std::string() : digest_of(value));
  });
  return opt;
}

CLI::Option* Command::inputs(const std::string& flag, std::vector<std::filesystem::path>& values,
                             const std::string& description) {
  auto* opt = app_->add_option("--" + flag, values, description)->delimiter(',')->check(CLI::ExistingFile);
  digest_entries_.push_back([flag, &values] {
    std::string out = flag + "=";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out += ',';
      out += digest_of(values[i]);
    }
    return out;
  });
  return opt;
}

void Command::on_run(std::function<void(Command&)> body) {
  app_->callback([this, body = std::move(body)] { body(*this); });
}

std::string Command::config_digest() const {
  std::vector<std::string> lines;
  lines.reserve(digest_entries_.size() + 1);
  lines.push_back("command=" + name_);
  for (const auto& entry : digest_entries_) lines.push_back(entry());
  std::sort(lines.begin(), lines.end());
  std::string joined;
  for (const auto& l : lines) {
    joined += l;
    joined += '\n';
  }
  return md5_hex(joined);
}

const std::string& Command::header() {
  if (header_.empty()) {
    header_ = fmt::format("navsynth {} seed={} config={}", NAVSYNTH_VERSION, globals_.seed, config_digest());
  }
  return header_;
}

std::filesystem::path Command::output_path(std::string_view file) const {
  std::filesystem::create_directories(globals_.out_dir);
  return globals_.out_dir / std::filesystem::path(file);
}

void Command::write_output(std::string_view file, std::string_view contents) {
  const auto path = output_path(file);
  write_file(path, contents);
  written_.push_back(path);
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
  LineReader reader(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (reader.next(line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(reader.file_name(), reader.line_number(), "expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ParseError(reader.file_name(), reader.line_number(), "empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::string> apply_config(const CLI::App& app, const std::vector<std::string>& args) {
  std::filesystem::path config;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    else if (args[i].starts_with("--config=")) config = args[i].substr(9);
  }
  if (config.empty()) return args;

  std::size_t sub_pos = 0;
  const CLI::App* sub = nullptr;
  for (std::size_t i = 1; i < args.size() && sub == nullptr; ++i) {
    for (const auto* candidate : app.get_subcommands({})) {
      if (candidate->get_name() == args[i]) {
        sub = candidate;
        sub_pos = i;
        break;
      }
    }
  }
  if (sub == nullptr) return args;

  std::vector<std::string> spliced;
  for (const auto& [key, value] : read_config_file(config)) {
    const std::string flag = "--" + key;
    if (key == "config" || given_on_command_line(args, flag)) continue;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr) opt = app.get_option_no_throw(flag);
    if (opt == nullptr) continue;
    spliced.push_back(flag + "=" + value);
  }
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos + 1));
  out.insert(out.end(), spliced.begin(), spliced.end());
  out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos + 1), args.end());
  return out;
}

}  // namespace navsynth::cli
