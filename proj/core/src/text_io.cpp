#include "navsynth/text_io.hpp"

#include <zlib.h>

#include <array>
#include <fstream>
#include <sstream>

#include "navsynth/error.hpp"

namespace navsynth {

struct LineReader::Impl {
  std::ifstream plain;
  gzFile gz = nullptr;

  ~Impl() {
    if (gz != nullptr) gzclose(gz);
  }
};

LineReader::LineReader(const std::filesystem::path& path)
    : impl_(std::make_unique<Impl>()), file_name_(path.string()) {
  if (path.extension() == ".gz") {
    impl_->gz = gzopen(file_name_.c_str(), "rb");
    if (impl_->gz == nullptr) throw Error("cannot open " + file_name_);
    gzbuffer(impl_->gz, 1 << 17);
  } else {
    impl_->plain.open(path, std::ios::binary);
    if (!impl_->plain) throw Error("cannot open " + file_name_);
  }
}

LineReader::~LineReader() = default;

bool LineReader::next(std::string& line) {
  line.clear();
  if (impl_->gz != nullptr) {
    std::array<char, 8192> buf{};
    bool got_any = false;
    while (gzgets(impl_->gz, buf.data(), static_cast<int>(buf.size())) != nullptr) {
      got_any = true;
      line.append(buf.data());
      if (!line.empty() && line.back() == '\n') break;
    }
    if (!got_any) {
      int err = 0;
      gzerror(impl_->gz, &err);
      if (err != Z_OK && err != Z_STREAM_END) throw Error("gzip read error in " + file_name_);
      return false;
    }
  } else {
    if (!std::getline(impl_->plain, line)) return false;
    if (!impl_->plain.eof()) line.push_back('\n');
  }
  if (!line.empty() && line.back() == '\n') line.pop_back();
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++line_number_;
  return true;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (i < line.size()) {
    while (i < line.size() && is_ws(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_ws(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string comment_line(std::string_view comment) {
  if (comment.empty()) return {};
  std::string out = "# ";
  out += comment;
  out += '\n';
  return out;
}

}  // namespace navsynth
