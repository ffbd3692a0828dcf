#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace navsynth {

// Line-oriented reader. Files ending in ".gz" are inflated transparently.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  // Reads the next line without its trailing "\n" / "\r\n". Returns false at EOF.
  bool next(std::string& line);
  std::size_t line_number() const noexcept { return line_number_; }
  const std::string& file_name() const noexcept { return file_name_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::size_t line_number_ = 0;
  std::string file_name_;
};

// Splits on a single delimiter; empty fields are preserved.
std::vector<std::string_view> split(std::string_view line, char delim);

// Splits on runs of ASCII whitespace.
std::vector<std::string_view> split_ws(std::string_view line);

// Writes `contents` to `path` atomically enough for batch use (truncate + write).
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

// RFC 4180 quoting when the field contains a comma, quote or line break.
std::string csv_field(std::string_view field);

// "# <comment>\n", or empty for an empty comment.
std::string comment_line(std::string_view comment);

}  // namespace navsynth
