#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace navsynth {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by every text loader; carries the offending file and 1-based line.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace navsynth
