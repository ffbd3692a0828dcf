#include "navsynth/interner.hpp"

#include <charconv>

#include "navsynth/error.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {

ArticleId Interner::intern(std::string_view name) {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  if (names_.size() >= kNoArticle) throw Error("interning table full");
  const auto id = static_cast<ArticleId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<ArticleId> Interner::find(std::string_view name) const {
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::string Interner::to_tsv(std::string_view comment) const {
  std::string out = comment_line(comment);
  for (std::size_t i = 0; i < names_.size(); ++i) {
    out += std::to_string(i);
    out += '\t';
    out += names_[i];
    out += '\n';
  }
  return out;
}

void Interner::write_tsv(const std::filesystem::path& path, std::string_view comment) const {
  write_file(path, to_tsv(comment));
}

Interner Interner::read_tsv(const std::filesystem::path& path) {
  Interner out;
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) throw ParseError(reader.file_name(), reader.line_number(), "expected id<TAB>name");
    std::size_t id = 0;
    const auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), id);
    if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size() || id != out.size()) {
      throw ParseError(reader.file_name(), reader.line_number(), "ids must be contiguous from 0");
    }
    if (out.find(fields[1])) throw ParseError(reader.file_name(), reader.line_number(), "duplicate name");
    out.intern(fields[1]);
  }
  return out;
}

}  // namespace navsynth
