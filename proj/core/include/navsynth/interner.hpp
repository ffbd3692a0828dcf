#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace navsynth {

// Dense article identifier; ids are contiguous from 0 in interning order.
using ArticleId = std::uint32_t;

inline constexpr ArticleId kNoArticle = std::numeric_limits<ArticleId>::max();

// Bijection between article names and dense ids.
class Interner {
 public:
  ArticleId intern(std::string_view name);
  std::optional<ArticleId> find(std::string_view name) const;
  const std::string& name(ArticleId id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  // "id<TAB>name" per line, ids ascending, after an optional "# comment" line.
  // The reader skips '#' lines.
  std::string to_tsv(std::string_view comment = {}) const;
  void write_tsv(const std::filesystem::path& path, std::string_view comment = {}) const;
  static Interner read_tsv(const std::filesystem::path& path);

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, ArticleId, StringHash, std::equal_to<>> ids_;
  std::vector<std::string> names_;
};

}  // namespace navsynth
