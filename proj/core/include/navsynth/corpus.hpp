#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "navsynth/interner.hpp"

namespace navsynth {

// Provenance of a corpus: real logs or one of the synthetic generators.
enum class DatasetKind {
  logs,
  clickstream_priv,
  clickstream_pub,
  clickstream_pub_intrinsic,
  graph,
};

inline constexpr DatasetKind kAllDatasetKinds[] = {
    DatasetKind::logs, DatasetKind::clickstream_priv, DatasetKind::clickstream_pub,
    DatasetKind::clickstream_pub_intrinsic, DatasetKind::graph};

// Display name used in corpus headers and result tables, e.g. "Clickstream-Pub(I)".
std::string_view to_string(DatasetKind kind) noexcept;

// Lower-case CLI spelling, e.g. "clickstream-pub-intrinsic".
std::string_view to_slug(DatasetKind kind) noexcept;

// Accepts display names ("Clickstream-Pub") and CLI spellings ("clickstream-pub").
std::optional<DatasetKind> parse_dataset_kind(std::string_view text);

struct NavigationSequence {
  std::vector<ArticleId> pages;
  // Set when a generator could not honor the requested start/length.
  bool flagged = false;

  std::size_t size() const noexcept { return pages.size(); }
  bool operator==(const NavigationSequence&) const = default;
};

struct SequenceCorpus {
  DatasetKind kind = DatasetKind::logs;
  std::vector<NavigationSequence> sequences;

  std::size_t size() const noexcept { return sequences.size(); }
  bool empty() const noexcept { return sequences.empty(); }
  std::size_t flagged_count() const noexcept;
};

// Corpus file: first line "#kind=<name>", further '#' lines are comments, then one
// sequence per line as tab-separated article names.
std::string format_corpus(const SequenceCorpus& corpus, const Interner& names,
                          std::string_view comment = {});
void write_corpus(const std::filesystem::path& path, const SequenceCorpus& corpus,
                  const Interner& names, std::string_view comment = {});
SequenceCorpus read_corpus(const std::filesystem::path& path, Interner& names);

}  // namespace navsynth
