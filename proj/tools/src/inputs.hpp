#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "navsynth/corpus.hpp"
#include "navsynth/embedding.hpp"
#include "navsynth/graph.hpp"
#include "navsynth/interner.hpp"

namespace navsynth::cli {

// Shared name table for one invocation. Graph and clickstream inputs may be
// either text files or binary caches written by `ingest` (".nsg" / ".nsc");
// a cache brings along the names.tsv next to it, so caches must be loaded
// before any text input.
class InputSet {
 public:
  Interner& names() noexcept { return names_; }

  HyperlinkGraph graph(const std::filesystem::path& path);
  ClickstreamTable clickstream(const std::filesystem::path& path);
  SequenceCorpus corpus(const std::filesystem::path& path);
  EmbeddingTable embeddings(const std::filesystem::path& path);

  // Graph widened to cover every name interned so far.
  HyperlinkGraph cover(const HyperlinkGraph& graph) const;

 private:
  void adopt_names(const std::filesystem::path& names_file);

  Interner names_;
  std::optional<std::filesystem::path> names_source_;
};

// Dataset display names, made unique with a numeric suffix ("Logs", "Logs-2").
std::vector<std::string> dataset_labels(const std::vector<SequenceCorpus>& corpora);

// Directory for ingest caches: $NAVSYNTH_CACHE_DIR if set, else `fallback`.
std::filesystem::path cache_directory(const std::filesystem::path& fallback);

// Display label for an embedding file: "emb_<kind>.txt" maps to the dataset
// kind's display name, anything else to the file stem.
std::string embedding_label(const std::filesystem::path& path);

// Minimal reader for the CSV artifacts this tool writes (no quoted fields).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws when absent
};
CsvTable read_csv(const std::filesystem::path& path);

// Text writers for planted-world artifacts.
std::string format_edge_list(const HyperlinkGraph& graph, const Interner& names, std::string_view comment);
std::string format_clickstream(const ClickstreamTable& table, const Interner& names, std::string_view comment);

}  // namespace navsynth::cli
