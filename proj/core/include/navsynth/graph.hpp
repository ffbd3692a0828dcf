#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "navsynth/corpus.hpp"
#include "navsynth/interner.hpp"
#include "navsynth/rng.hpp"

namespace navsynth {

using Edge = std::pair<ArticleId, ArticleId>;

// Immutable directed graph in CSR form. Successor lists are sorted and
// deduplicated, contain no self-loops, and every endpoint is < num_nodes().
class HyperlinkGraph {
 public:
  HyperlinkGraph() = default;

  struct BuildStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_collapsed = 0;
  };

  // Normalizes an arbitrary edge list. num_nodes is raised to cover all endpoints.
  static HyperlinkGraph from_edges(std::size_t num_nodes, std::vector<Edge> edges,
                                   BuildStats* stats = nullptr);

  // Adopts CSR arrays that already satisfy the class invariants (checked).
  static HyperlinkGraph from_csr(std::vector<std::uint64_t> offsets, std::vector<ArticleId> targets);

  std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return targets_.size(); }
  std::span<const ArticleId> successors(ArticleId v) const noexcept;
  std::size_t out_degree(ArticleId v) const noexcept { return successors(v).size(); }
  bool has_edge(ArticleId s, ArticleId t) const noexcept;
  std::vector<Edge> edges() const;

  const std::vector<std::uint64_t>& offsets() const noexcept { return offsets_; }
  const std::vector<ArticleId>& targets() const noexcept { return targets_; }

  bool operator==(const HyperlinkGraph&) const = default;

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<ArticleId> targets_;
};

struct EdgeListStats {
  std::size_t lines = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

// Reads "source<TAB>target" lines (optionally .gz). Blank lines and lines
// starting with '#' are ignored. Names are interned into `names`; the graph
// covers every id interned so far.
HyperlinkGraph load_edge_list(const std::filesystem::path& path, Interner& names,
                              EdgeListStats* stats = nullptr);

struct ClickEntry {
  ArticleId source = 0;
  ArticleId target = 0;
  std::uint64_t count = 0;
  bool operator==(const ClickEntry&) const = default;
};

// Aggregate (source, target) click counts. Entries are sorted by (source,
// target), unique, and every count is >= 1.
class ClickstreamTable {
 public:
  ClickstreamTable() = default;

  // Merges duplicate pairs by summing; zero counts are rejected.
  static ClickstreamTable from_entries(std::vector<ClickEntry> entries);

  std::span<const ClickEntry> entries() const noexcept { return entries_; }
  std::span<const ClickEntry> entries_from(ArticleId source) const noexcept;
  std::optional<std::uint64_t> count(ArticleId source, ArticleId target) const noexcept;
  std::uint64_t total_clicks() const noexcept { return total_; }
  std::uint64_t source_total(ArticleId source) const noexcept;
  std::uint64_t target_total(ArticleId target) const noexcept;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  // One past the largest id mentioned in any entry.
  std::size_t id_bound() const noexcept { return source_totals_.size(); }

  bool operator==(const ClickstreamTable& o) const { return entries_ == o.entries_; }

 private:
  std::vector<ClickEntry> entries_;
  std::vector<std::uint64_t> source_totals_;
  std::vector<std::uint64_t> target_totals_;
  std::uint64_t total_ = 0;
};

struct ClickstreamStats {
  std::size_t rows = 0;
  std::size_t kept = 0;
  std::size_t skipped_type = 0;
  std::size_t self_loops_dropped = 0;
};

// Reads public-dump rows "prev<TAB>curr<TAB>type<TAB>count", skipping blank and
// '#' lines. Only rows whose type is in `link_types` are kept.
ClickstreamTable load_clickstream(const std::filesystem::path& path, Interner& names,
                                  const std::set<std::string, std::less<>>& link_types = {"link"},
                                  ClickstreamStats* stats = nullptr);

// Keeps exactly the entries with count > threshold.
ClickstreamTable apply_k_anonymity(const ClickstreamTable& table, std::uint64_t threshold = 10);

enum class TransitionKind { uniform, weighted };

struct TransitionBuildStats {
  std::uint64_t kept_clicks = 0;
  std::uint64_t dropped_clicks = 0;  // click mass on pairs that are not graph edges
  std::size_t dropped_pairs = 0;
};

// Markov-1 dynamics: per node, successor probabilities plus an optional stop
// probability. For every node with successors, successor mass + stop == 1.
// Nodes without successors are terminal.
class TransitionModel {
 public:
  TransitionKind kind() const noexcept { return kind_; }
  DatasetKind dataset_kind() const noexcept { return dataset_kind_; }
  void set_dataset_kind(DatasetKind k) noexcept { dataset_kind_ = k; }

  std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const ArticleId> successors(ArticleId v) const noexcept;
  std::span<const double> probabilities(ArticleId v) const noexcept;
  double stop_probability(ArticleId v) const noexcept {
    return v < stop_.size() ? stop_[v] : 0.0;
  }
  bool is_terminal(ArticleId v) const noexcept { return successors(v).empty(); }
  bool contains(ArticleId v) const noexcept { return v < num_nodes(); }
  bool has_transition(ArticleId s, ArticleId t) const noexcept;
  bool has_stops() const noexcept { return !stop_.empty(); }

  // Draws a successor from the row conditioned on not stopping. v must not be terminal.
  ArticleId sample_successor(ArticleId v, RngStream& rng) const noexcept;

  // Copy with the given per-node stop probabilities (values in [0,1]); successor
  // mass of each row is rescaled to 1 - stop.
  TransitionModel with_stops(std::span<const double> stops) const;

  const TransitionBuildStats& build_stats() const noexcept { return stats_; }

 private:
  friend TransitionModel build_transition_model(const HyperlinkGraph&, const ClickstreamTable*, bool);

  TransitionKind kind_ = TransitionKind::uniform;
  DatasetKind dataset_kind_ = DatasetKind::graph;
  std::vector<std::uint64_t> offsets_;
  std::vector<ArticleId> targets_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;  // per row, running sum of conditional probabilities
  std::vector<double> stop_;
  TransitionBuildStats stats_;
};

// weights == nullptr gives the uniform model (1/outdegree). Otherwise probabilities
// are count / kept per-source total; with restrict_to_graph, pairs that are not
// graph edges are dropped and their mass reported in build_stats().
// Throws Error("empty transition model") when weights keep no entries.
TransitionModel build_transition_model(const HyperlinkGraph& graph, const ClickstreamTable* weights,
                                       bool restrict_to_graph = true);

}  // namespace navsynth
