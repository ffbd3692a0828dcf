#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "navsynth/corpus.hpp"
#include "navsynth/interner.hpp"
#include "navsynth/rng.hpp"

namespace navsynth {

// Approximate reader identity: 128-bit MD5 digest.
struct ReaderKey {
  std::array<std::uint8_t, 16> bytes{};

  std::string to_hex() const;
  static std::optional<ReaderKey> from_hex(std::string_view hex);
  auto operator<=>(const ReaderKey&) const = default;
};

// MD5(ip || user_agent). The concatenation has no separator, so ("a","bc") and
// ("ab","c") map to the same key.
ReaderKey reader_key(std::string_view ip, std::string_view user_agent);

// True if user_agent contains any deny-list entry as a substring.
bool is_denied_agent(std::string_view user_agent, std::span<const std::string> deny_list);

struct PageviewEvent {
  ReaderKey reader;
  std::int64_t timestamp_ms = 0;
  ArticleId article = 0;
  ArticleId referrer = kNoArticle;
};

// "reader_key_hex<TAB>timestamp_ms<TAB>article<TAB>referrer_or_dash".
std::vector<PageviewEvent> load_pageview_events(const std::filesystem::path& path, Interner& names);

// A reader's session tree; node 0 is the root and parents precede children.
struct NavigationTree {
  static constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

  struct Node {
    ArticleId article = 0;
    std::int64_t timestamp_ms = 0;
    std::size_t parent = kNoParent;
    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
  // Indices of nodes without children, ascending.
  std::vector<std::size_t> leaves() const;
  // Edges on the longest root-to-leaf path.
  std::size_t depth() const;
  // Root-to-node article path.
  std::vector<ArticleId> path_to(std::size_t node) const;

  bool operator==(const NavigationTree&) const = default;
};

struct SessionOptions {
  // A child is not attached to a parent viewed longer ago than this.
  std::int64_t inactivity_cutoff_ms = 60LL * 60 * 1000;
};

// Stitches pageviews into trees. Events may interleave readers but must be
// time-ordered within each reader (Error "unsorted input" otherwise). An event
// whose referrer matches an earlier view by the same reader becomes a child of
// the most recent such view; anything else (no referrer, unseen referrer,
// self-referral, timed-out parent) starts a new tree. Trees are returned in the
// order of their root events.
std::vector<NavigationTree> build_trees(std::span<const PageviewEvent> events,
                                        const SessionOptions& options = {});

// One root-to-leaf path chosen uniformly over leaves; nullopt for single-node trees.
std::optional<NavigationSequence> sample_root_to_leaf(const NavigationTree& tree, RngStream& rng);

// Tree i is sampled with RngStream(seed, i). The result has kind Logs.
SequenceCorpus sequences_from_trees(std::span<const NavigationTree> trees, std::uint64_t seed);

}  // namespace navsynth
