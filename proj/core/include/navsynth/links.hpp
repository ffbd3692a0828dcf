#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "navsynth/corpus.hpp"
#include "navsynth/graph.hpp"

namespace navsynth {

struct LinkPair {
  ArticleId source = 0;
  ArticleId target = 0;
  auto operator<=>(const LinkPair&) const = default;
};

// Labels for link prediction. Both sets are sorted and disjoint, and neither
// contains an edge of the old graph.
struct LabeledLinkSet {
  std::vector<LinkPair> positives;
  std::vector<LinkPair> negatives;

  bool is_positive(LinkPair p) const;
  bool is_negative(LinkPair p) const;
};

// Number of corpus sequences in which `source` occurs at some position strictly
// before an occurrence of `target`, for every ordered pair (source != target)
// where `source` is in `sources` or `target` is in `targets`.
std::unordered_map<std::uint64_t, std::uint32_t> count_indirect_paths(
    const SequenceCorpus& corpus, std::span<const ArticleId> sources,
    std::span<const ArticleId> targets);

// Positives: links of new_graph absent from old_graph with at least `min_paths`
// sequences visiting the source before the target. Negatives: non-edges of the
// old graph sharing a source or target with some positive, not themselves
// positive, with the same path support. Throws when no positive qualifies.
LabeledLinkSet build_added_links(const HyperlinkGraph& old_graph, const HyperlinkGraph& new_graph,
                                 const SequenceCorpus& reference, std::size_t min_paths = 10);

// N(s): sequences starting at s. N(s, t): those that visit t at a later position.
class PathProportionIndex {
 public:
  explicit PathProportionIndex(const SequenceCorpus& corpus);

  std::uint64_t starts(ArticleId s) const noexcept;
  std::uint64_t reaches(ArticleId s, ArticleId t) const noexcept;
  // N(s, t) / N(s), or nullopt when N(s) = 0.
  std::optional<double> proportion(ArticleId s, ArticleId t) const noexcept;

 private:
  std::unordered_map<ArticleId, std::uint64_t> starts_;
  std::unordered_map<std::uint64_t, std::uint64_t> reaches_;
};

std::optional<double> path_proportion(const SequenceCorpus& corpus, ArticleId s, ArticleId t);

struct RankedLink {
  LinkPair link;
  double proportion = 0.0;
};

// Scores each candidate, drops those with N(s) = 0, and sorts by proportion
// descending with ties in ascending (source, target) order.
std::vector<RankedLink> rank_links(const PathProportionIndex& index,
                                   std::span<const LinkPair> candidates);

struct PrecisionAtK {
  std::size_t k = 0;
  std::size_t cutoff = 0;  // min(k, ranked length)
  double precision = 0.0;  // positives in the top `cutoff` / cutoff
  bool truncated = false;  // k exceeded the ranked length
};

std::vector<PrecisionAtK> precision_at_k(std::span<const RankedLink> ranked,
                                         const LabeledLinkSet& labels, std::span<const std::size_t> ks);

}  // namespace navsynth
