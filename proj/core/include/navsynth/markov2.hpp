#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "navsynth/graph.hpp"
#include "navsynth/mixing.hpp"

namespace navsynth {

// Second-order count model: N(t | s1, s2) over observed triples, no smoothing.
class Markov2Model {
 public:
  struct Context {
    std::vector<std::pair<ArticleId, std::uint64_t>> targets;  // sorted by target id
    std::uint64_t total = 0;
  };

  void add(const Triple& t, std::uint64_t count = 1);
  // Commutative: merging shards in any order yields the same model.
  void merge(const Markov2Model& other);

  std::uint64_t count(ArticleId s1, ArticleId s2, ArticleId t) const noexcept;
  std::uint64_t context_total(ArticleId s1, ArticleId s2) const noexcept;
  double probability(ArticleId s1, ArticleId s2, ArticleId t) const noexcept;
  const Context* context(ArticleId s1, ArticleId s2) const noexcept;

  std::size_t num_contexts() const noexcept { return contexts_.size(); }
  std::uint64_t total_triples() const noexcept { return total_; }
  bool empty() const noexcept { return contexts_.empty(); }

 private:
  static std::uint64_t key(ArticleId s1, ArticleId s2) noexcept {
    return (static_cast<std::uint64_t>(s1) << 32) | s2;
  }
  std::unordered_map<std::uint64_t, Context> contexts_;
  std::uint64_t total_ = 0;
};

Markov2Model fit_markov2(std::span<const Triple> triples, std::size_t workers = 1);

// Out-neighbours of s2 ordered by (-count, id): counted candidates first by
// descending count, then zero-count candidates, each tie group by ascending id.
std::vector<ArticleId> rank_next(const Markov2Model& model, const HyperlinkGraph& graph,
                                 ArticleId s1, ArticleId s2);

// 1-based position of `target` in rank_next's order, or 0 if not a candidate.
std::size_t rank_of(const Markov2Model& model, const HyperlinkGraph& graph, ArticleId s1,
                    ArticleId s2, ArticleId target);

enum class QueryFilter { all, filtered };

struct MrrResult {
  double mrr = 0.0;
  std::size_t queries = 0;                // after filtering
  std::size_t dropped = 0;                // removed by the filter
  std::vector<double> reciprocal_ranks;   // per kept query, in test order
};

// Filtered mode keeps queries whose (s1, s2) context was observed by every model
// in `reference_models` (which should include `model`). Throws on an empty test
// set or when filtering leaves nothing.
MrrResult evaluate_mrr(const Markov2Model& model, const HyperlinkGraph& graph,
                       std::span<const Triple> test, QueryFilter filter = QueryFilter::all,
                       std::span<const Markov2Model* const> reference_models = {},
                       std::size_t workers = 1);

}  // namespace navsynth
