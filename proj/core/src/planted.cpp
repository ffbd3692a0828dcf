#include "navsynth/planted.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "navsynth/error.hpp"
#include "navsynth/rng.hpp"

namespace navsynth {

namespace {

// Disjoint RngStream index ranges per generation phase.
constexpr std::uint64_t kGraphStream = 1ULL << 40;
constexpr std::uint64_t kCorpusStream = 2ULL << 40;
constexpr std::uint64_t kEmbeddingStream = 3ULL << 40;
constexpr std::uint64_t kAddedLinkStream = 4ULL << 40;

std::uint64_t mix3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t x = a ^ (b * 0x9e3779b97f4a7c15ULL) ^ (c * 0xc2b2ae3d27d4eb4fULL);
  splitmix64(x);
  return splitmix64(x);
}

ArticleId sample_row(std::span<const ArticleId> succ, std::span<const double> probs, RngStream& rng) {
  double u = rng.uniform();
  for (std::size_t i = 0; i < succ.size(); ++i) {
    u -= probs[i];
    if (u < 0.0) return succ[i];
  }
  return succ.back();
}

}  // namespace

void PlantedWorldSpec::validate() const {
  if (num_nodes < 3) throw Error("planted world: need at least 3 nodes");
  if (out_degree == 0 || out_degree >= num_nodes) throw Error("planted world: bad out_degree");
  if (near_links > out_degree) throw Error("planted world: near_links exceeds out_degree");
  if (near_window == 0 || 2 * near_window >= num_nodes || near_links > 2 * near_window) {
    throw Error("planted world: near_window too small or too large");
  }
  if (out_degree - near_links > num_nodes - 1 - 2 * near_window) {
    throw Error("planted world: not enough distant nodes");
  }
  if (!(memory_strength >= 0.0 && memory_strength <= 1.0)) {
    throw Error("planted world: memory_strength must be in [0,1]");
  }
  if (min_length < 2 || max_length < min_length) throw Error("planted world: bad length range");
  if (mean_extra_length < 0.0) throw Error("planted world: mean_extra_length must be >= 0");
  if (embedding_dim < 2) throw Error("planted world: embedding_dim must be >= 2");
}

std::size_t PlantedWorld::ring_distance(ArticleId a, ArticleId b) const {
  const std::size_t n = spec.num_nodes;
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

std::size_t PlantedWorld::topic_of(ArticleId v) const {
  const std::size_t n = spec.num_nodes;
  return n >= 64 ? (static_cast<std::size_t>(v) * 64) / n : v % 64;
}

double PlantedWorld::row_probability(ArticleId s, ArticleId t) const {
  const auto succ = graph.successors(s);
  const auto it = std::lower_bound(succ.begin(), succ.end(), t);
  if (it == succ.end() || *it != t) return 0.0;
  return row_weights[graph.offsets()[s] + static_cast<std::size_t>(it - succ.begin())];
}

ArticleId PlantedWorld::preferred_successor(ArticleId previous, ArticleId current) const {
  const auto succ = graph.successors(current);
  std::vector<ArticleId> near;
  for (ArticleId t : succ) {
    if (ring_distance(current, t) <= spec.near_window) near.push_back(t);
  }
  const auto& pool = near.empty() ? std::vector<ArticleId>(succ.begin(), succ.end()) : near;
  return pool[mix3(spec.seed, previous, current) % pool.size()];
}

PlantedWorld generate_planted_world(const PlantedWorldSpec& spec) {
  spec.validate();
  PlantedWorld w;
  w.spec = spec;
  const std::size_t n = spec.num_nodes;
  for (std::size_t i = 0; i < n; ++i) w.names.intern(fmt::format("P{:05d}", i));

  // Graph and first-order rows.
  std::vector<Edge> edges;
  edges.reserve(n * spec.out_degree);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(spec.seed, kGraphStream + i);
    std::vector<long long> offsets;
    for (long long k = 1; k <= static_cast<long long>(spec.near_window); ++k) {
      offsets.push_back(k);
      offsets.push_back(-k);
    }
    rng.shuffle(std::span<long long>(offsets));
    std::vector<ArticleId> chosen;
    for (std::size_t k = 0; k < spec.near_links; ++k) {
      const long long j = (static_cast<long long>(i) + offsets[k] + static_cast<long long>(n)) %
                          static_cast<long long>(n);
      chosen.push_back(static_cast<ArticleId>(j));
    }
    while (chosen.size() < spec.out_degree) {
      const auto j = static_cast<ArticleId>(rng.below(n));
      const std::size_t d = j > i ? j - i : i - j;
      if (std::min(d, n - d) <= spec.near_window) continue;
      if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      chosen.push_back(j);
    }
    for (ArticleId j : chosen) edges.emplace_back(static_cast<ArticleId>(i), j);
  }
  w.graph = HyperlinkGraph::from_edges(n, edges);
  w.row_weights.resize(w.graph.num_edges());
  for (ArticleId s = 0; s < n; ++s) {
    const auto succ = w.graph.successors(s);
    const std::size_t base = w.graph.offsets()[s];
    double total = 0.0;
    for (std::size_t k = 0; k < succ.size(); ++k) {
      const std::size_t d = w.ring_distance(s, succ[k]);
      const double weight = d <= spec.near_window
                                ? std::exp(-(static_cast<double>(d) - 1.0) / spec.near_decay)
                                : spec.far_weight;
      w.row_weights[base + k] = weight;
      total += weight;
    }
    for (std::size_t k = 0; k < succ.size(); ++k) w.row_weights[base + k] /= total;
  }

  // Reference corpus from the memory process.
  const double p_stop = 1.0 / (1.0 + spec.mean_extra_length);
  w.corpus.kind = DatasetKind::logs;
  w.corpus.sequences.resize(spec.corpus_size);
  std::vector<ClickEntry> bigrams;
  for (std::size_t j = 0; j < spec.corpus_size; ++j) {
    RngStream rng(spec.seed, kCorpusStream + j);
    const std::size_t length =
        std::min(spec.max_length, spec.min_length + static_cast<std::size_t>(rng.geometric(p_stop)));
    auto& pages = w.corpus.sequences[j].pages;
    pages.push_back(static_cast<ArticleId>(rng.below(n)));
    while (pages.size() < length) {
      const ArticleId current = pages.back();
      ArticleId next = kNoArticle;
      if (pages.size() >= 2 && rng.uniform() < spec.memory_strength) {
        next = w.preferred_successor(pages[pages.size() - 2], current);
      } else {
        const std::size_t base = w.graph.offsets()[current];
        const auto succ = w.graph.successors(current);
        next = sample_row(succ, std::span<const double>(w.row_weights).subspan(base, succ.size()), rng);
      }
      bigrams.push_back({current, next, 1});
      pages.push_back(next);
    }
  }
  w.clickstream = ClickstreamTable::from_entries(std::move(bigrams));

  // Semantic embedding: ring angle in the first two coordinates plus noise.
  w.semantic = EmbeddingTable(spec.embedding_dim);
  std::vector<double> vec(spec.embedding_dim);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(spec.seed, kEmbeddingStream + i);
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    for (auto& x : vec) x = spec.embedding_noise * rng.normal();
    vec[0] += std::cos(theta);
    vec[1] += std::sin(theta);
    w.semantic.set(static_cast<ArticleId>(i), vec);
  }

  // New graph: half nearby non-edges, half distant non-edges.
  std::vector<Edge> added = w.graph.edges();
  RngStream rng(spec.seed, kAddedLinkStream);
  std::size_t made = 0;
  std::size_t attempts = 0;
  while (made < spec.added_links && attempts < 100 * (spec.added_links + 1)) {
    ++attempts;
    const auto s = static_cast<ArticleId>(rng.below(n));
    ArticleId t = 0;
    if (made % 2 == 0) {
      const auto k = static_cast<long long>(2 + rng.below(std::max<std::size_t>(spec.near_window - 1, 1)));
      const long long sign = rng.below(2) == 0 ? 1 : -1;
      t = static_cast<ArticleId>((static_cast<long long>(s) + sign * k + static_cast<long long>(n)) %
                                 static_cast<long long>(n));
    } else {
      t = static_cast<ArticleId>(rng.below(n));
    }
    if (s == t || w.graph.has_edge(s, t)) continue;
    added.emplace_back(s, t);
    ++made;
  }
  w.new_graph = HyperlinkGraph::from_edges(n, std::move(added));
  return w;
}

std::vector<RelatednessPair> planted_relatedness_pairs(const PlantedWorld& world, std::size_t count,
                                                       std::uint64_t seed) {
  const std::size_t n = world.spec.num_nodes;
  const std::size_t half = n / 2;
  RngStream rng(seed, 0);
  std::vector<RelatednessPair> pairs;
  pairs.reserve(count);
  while (pairs.size() < count) {
    const auto a = static_cast<ArticleId>(rng.below(n));
    const std::size_t span = pairs.size() % 2 == 0 ? std::min(half, 3 * world.spec.near_window) : half;
    const std::size_t d = 1 + rng.below(span);
    const auto b = static_cast<ArticleId>((a + d) % n);
    if (a == b) continue;
    const double score =
        100.0 * (1.0 - static_cast<double>(world.ring_distance(a, b)) / static_cast<double>(half));
    pairs.push_back({a, b, score});
  }
  return pairs;
}

}  // namespace navsynth
