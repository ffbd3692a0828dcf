#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "navsynth/corpus.hpp"
#include "navsynth/embedding.hpp"
#include "navsynth/graph.hpp"
#include "navsynth/interner.hpp"
#include "navsynth/relatedness.hpp"

namespace navsynth {

// Parameters of a synthetic ground-truth world. Nodes sit on a ring; each node
// links to `near_links` ring neighbours (within `near_window`) and to random
// distant nodes. A first-order row favours near links; with probability
// memory_strength the next step instead follows a preferred successor chosen
// per (previous, current) pair, which plants second-order memory.
struct PlantedWorldSpec {
  std::size_t num_nodes = 2000;
  std::size_t out_degree = 8;
  std::size_t near_links = 6;
  std::size_t near_window = 10;
  double near_decay = 3.0;    // near weight exp(-(ring_distance - 1) / near_decay)
  double far_weight = 0.05;   // weight of each distant link
  double memory_strength = 0.0;
  std::size_t corpus_size = 100000;
  std::size_t min_length = 2;
  double mean_extra_length = 2.0;  // geometric number of extra pages
  std::size_t max_length = 20;
  std::size_t embedding_dim = 16;
  double embedding_noise = 0.1;
  std::size_t added_links = 200;   // candidate new links in new_graph
  std::uint64_t seed = 1;

  void validate() const;
};

struct PlantedWorld {
  PlantedWorldSpec spec;
  Interner names;
  HyperlinkGraph graph;
  HyperlinkGraph new_graph;        // graph plus added links
  ClickstreamTable clickstream;    // bigram counts of `corpus`
  SequenceCorpus corpus;           // kind Logs
  EmbeddingTable semantic;         // ring position plus noise
  std::vector<double> row_weights; // first-order probabilities aligned with graph.targets()

  // True first-order probability of s -> t (0 if not an edge).
  double row_probability(ArticleId s, ArticleId t) const;
  // Planted preferred successor of `current` after `previous`.
  ArticleId preferred_successor(ArticleId previous, ArticleId current) const;
  std::size_t ring_distance(ArticleId a, ArticleId b) const;
  // Topic id (< 64) of a node: its ring sector.
  std::size_t topic_of(ArticleId v) const;
};

PlantedWorld generate_planted_world(const PlantedWorldSpec& spec);

// Pairs scored by ring proximity (higher = more related), sampled with RngStream(seed, 0).
std::vector<RelatednessPair> planted_relatedness_pairs(const PlantedWorld& world, std::size_t count,
                                                       std::uint64_t seed);

}  // namespace navsynth
