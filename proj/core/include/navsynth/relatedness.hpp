#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "navsynth/embedding.hpp"
#include "navsynth/interner.hpp"

namespace navsynth {

struct RelatednessPair {
  ArticleId a = 0;
  ArticleId b = 0;
  double score = 0.0;  // human judgement, higher = more related
};

struct RelatednessResult {
  double rho = 0.0;
  std::size_t used = 0;
  std::size_t dropped = 0;  // pairs with an article missing from the embedding
};

// Spearman correlation between cosine similarity and the human score over pairs
// whose two articles are both embedded. Throws if fewer than 3 pairs remain.
RelatednessResult relatedness_eval(const EmbeddingTable& emb, std::span<const RelatednessPair> pairs);

// TSV "entity_a<TAB>entity_b<TAB>score". Names are interned into `names`;
// blank and '#' lines are skipped.
std::vector<RelatednessPair> load_relatedness_pairs(const std::filesystem::path& path, Interner& names);

}  // namespace navsynth
