#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "navsynth/corpus.hpp"
#include "navsynth/embedding.hpp"

namespace navsynth {

// Skip-gram with negative sampling over navigation sequences (pages as tokens).
struct SgnsOptions {
  std::size_t dimension = 128;
  std::size_t window = 5;       // maximum; each centre draws an effective window in [1, window]
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.05;  // decays linearly towards learning_rate * 1e-4
  double unigram_power = 0.75;
  std::size_t min_length = 2;   // shorter sequences are ignored
  std::uint64_t seed = 0;
  std::size_t workers = 1;      // > 1 trains lock-free and is not reproducible
};

struct SgnsResult {
  EmbeddingTable embeddings;
  std::vector<double> epoch_loss;  // mean pair loss observed during each epoch
  std::size_t sequences_used = 0;
  std::size_t tokens = 0;
};

// Throws if no sequence meets options.min_length.
SgnsResult train_sequence_embeddings(const SequenceCorpus& corpus, const SgnsOptions& options = {});

// Loss of one (centre, context) pair with its sampled negatives:
//   -log sigmoid(u . v_pos) - sum_n log sigmoid(-u . v_n)
double sgns_pair_loss(std::span<const double> u, std::span<const double> pos,
                      std::span<const std::span<const double>> negs);

// Analytic gradient of sgns_pair_loss. grad_negs must hold one span per negative.
void sgns_pair_gradient(std::span<const double> u, std::span<const double> pos,
                        std::span<const std::span<const double>> negs, std::span<double> grad_u,
                        std::span<double> grad_pos, std::span<const std::span<double>> grad_negs);

}  // namespace navsynth
