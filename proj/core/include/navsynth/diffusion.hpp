#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "navsynth/corpus.hpp"
#include "navsynth/embedding.hpp"
#include "navsynth/rng.hpp"

namespace navsynth {

// Cosine distances between pages[0] and pages[k] for every sequence longer than
// k whose two endpoints are both embedded (other sequences are skipped for this k).
std::vector<double> diffusion_samples(const SequenceCorpus& corpus, const EmbeddingTable& emb,
                                      std::size_t k);

struct DiffusionPoint {
  std::size_t k = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
};

struct DiffusionCurve {
  std::vector<DiffusionPoint> points;  // ascending k; steps with no eligible sequence omitted
};

// Mean distance per k = 1..k_max with a percentile bootstrap CI over sequences.
// Step k resamples with RngStream(seed, k).
DiffusionCurve diffusion_curve(const SequenceCorpus& corpus, const EmbeddingTable& emb,
                               std::size_t k_max, std::size_t bootstrap_resamples = 1000,
                               std::uint64_t seed = 0, double level = 0.95);

struct DiffusionHistogram {
  double bin_width = 0.02;
  std::vector<double> fractions;  // bins [i*w, (i+1)*w) over [0, 2]; 2.0 falls in the last bin
  double mean = 0.0;              // of the unbinned distances
  std::size_t n = 0;
};

DiffusionHistogram diffusion_histogram(const SequenceCorpus& corpus, const EmbeddingTable& emb,
                                       std::size_t k, double bin_width = 0.02);

struct PairBaseline {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // normal-approximation 95% interval
  double ci_high = 0.0;
  std::size_t pairs = 0;
};

// Mean distance between two distinct articles drawn uniformly from the table.
PairBaseline random_pair_baseline(const EmbeddingTable& emb, std::size_t num_pairs, RngStream& rng);

// "k,mean,ci_low,ci_high,n"
std::string format_curve_csv(const DiffusionCurve& curve, std::string_view comment = {});
// "bin_low,bin_high,fraction"
std::string format_histogram_csv(const DiffusionHistogram& hist, std::string_view comment = {});

}  // namespace navsynth
