#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "navsynth/rng.hpp"

namespace navsynth {

// Ranks starting at 1; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation. Throws if either side is constant or sizes differ.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Spearman's rho: Pearson correlation of average-ranked data.
// Requires equal lengths >= 3 and non-constant inputs.
double spearman(std::span<const double> xs, std::span<const double> ys);

// Linear-interpolated quantile of already sorted data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

double mean(std::span<const double> values);

struct BootstrapResult {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t resamples = 0;
  std::uint64_t seed = 0;
};

// Percentile bootstrap interval for the mean.
BootstrapResult bootstrap_mean_ci(std::span<const double> samples, std::size_t resamples,
                                  double level, RngStream& rng);

struct BinaryDecision {
  std::size_t label = 0;
  bool predicted = false;
  bool actual = false;
};

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
};

// F1 of one confusion matrix; 0 when precision and recall are both undefined.
double f1_score(const Confusion& c);

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

// Micro pools TP/FP/FN across labels; macro averages per-label F1 over all
// `num_labels` labels, with F1 = 0 for labels that never occur or are never predicted.
F1Scores f1_micro_macro(std::span<const BinaryDecision> decisions, std::size_t num_labels = 64);

// Percentage relative difference 100 * (a - b) / a. Throws when a == 0.
double relative_difference(double a, double b);

struct MannWhitneyResult {
  double u = 0.0;          // U statistic of the second sample
  double z = 0.0;          // normal approximation, tie corrected
  double p_greater = 1.0;  // one-sided p for "second sample stochastically larger"
  double p_two_sided = 1.0;
};

MannWhitneyResult mann_whitney_u(std::span<const double> first, std::span<const double> second);

double normal_cdf(double z);

// Disjoint train/validation/test index sets covering [0, n), drawn by a seeded
// shuffle. Sizes are round(n * train), round(n * validation) and the rest.
struct TrainTestSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

TrainTestSplit make_split(std::size_t n, std::uint64_t seed, double train_fraction = 0.8,
                          double validation_fraction = 0.1);

}  // namespace navsynth
