#include "navsynth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "navsynth/error.hpp"

namespace navsynth {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error("mean of empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("pearson: length mismatch");
  if (xs.size() < 2) throw Error("pearson: need at least 2 points");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("correlation undefined for constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error("spearman: length mismatch");
  if (xs.size() < 3) throw Error("spearman: need at least 3 pairs");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

BootstrapResult bootstrap_mean_ci(std::span<const double> samples, std::size_t resamples,
                                  double level, RngStream& rng) {
  if (samples.empty()) throw Error("bootstrap of empty sample");
  if (resamples == 0) throw Error("bootstrap needs at least one resample");
  BootstrapResult r;
  r.estimate = mean(samples);
  r.resamples = resamples;
  r.seed = rng.seed();
  const std::size_t n = samples.size();
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += samples[rng.below(n)];
    m = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - level) / 2.0;
  r.ci_low = quantile_sorted(means, alpha);
  r.ci_high = quantile_sorted(means, 1.0 - alpha);
  return r;
}

double f1_score(const Confusion& c) {
  const double denom = 2.0 * static_cast<double>(c.tp) + static_cast<double>(c.fp + c.fn);
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(c.tp) / denom;
}

F1Scores f1_micro_macro(std::span<const BinaryDecision> decisions, std::size_t num_labels) {
  std::vector<Confusion> per_label(num_labels);
  for (const auto& d : decisions) {
    if (d.label >= num_labels) throw Error("decision label out of range");
    auto& c = per_label[d.label];
    if (d.predicted && d.actual) ++c.tp;
    else if (d.predicted) ++c.fp;
    else if (d.actual) ++c.fn;
    else ++c.tn;
  }
  Confusion pooled;
  double macro_sum = 0.0;
  for (const auto& c : per_label) {
    pooled.tp += c.tp;
    pooled.fp += c.fp;
    pooled.fn += c.fn;
    pooled.tn += c.tn;
    macro_sum += f1_score(c);
  }
  F1Scores out;
  out.micro = f1_score(pooled);
  out.macro = num_labels == 0 ? 0.0 : macro_sum / static_cast<double>(num_labels);
  return out;
}

double relative_difference(double a, double b) {
  if (a == 0.0) throw Error("relative difference undefined for a = 0");
  return 100.0 * (a - b) / a;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

MannWhitneyResult mann_whitney_u(std::span<const double> first, std::span<const double> second) {
  const std::size_t n1 = first.size();
  const std::size_t n2 = second.size();
  if (n1 == 0 || n2 == 0) throw Error("mann-whitney: empty sample");
  std::vector<double> pooled;
  pooled.reserve(n1 + n2);
  pooled.insert(pooled.end(), first.begin(), first.end());
  pooled.insert(pooled.end(), second.begin(), second.end());
  const auto ranks = average_ranks(pooled);
  double rank_sum_second = 0.0;
  for (std::size_t i = n1; i < n1 + n2; ++i) rank_sum_second += ranks[i];

  // Tie correction term: sum over tie groups of (t^3 - t).
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  const auto dn1 = static_cast<double>(n1);
  const auto dn2 = static_cast<double>(n2);
  const double n = dn1 + dn2;
  MannWhitneyResult r;
  r.u = rank_sum_second - dn2 * (dn2 + 1.0) / 2.0;
  const double mu = dn1 * dn2 / 2.0;
  const double var = dn1 * dn2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0.0) {
    r.z = 0.0;
    r.p_greater = 0.5;
    r.p_two_sided = 1.0;
    return r;
  }
  r.z = (r.u - mu) / std::sqrt(var);
  r.p_greater = 1.0 - normal_cdf(r.z);
  r.p_two_sided = std::min(1.0, 2.0 * std::min(normal_cdf(r.z), 1.0 - normal_cdf(r.z)));
  return r;
}

TrainTestSplit make_split(std::size_t n, std::uint64_t seed, double train_fraction,
                          double validation_fraction) {
  if (train_fraction < 0.0 || validation_fraction < 0.0 || train_fraction + validation_fraction > 1.0) {
    throw Error("make_split: bad fractions");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RngStream rng(seed, 0);
  rng.shuffle(std::span<std::size_t>(order));
  const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * train_fraction));
  const auto n_val = std::min(
      n - n_train, static_cast<std::size_t>(std::llround(static_cast<double>(n) * validation_fraction)));
  TrainTestSplit s;
  s.seed = seed;
  s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.validation.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                      order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.validation.begin(), s.validation.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

}  // namespace navsynth
