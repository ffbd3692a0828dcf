#include "navsynth/diffusion.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "navsynth/error.hpp"
#include "navsynth/stats.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {

std::vector<double> diffusion_samples(const SequenceCorpus& corpus, const EmbeddingTable& emb,
                                      std::size_t k) {
  std::vector<double> out;
  for (const auto& seq : corpus.sequences) {
    if (seq.pages.size() <= k) continue;
    const ArticleId first = seq.pages.front();
    const ArticleId later = seq.pages[k];
    if (!emb.contains(first) || !emb.contains(later)) continue;
    out.push_back(cosine_distance(emb.get(first), emb.get(later)));
  }
  return out;
}

DiffusionCurve diffusion_curve(const SequenceCorpus& corpus, const EmbeddingTable& emb,
                               std::size_t k_max, std::size_t bootstrap_resamples, std::uint64_t seed,
                               double level) {
  if (k_max < 1) throw Error("diffusion_curve: k_max must be >= 1");
  DiffusionCurve curve;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const auto samples = diffusion_samples(corpus, emb, k);
    if (samples.empty()) continue;
    RngStream rng(seed, k);
    const auto boot = bootstrap_mean_ci(samples, bootstrap_resamples, level, rng);
    curve.points.push_back({k, boot.estimate, boot.ci_low, boot.ci_high, samples.size()});
  }
  return curve;
}

DiffusionHistogram diffusion_histogram(const SequenceCorpus& corpus, const EmbeddingTable& emb,
                                       std::size_t k, double bin_width) {
  if (k < 1) throw Error("diffusion_histogram: k must be >= 1");
  if (!(bin_width > 0.0)) throw Error("diffusion_histogram: bin width must be positive");
  DiffusionHistogram h;
  h.bin_width = bin_width;
  const auto bins = static_cast<std::size_t>(std::ceil(2.0 / bin_width - 1e-9));
  h.fractions.assign(bins, 0.0);
  const auto samples = diffusion_samples(corpus, emb, k);
  h.n = samples.size();
  if (samples.empty()) return h;
  std::vector<std::size_t> counts(bins, 0);
  for (double d : samples) {
    auto b = static_cast<std::size_t>(std::floor(d / bin_width));
    ++counts[std::min(b, bins - 1)];
  }
  for (std::size_t b = 0; b < bins; ++b) {
    h.fractions[b] = static_cast<double>(counts[b]) / static_cast<double>(samples.size());
  }
  h.mean = mean(samples);
  return h;
}

PairBaseline random_pair_baseline(const EmbeddingTable& emb, std::size_t num_pairs, RngStream& rng) {
  const auto ids = emb.coverage();
  if (ids.size() < 2) throw Error("random_pair_baseline: need at least 2 embedded articles");
  if (num_pairs == 0) throw Error("random_pair_baseline: num_pairs must be positive");
  std::vector<double> d(num_pairs);
  for (auto& x : d) {
    const std::size_t i = rng.below(ids.size());
    std::size_t j = rng.below(ids.size() - 1);
    if (j >= i) ++j;
    x = cosine_distance(emb.get(ids[i]), emb.get(ids[j]));
  }
  PairBaseline out;
  out.pairs = num_pairs;
  out.mean = mean(d);
  double ss = 0.0;
  for (double x : d) ss += (x - out.mean) * (x - out.mean);
  const double sd = num_pairs > 1 ? std::sqrt(ss / static_cast<double>(num_pairs - 1)) : 0.0;
  out.std_error = sd / std::sqrt(static_cast<double>(num_pairs));
  out.ci_low = out.mean - 1.959963984540054 * out.std_error;
  out.ci_high = out.mean + 1.959963984540054 * out.std_error;
  return out;
}

std::string format_curve_csv(const DiffusionCurve& curve, std::string_view comment) {
  std::string out = comment_line(comment);
  out += "k,mean,ci_low,ci_high,n\n";
  for (const auto& p : curve.points) {
    out += fmt::format("{},{:.9f},{:.9f},{:.9f},{}\n", p.k, p.mean, p.ci_low, p.ci_high, p.n);
  }
  return out;
}

std::string format_histogram_csv(const DiffusionHistogram& hist, std::string_view comment) {
  std::string out = comment_line(comment);
  out += "bin_low,bin_high,fraction\n";
  for (std::size_t b = 0; b < hist.fractions.size(); ++b) {
    const double lo = static_cast<double>(b) * hist.bin_width;
    out += fmt::format("{:.2f},{:.2f},{:.9f}\n", lo, std::min(2.0, lo + hist.bin_width), hist.fractions[b]);
  }
  return out;
}

}  // namespace navsynth
