#include "navsynth/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "navsynth/error.hpp"
#include "navsynth/rng.hpp"

namespace navsynth {
namespace {

double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

// log sigmoid(x) without overflow for large |x|.
double log_sigmoid(double x) noexcept {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double dot_raw(const double* a, const double* b, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

struct Vocabulary {
  std::vector<ArticleId> ids;            // dense index -> article
  std::vector<std::uint32_t> dense_of;   // article -> dense index
  std::vector<std::uint64_t> frequency;
  std::vector<double> noise_cdf;
};

class Trainer {
 public:
  Trainer(const SequenceCorpus& corpus, const SgnsOptions& opt) : opt_(opt) {
    for (std::size_t i = 0; i < corpus.sequences.size(); ++i) {
      if (corpus.sequences[i].size() >= opt.min_length) used_.push_back(i);
    }
    if (used_.empty()) throw Error("train_sequence_embeddings: no sequence of sufficient length");
    ArticleId max_id = 0;
    for (std::size_t i : used_) {
      for (ArticleId a : corpus.sequences[i].pages) max_id = std::max(max_id, a);
    }
    vocab_.dense_of.assign(static_cast<std::size_t>(max_id) + 1, kUnseen);
    for (std::size_t i : used_) {
      for (ArticleId a : corpus.sequences[i].pages) {
        if (vocab_.dense_of[a] == kUnseen) {
          vocab_.dense_of[a] = static_cast<std::uint32_t>(vocab_.ids.size());
          vocab_.ids.push_back(a);
          vocab_.frequency.push_back(0);
        }
        ++vocab_.frequency[vocab_.dense_of[a]];
        ++tokens_;
      }
    }
    double acc = 0.0;
    for (std::uint64_t f : vocab_.frequency) {
      acc += std::pow(static_cast<double>(f), opt.unigram_power);
      vocab_.noise_cdf.push_back(acc);
    }
    const std::size_t v = vocab_.ids.size();
    const std::size_t d = opt.dimension;
    input_.assign(v * d, 0.0);
    output_.assign(v * d, 0.0);
    RngStream init(opt.seed, 0);
    for (auto& x : input_) x = (init.uniform() - 0.5) / static_cast<double>(d);
    corpus_ = &corpus;
  }

  SgnsResult run() {
    const std::size_t workers = std::max<std::size_t>(1, opt_.workers);
    const double total_work = static_cast<double>(tokens_) * static_cast<double>(opt_.epochs);
    SgnsResult result;
    for (std::size_t epoch = 0; epoch < opt_.epochs; ++epoch) {
      std::vector<double> loss(workers, 0.0);
      std::vector<std::uint64_t> pairs(workers, 0);
      const std::size_t per = (used_.size() + workers - 1) / workers;
      auto job = [&](std::size_t w) {
        RngStream rng(opt_.seed, 1 + epoch * workers + w);
        const std::size_t lo = std::min(used_.size(), w * per);
        const std::size_t hi = std::min(used_.size(), lo + per);
        std::uint64_t local_tokens = 0;
        for (std::size_t k = lo; k < hi; ++k) {
          const double progress =
              (static_cast<double>(epoch) * static_cast<double>(tokens_) +
               static_cast<double>(local_tokens) * static_cast<double>(workers)) /
              total_work;
          const double lr = opt_.learning_rate * std::max(1e-4, 1.0 - progress);
          const auto& pages = corpus_->sequences[used_[k]].pages;
          train_sequence(pages, lr, rng, loss[w], pairs[w]);
          local_tokens += pages.size();
        }
      };
      if (workers == 1) {
        job(0);
      } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(job, w);
        for (auto& t : threads) t.join();
      }
      double l = 0.0;
      std::uint64_t p = 0;
      for (std::size_t w = 0; w < workers; ++w) {
        l += loss[w];
        p += pairs[w];
      }
      result.epoch_loss.push_back(p == 0 ? 0.0 : l / static_cast<double>(p));
    }
    result.embeddings = EmbeddingTable(opt_.dimension);
    for (std::size_t i = 0; i < vocab_.ids.size(); ++i) {
      result.embeddings.set(vocab_.ids[i],
                            std::span<const double>(&input_[i * opt_.dimension], opt_.dimension));
    }
    result.sequences_used = used_.size();
    result.tokens = tokens_;
    return result;
  }

 private:
  static constexpr std::uint32_t kUnseen = 0xffffffffu;

  std::uint32_t draw_negative(RngStream& rng) const {
    const double u = rng.uniform() * vocab_.noise_cdf.back();
    const auto it = std::upper_bound(vocab_.noise_cdf.begin(), vocab_.noise_cdf.end(), u);
    return static_cast<std::uint32_t>(
        std::min<std::size_t>(static_cast<std::size_t>(it - vocab_.noise_cdf.begin()),
                              vocab_.ids.size() - 1));
  }

  void train_sequence(const std::vector<ArticleId>& pages, double lr, RngStream& rng, double& loss,
                      std::uint64_t& pairs) {
    const std::size_t d = opt_.dimension;
    std::vector<double> grad_in(d);
    const std::size_t n = pages.size();
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t reach = 1 + rng.below(std::max<std::size_t>(opt_.window, 1));
      const std::uint32_t centre = vocab_.dense_of[pages[c]];
      double* u = &input_[static_cast<std::size_t>(centre) * d];
      const std::size_t lo = c >= reach ? c - reach : 0;
      const std::size_t hi = std::min(n - 1, c + reach);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == c) continue;
        const std::uint32_t ctx = vocab_.dense_of[pages[j]];
        std::fill(grad_in.begin(), grad_in.end(), 0.0);
        for (std::size_t s = 0; s <= opt_.negatives; ++s) {
          std::uint32_t target = ctx;
          double label = 1.0;
          if (s > 0) {
            target = draw_negative(rng);
            if (target == ctx) continue;
            label = 0.0;
          }
          double* v = &output_[static_cast<std::size_t>(target) * d];
          const double score = dot_raw(u, v, d);
          loss -= label > 0.0 ? log_sigmoid(score) : log_sigmoid(-score);
          const double g = (label - sigmoid(score)) * lr;
          for (std::size_t i = 0; i < d; ++i) {
            grad_in[i] += g * v[i];
            v[i] += g * u[i];
          }
        }
        for (std::size_t i = 0; i < d; ++i) u[i] += grad_in[i];
        ++pairs;
      }
    }
  }

  SgnsOptions opt_;
  const SequenceCorpus* corpus_ = nullptr;
  std::vector<std::size_t> used_;
  Vocabulary vocab_;
  std::uint64_t tokens_ = 0;
  std::vector<double> input_;
  std::vector<double> output_;
};

}  // namespace

SgnsResult train_sequence_embeddings(const SequenceCorpus& corpus, const SgnsOptions& options) {
  if (options.dimension == 0) throw Error("train_sequence_embeddings: dimension must be positive");
  if (options.epochs == 0) throw Error("train_sequence_embeddings: epochs must be positive");
  Trainer trainer(corpus, options);
  return trainer.run();
}

double sgns_pair_loss(std::span<const double> u, std::span<const double> pos,
                      std::span<const std::span<const double>> negs) {
  double loss = -log_sigmoid(dot_raw(u.data(), pos.data(), u.size()));
  for (const auto& v : negs) loss -= log_sigmoid(-dot_raw(u.data(), v.data(), u.size()));
  return loss;
}

void sgns_pair_gradient(std::span<const double> u, std::span<const double> pos,
                        std::span<const std::span<const double>> negs, std::span<double> grad_u,
                        std::span<double> grad_pos, std::span<const std::span<double>> grad_negs) {
  const std::size_t d = u.size();
  if (pos.size() != d || grad_u.size() != d || grad_pos.size() != d || grad_negs.size() != negs.size()) {
    throw Error("sgns_pair_gradient: size mismatch");
  }
  // d/dx [-log sigmoid(x)] = sigmoid(x) - 1 ; d/dx [-log sigmoid(-x)] = sigmoid(x)
  const double gp = sigmoid(dot_raw(u.data(), pos.data(), d)) - 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    grad_u[i] = gp * pos[i];
    grad_pos[i] = gp * u[i];
  }
  for (std::size_t n = 0; n < negs.size(); ++n) {
    const double gn = sigmoid(dot_raw(u.data(), negs[n].data(), d));
    for (std::size_t i = 0; i < d; ++i) {
      grad_u[i] += gn * negs[n][i];
      grad_negs[n][i] = gn * u[i];
    }
  }
}

}  // namespace navsynth
