#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "navsynth/embedding.hpp"
#include "navsynth/interner.hpp"
#include "navsynth/stats.hpp"

namespace navsynth {

inline constexpr std::size_t kNumTopics = 64;

// Topic ids (< kNumTopics) per labeled article; articles are kept in ascending id order.
class TopicLabelSet {
 public:
  void add(ArticleId article, std::size_t topic);
  const std::vector<ArticleId>& articles() const noexcept { return articles_; }
  // Sorted, unique topic ids of the i-th article in articles().
  const std::vector<std::uint8_t>& topics_at(std::size_t i) const { return topics_[i]; }
  bool has(std::size_t i, std::size_t topic) const;
  std::size_t size() const noexcept { return articles_.size(); }

 private:
  std::vector<ArticleId> articles_;
  std::vector<std::vector<std::uint8_t>> topics_;
};

// TSV "article<TAB>comma-separated-topic-ids"; ids >= 64 raise ParseError.
TopicLabelSet load_topic_labels(const std::filesystem::path& path, Interner& names);

// Dense row-major design matrix with binary targets.
struct LogisticData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<double> y;
};

// Mean log-loss plus l2 / (2 n) * |w|^2; the bias b is not penalised.
double logistic_loss(const LogisticData& data, std::span<const double> w, double b, double l2);
// Gradient of logistic_loss; grad_w has `cols` entries.
void logistic_gradient(const LogisticData& data, std::span<const double> w, double b, double l2,
                       std::span<double> grad_w, double& grad_b);

struct LogisticOptions {
  double l2 = 1.0;
  std::size_t epochs = 100;
  double learning_rate = 0.1;  // halved whenever a step would increase the loss
};

struct LogisticModel {
  std::vector<double> w;
  double b = 0.0;
  double final_loss = 0.0;

  double predict_probability(std::span<const double> features) const;
};

// Full-batch gradient descent from zero weights.
LogisticModel train_logistic(const LogisticData& data, const LogisticOptions& options = {});

struct TopicClassificationResult {
  F1Scores f1;
  std::vector<std::size_t> flagged_topics;  // topics without training positives, predicted all-negative
  std::size_t train_articles = 0;
  std::size_t test_articles = 0;
};

// One-vs-rest logistic regression per topic on embedding features; decisions at
// probability >= 0.5 over the split's test articles. Split indices refer to
// labels.articles(). Throws if a labeled article has no embedding.
TopicClassificationResult topic_classification(const EmbeddingTable& emb, const TopicLabelSet& labels,
                                               const TrainTestSplit& split,
                                               const LogisticOptions& options = {},
                                               std::size_t workers = 1);

}  // namespace navsynth
