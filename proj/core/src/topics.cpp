#include "navsynth/topics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "navsynth/error.hpp"
#include "navsynth/parallel.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {
namespace {

double log_sigmoid(double x) noexcept {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) noexcept { return 1.0 / (1.0 + std::exp(-x)); }

double margin(const LogisticData& d, std::size_t r, std::span<const double> w, double b) {
  const double* row = &d.x[r * d.cols];
  double z = b;
  for (std::size_t j = 0; j < d.cols; ++j) z += row[j] * w[j];
  return z;
}

}  // namespace

void TopicLabelSet::add(ArticleId article, std::size_t topic) {
  if (topic >= kNumTopics) throw Error("topic id out of range");
  auto it = std::lower_bound(articles_.begin(), articles_.end(), article);
  const auto idx = static_cast<std::size_t>(it - articles_.begin());
  if (it == articles_.end() || *it != article) {
    articles_.insert(it, article);
    topics_.insert(topics_.begin() + static_cast<std::ptrdiff_t>(idx), std::vector<std::uint8_t>{});
  }
  auto& t = topics_[idx];
  const auto v = static_cast<std::uint8_t>(topic);
  auto pos = std::lower_bound(t.begin(), t.end(), v);
  if (pos == t.end() || *pos != v) t.insert(pos, v);
}

bool TopicLabelSet::has(std::size_t i, std::size_t topic) const {
  const auto& t = topics_[i];
  return std::binary_search(t.begin(), t.end(), static_cast<std::uint8_t>(topic));
}

TopicLabelSet load_topic_labels(const std::filesystem::path& path, Interner& names) {
  LineReader reader(path);
  TopicLabelSet labels;
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 2) throw ParseError(reader.file_name(), reader.line_number(), "expected 2 fields");
    const ArticleId article = names.intern(f[0]);
    for (auto tok : split(f[1], ',')) {
      std::size_t topic = 0;
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), topic);
      if (ec != std::errc() || p != tok.data() + tok.size()) {
        throw ParseError(reader.file_name(), reader.line_number(), "bad topic id");
      }
      if (topic >= kNumTopics) throw ParseError(reader.file_name(), reader.line_number(), "topic id >= 64");
      labels.add(article, topic);
    }
  }
  return labels;
}

double logistic_loss(const LogisticData& data, std::span<const double> w, double b, double l2) {
  if (data.rows == 0) throw Error("logistic_loss: no rows");
  double loss = 0.0;
  for (std::size_t r = 0; r < data.rows; ++r) {
    const double z = margin(data, r, w, b);
    loss -= data.y[r] * log_sigmoid(z) + (1.0 - data.y[r]) * log_sigmoid(-z);
  }
  double sq = 0.0;
  for (double v : w) sq += v * v;
  const auto n = static_cast<double>(data.rows);
  return loss / n + l2 / (2.0 * n) * sq;
}

void logistic_gradient(const LogisticData& data, std::span<const double> w, double b, double l2,
                       std::span<double> grad_w, double& grad_b) {
  if (data.rows == 0) throw Error("logistic_gradient: no rows");
  const auto n = static_cast<double>(data.rows);
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0.0;
  for (std::size_t r = 0; r < data.rows; ++r) {
    const double e = sigmoid(margin(data, r, w, b)) - data.y[r];
    const double* row = &data.x[r * data.cols];
    for (std::size_t j = 0; j < data.cols; ++j) grad_w[j] += e * row[j];
    grad_b += e;
  }
  for (std::size_t j = 0; j < data.cols; ++j) grad_w[j] = grad_w[j] / n + l2 / n * w[j];
  grad_b /= n;
}

double LogisticModel::predict_probability(std::span<const double> features) const {
  double z = b;
  for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * features[j];
  return sigmoid(z);
}

LogisticModel train_logistic(const LogisticData& data, const LogisticOptions& options) {
  LogisticModel m;
  m.w.assign(data.cols, 0.0);
  std::vector<double> gw(data.cols);
  std::vector<double> trial(data.cols);
  double gb = 0.0;
  double lr = options.learning_rate;
  double loss = logistic_loss(data, m.w, m.b, options.l2);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    logistic_gradient(data, m.w, m.b, options.l2, gw, gb);
    for (;;) {
      for (std::size_t j = 0; j < data.cols; ++j) trial[j] = m.w[j] - lr * gw[j];
      const double trial_b = m.b - lr * gb;
      const double next = logistic_loss(data, trial, trial_b, options.l2);
      if (next <= loss || lr < 1e-12) {
        m.w.swap(trial);
        m.b = trial_b;
        loss = next;
        break;
      }
      lr *= 0.5;
    }
  }
  m.final_loss = loss;
  return m;
}

TopicClassificationResult topic_classification(const EmbeddingTable& emb, const TopicLabelSet& labels,
                                               const TrainTestSplit& split,
                                               const LogisticOptions& options, std::size_t workers) {
  const std::size_t dim = emb.dimension();
  for (ArticleId a : labels.articles()) {
    if (!emb.contains(a)) throw Error("topic_classification: labeled article without embedding");
  }
  for (const auto* part : {&split.train, &split.test}) {
    for (std::size_t i : *part) {
      if (i >= labels.size()) throw Error("topic_classification: split index out of range");
    }
  }
  if (split.train.empty() || split.test.empty()) throw Error("topic_classification: empty split");

  LogisticData base;
  base.rows = split.train.size();
  base.cols = dim;
  base.x.reserve(base.rows * dim);
  for (std::size_t i : split.train) {
    const auto v = emb.get(labels.articles()[i]);
    base.x.insert(base.x.end(), v.begin(), v.end());
  }

  std::vector<LogisticModel> models(kNumTopics);
  std::vector<char> flagged(kNumTopics, 0);
  parallel_for(kNumTopics, workers, [&](std::size_t topic) {
    LogisticData d;
    d.rows = base.rows;
    d.cols = base.cols;
    d.y.resize(d.rows);
    bool any = false;
    for (std::size_t r = 0; r < d.rows; ++r) {
      d.y[r] = labels.has(split.train[r], topic) ? 1.0 : 0.0;
      any = any || d.y[r] > 0.0;
    }
    if (!any) {
      flagged[topic] = 1;
      return;
    }
    d.x = base.x;
    models[topic] = train_logistic(d, options);
  });

  std::vector<BinaryDecision> decisions;
  decisions.reserve(split.test.size() * kNumTopics);
  for (std::size_t i : split.test) {
    const auto v = emb.get(labels.articles()[i]);
    for (std::size_t topic = 0; topic < kNumTopics; ++topic) {
      const bool predicted = !flagged[topic] && models[topic].predict_probability(v) >= 0.5;
      decisions.push_back({topic, predicted, labels.has(i, topic)});
    }
  }
  TopicClassificationResult out;
  out.f1 = f1_micro_macro(decisions, kNumTopics);
  for (std::size_t t = 0; t < kNumTopics; ++t) {
    if (flagged[t]) out.flagged_topics.push_back(t);
  }
  out.train_articles = split.train.size();
  out.test_articles = split.test.size();
  return out;
}

}  // namespace navsynth
