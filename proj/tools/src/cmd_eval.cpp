#include <fmt/format.h>

#include <algorithm>
#include <cstdio>

#include "commands.hpp"
#include "inputs.hpp"
#include "navsynth/links.hpp"
#include "navsynth/markov2.hpp"
#include "navsynth/relatedness.hpp"
#include "navsynth/sgns.hpp"
#include "navsynth/stats.hpp"
#include "navsynth/text_io.hpp"
#include "navsynth/topics.hpp"

namespace navsynth::cli {

namespace {

std::vector<Triple> pick(const std::vector<Triple>& triples, const std::vector<std::size_t>& indices) {
  std::vector<Triple> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(triples[i]);
  return out;
}

void register_eval_next(Registry& registry) {
  struct Args {
    std::filesystem::path reference;
    std::filesystem::path graph;
    std::vector<std::filesystem::path> train;
    std::size_t bootstrap = 1000;
    double train_fraction = 0.8;
    double validation_fraction = 0.1;
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("eval-next", "Next-article prediction with second-order models");
  cmd.input("reference", a.reference, "Reference corpus; its triples are split into train/validation/test")->required();
  cmd.input("graph", a.graph, "Hyperlink graph used for candidate ranking")->required();
  cmd.inputs("train", a.train, "Synthetic corpora to train on (used in full)");
  cmd.param("bootstrap", a.bootstrap, "Bootstrap resamples for MRR intervals")->check(CLI::PositiveNumber);
  cmd.param("train-fraction", a.train_fraction, "Share of reference triples used for training");
  cmd.param("validation-fraction", a.validation_fraction, "Share held out as validation");
  cmd.on_run([&a](Command& c) {
    InputSet in;
    const auto raw_graph = in.graph(a.graph);
    std::vector<SequenceCorpus> corpora;
    corpora.push_back(in.corpus(a.reference));
    for (const auto& p : a.train) corpora.push_back(in.corpus(p));
    const auto graph = in.cover(raw_graph);
    const auto labels = dataset_labels(corpora);
    const auto seed = c.globals().seed;
    const auto workers = c.globals().workers;

    const auto reference_triples = extract_triples(corpora[0]);
    const auto split = make_split(reference_triples.size(), seed, a.train_fraction, a.validation_fraction);
    const auto test = pick(reference_triples, split.test);
    std::vector<Markov2Model> models;
    models.push_back(fit_markov2(pick(reference_triples, split.train), workers));
    for (std::size_t i = 1; i < corpora.size(); ++i) models.push_back(fit_markov2(extract_triples(corpora[i]), workers));
    std::vector<const Markov2Model*> refs;
    for (const auto& m : models) refs.push_back(&m);

    std::string out = comment_line(c.header());
    out += "dataset,mrr_all,ci_low_all,ci_high_all,queries_all,mrr_filtered,ci_low_filtered,ci_high_filtered,"
           "queries_filtered\n";
    for (std::size_t i = 0; i < models.size(); ++i) {
      out += labels[i];
      for (int mode = 0; mode < 2; ++mode) {
        const auto filter = mode == 0 ? QueryFilter::all : QueryFilter::filtered;
        const auto r = evaluate_mrr(models[i], graph, test, filter, refs, workers);
        RngStream rng(seed, 1 + 2 * i + static_cast<std::size_t>(mode));
        const auto ci = bootstrap_mean_ci(r.reciprocal_ranks, a.bootstrap, 0.95, rng);
        out += fmt::format(",{:.9f},{:.9f},{:.9f},{}", r.mrr, ci.ci_low, ci.ci_high, r.queries);
      }
      out += '\n';
    }
    c.write_output("next_article.csv", out);
    fmt::print("datasets={} test_triples={}\n", models.size(), test.size());
  });
}

void register_eval_link(Registry& registry) {
  struct Args {
    std::filesystem::path old_graph;
    std::filesystem::path new_graph;
    std::filesystem::path reference;
    std::vector<std::filesystem::path> corpora;
    std::size_t min_paths = 10;
    std::vector<std::size_t> ks{1, 10, 50, 100};
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("eval-link", "Rank added links by path proportion");
  cmd.input("old-graph", a.old_graph, "Earlier graph snapshot")->required();
  cmd.input("new-graph", a.new_graph, "Later graph snapshot")->required();
  cmd.input("reference", a.reference, "Reference corpus; defines labels and is scored itself")->required();
  cmd.inputs("corpus", a.corpora, "Further corpora to score");
  cmd.param("min-paths", a.min_paths, "Minimum indirect-path support of a labeled pair");
  cmd.list("ks", a.ks, "Cutoffs for precision@k");
  cmd.on_run([&a](Command& c) {
    InputSet in;
    const auto old_raw = in.graph(a.old_graph);
    const auto new_raw = in.graph(a.new_graph);
    std::vector<SequenceCorpus> corpora;
    corpora.push_back(in.corpus(a.reference));
    for (const auto& p : a.corpora) corpora.push_back(in.corpus(p));
    const auto labels = dataset_labels(corpora);
    const auto old_graph = in.cover(old_raw);
    const auto new_graph = in.cover(new_raw);

    const auto set = build_added_links(old_graph, new_graph, corpora[0], a.min_paths);
    std::vector<LinkPair> candidates = set.positives;
    candidates.insert(candidates.end(), set.negatives.begin(), set.negatives.end());
    std::sort(candidates.begin(), candidates.end());

    std::string out = comment_line(c.header());
    out += "dataset,k,cutoff,precision,truncated\n";
    for (std::size_t i = 0; i < corpora.size(); ++i) {
      const PathProportionIndex index(corpora[i]);
      const auto ranked = rank_links(index, candidates);
      for (const auto& p : precision_at_k(ranked, set, a.ks)) {
        out += fmt::format("{},{},{},{:.9f},{}\n", labels[i], p.k, p.cutoff, p.precision, p.truncated ? 1 : 0);
      }
    }
    c.write_output("link_prediction.csv", out);
    fmt::print("positives={} negatives={}\n", set.positives.size(), set.negatives.size());
  });
}

void register_train_emb(Registry& registry) {
  struct Args {
    std::filesystem::path corpus;
    SgnsOptions opt;
    std::string output;
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("train-emb", "Train skip-gram article embeddings on a corpus");
  cmd.input("corpus", a.corpus, "Training corpus")->required();
  cmd.param("dim", a.opt.dimension, "Embedding dimension")->check(CLI::PositiveNumber);
  cmd.param("window", a.opt.window, "Maximum context window")->check(CLI::PositiveNumber);
  cmd.param("negatives", a.opt.negatives, "Negative samples per pair");
  cmd.param("epochs", a.opt.epochs, "Training epochs")->check(CLI::PositiveNumber);
  cmd.param("lr", a.opt.learning_rate, "Initial learning rate")->check(CLI::PositiveNumber);
  cmd.param("min-length", a.opt.min_length, "Shorter sequences are ignored");
  cmd.param("output", a.output, "Embedding file name (default emb_<kind>.txt)");
  cmd.on_run([&a](Command& c) {
    InputSet in;
    const auto corpus = in.corpus(a.corpus);
    auto opt = a.opt;
    opt.seed = c.globals().seed;
    opt.workers = c.globals().workers;
    if (opt.workers > 1) {
      fmt::print(stderr, "navsynth: train-emb with --workers {} is not reproducible\n", opt.workers);
    }
    const auto result = train_sequence_embeddings(corpus, opt);
    const std::string slug(to_slug(corpus.kind));
    const std::string file = a.output.empty() ? "emb_" + slug + ".txt" : a.output;
    c.write_output(file, format_embeddings(result.embeddings, in.names(), c.header()));
    std::string loss = comment_line(c.header());
    loss += "epoch,loss\n";
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
      loss += fmt::format("{},{:.9f}\n", e + 1, result.epoch_loss[e]);
    }
    c.write_output("emb_loss_" + slug + ".csv", loss);
    fmt::print("embedded={} sequences={} tokens={}\n", result.embeddings.size(), result.sequences_used,
               result.tokens);
  });
}

std::vector<EmbeddingTable> load_all_embeddings(InputSet& in, const std::vector<std::filesystem::path>& paths) {
  std::vector<EmbeddingTable> out;
  for (const auto& p : paths) out.push_back(in.embeddings(p));
  return out;
}

bool embedded_everywhere(const std::vector<EmbeddingTable>& tables, ArticleId id) {
  return std::all_of(tables.begin(), tables.end(), [id](const EmbeddingTable& t) { return t.contains(id); });
}

void register_eval_related(Registry& registry) {
  struct Args {
    std::vector<std::filesystem::path> embeddings;
    std::filesystem::path pairs;
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("eval-related", "Spearman correlation of embedding similarity with judged pairs");
  cmd.inputs("embeddings", a.embeddings, "Embedding files to compare")->required();
  cmd.input("pairs", a.pairs, "Judged pairs a<TAB>b<TAB>score")->required();
  cmd.on_run([&a](Command& c) {
    InputSet in;
    const auto tables = load_all_embeddings(in, a.embeddings);
    const auto pairs = load_relatedness_pairs(a.pairs, in.names());
    std::vector<RelatednessPair> common;
    for (const auto& p : pairs) {
      if (embedded_everywhere(tables, p.a) && embedded_everywhere(tables, p.b)) common.push_back(p);
    }
    std::string out = comment_line(c.header());
    out += "dataset,rho,used,dropped\n";
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto r = relatedness_eval(tables[i], common);
      out += fmt::format("{},{:.9f},{},{}\n", embedding_label(a.embeddings[i]), r.rho, r.used,
                         pairs.size() - r.used);
    }
    c.write_output("relatedness.csv", out);
    fmt::print("pairs={} common={}\n", pairs.size(), common.size());
  });
}

void register_eval_topic(Registry& registry) {
  struct Args {
    std::vector<std::filesystem::path> embeddings;
    std::filesystem::path labels;
    LogisticOptions opt;
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("eval-topic", "One-vs-rest topic classification on embeddings");
  cmd.inputs("embeddings", a.embeddings, "Embedding files to compare")->required();
  cmd.input("labels", a.labels, "Topic labels article<TAB>id,id,...")->required();
  cmd.param("l2", a.opt.l2, "L2 penalty");
  cmd.param("epochs", a.opt.epochs, "Gradient-descent epochs");
  cmd.param("lr", a.opt.learning_rate, "Initial learning rate")->check(CLI::PositiveNumber);
  cmd.on_run([&a](Command& c) {
    InputSet in;
    const auto tables = load_all_embeddings(in, a.embeddings);
    const auto all_labels = load_topic_labels(a.labels, in.names());
    TopicLabelSet labels;
    for (std::size_t i = 0; i < all_labels.size(); ++i) {
      const ArticleId id = all_labels.articles()[i];
      if (!embedded_everywhere(tables, id)) continue;
      for (std::size_t t = 0; t < kNumTopics; ++t) {
        if (all_labels.has(i, t)) labels.add(id, t);
      }
    }
    const std::size_t dropped = all_labels.size() - labels.size();
    const auto split = make_split(labels.size(), c.globals().seed);

    std::string out = comment_line(c.header());
    out += "dataset,micro_f1,macro_f1,train,test,dropped,flagged_topics\n";
    for (std::size_t i = 0; i < tables.size(); ++i) {
      const auto r = topic_classification(tables[i], labels, split, a.opt, c.globals().workers);
      std::string flagged;
      for (std::size_t t : r.flagged_topics) flagged += (flagged.empty() ? "" : ";") + std::to_string(t);
      out += fmt::format("{},{:.9f},{:.9f},{},{},{},{}\n", embedding_label(a.embeddings[i]), r.f1.micro,
                         r.f1.macro, r.train_articles, r.test_articles, dropped, flagged);
    }
    c.write_output("topic_classification.csv", out);
    fmt::print("labeled={} dropped={}\n", labels.size(), dropped);
  });
}

}  // namespace

void register_eval_commands(Registry& registry) {
  register_eval_next(registry);
  register_eval_link(registry);
  register_train_emb(registry);
  register_eval_related(registry);
  register_eval_topic(registry);
}

}  // namespace navsynth::cli
