#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "link_oracle.hpp"
#include "navsynth/error.hpp"
#include "navsynth/links.hpp"
#include "navsynth/markov2.hpp"
#include "navsynth/relatedness.hpp"
#include "navsynth/rng.hpp"
#include "navsynth/sgns.hpp"
#include "navsynth/text_io.hpp"
#include "navsynth/topics.hpp"
#include "stat_oracles.hpp"
#include "test_util.hpp"

using namespace navsynth;

namespace {

SequenceCorpus corpus_of(std::vector<std::vector<ArticleId>> seqs) {
  SequenceCorpus c;
  for (auto& s : seqs) c.sequences.push_back({std::move(s), false});
  return c;
}

constexpr ArticleId A = 0, B = 1, C = 2, D = 3, X = 4, Y = 5;

}  // namespace

TEST_CASE("Markov-2 counts") {
  std::vector<Triple> t(3, Triple{A, B, C});
  t.push_back({A, B, D});
  const auto m = fit_markov2(t);
  CHECK(m.probability(A, B, C) == doctest::Approx(0.75));
  CHECK(m.probability(A, B, D) == doctest::Approx(0.25));
  CHECK(m.context_total(A, B) == 4);
  CHECK(fit_markov2(std::vector<Triple>{}).empty());
}

TEST_CASE("Markov-2 matches brute-force counting and merges commutatively") {
  RngStream rng(1, 0);
  std::vector<Triple> t;
  for (int i = 0; i < 30000; ++i) {
    t.push_back({static_cast<ArticleId>(rng.below(5)), static_cast<ArticleId>(rng.below(5)),
                 static_cast<ArticleId>(rng.below(7))});
  }
  std::map<std::pair<ArticleId, ArticleId>, std::map<ArticleId, double>> brute;
  std::map<std::pair<ArticleId, ArticleId>, double> totals;
  for (const auto& x : t) {
    brute[{x.source, x.middle}][x.target] += 1;
    totals[{x.source, x.middle}] += 1;
  }
  const auto serial = fit_markov2(t, 1);
  const auto sharded = fit_markov2(t, 3);
  for (const auto& [ctx, row] : brute) {
    double sum = 0.0;
    for (ArticleId target = 0; target < 7; ++target) {
      const double want = row.contains(target) ? row.at(target) / totals[ctx] : 0.0;
      CHECK(std::abs(serial.probability(ctx.first, ctx.second, target) - want) < 1e-12);
      CHECK(serial.count(ctx.first, ctx.second, target) == sharded.count(ctx.first, ctx.second, target));
      sum += serial.probability(ctx.first, ctx.second, target);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
  CHECK(serial.total_triples() == t.size());
}

TEST_CASE("ranking candidates") {
  const auto g = HyperlinkGraph::from_edges(6, {{B, C}, {B, D}, {B, X}, {B, Y}});
  std::vector<Triple> t(3, Triple{A, B, C});
  t.push_back({A, B, D});
  const auto m = fit_markov2(t);
  CHECK(rank_next(m, g, A, B) == std::vector<ArticleId>{C, D, X, Y});
  CHECK(rank_next(m, g, C, B) == std::vector<ArticleId>{C, D, X, Y});
  CHECK(rank_next(m, g, A, C).empty());
  CHECK(rank_of(m, g, A, B, D) == 2);
  CHECK(rank_of(m, g, A, B, A) == 0);
}

TEST_CASE("ranking matches a stable sort on (-count, id)") {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    RngStream rng(2, trial);
    std::vector<Edge> edges;
    for (ArticleId t = 0; t < 40; ++t) {
      if (rng.below(2) == 0) edges.emplace_back(1, t);
    }
    const auto g = HyperlinkGraph::from_edges(40, edges);
    std::vector<Triple> triples;
    for (int i = 0; i < 200; ++i) triples.push_back({0, 1, static_cast<ArticleId>(rng.below(40))});
    const auto m = fit_markov2(triples);
    std::vector<ArticleId> oracle(g.successors(1).begin(), g.successors(1).end());
    std::stable_sort(oracle.begin(), oracle.end(),
                     [&](ArticleId a, ArticleId b) { return m.count(0, 1, a) > m.count(0, 1, b); });
    const auto got = rank_next(m, g, 0, 1);
    CHECK(got == oracle);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(rank_of(m, g, 0, 1, got[i]) == i + 1);
  }
}

TEST_CASE("MRR arithmetic and filtering") {
  const auto g = HyperlinkGraph::from_edges(6, {{B, C}, {B, D}, {B, X}, {B, Y}});
  std::vector<Triple> train(3, Triple{A, B, C});
  train.push_back({A, B, D});
  train.push_back({A, B, X});
  const auto m = fit_markov2(train);
  CHECK(evaluate_mrr(m, g, std::vector<Triple>{{A, B, C}}).mrr == 1.0);
  // ranks: C=1, Y=4
  const auto two = evaluate_mrr(m, g, std::vector<Triple>{{A, B, C}, {A, B, Y}});
  CHECK(two.mrr == doctest::Approx(0.625));
  // target not a candidate scores 0
  CHECK(evaluate_mrr(m, g, std::vector<Triple>{{A, B, A}}).mrr == 0.0);
  CHECK_THROWS_AS(evaluate_mrr(m, g, std::vector<Triple>{}), Error);

  const std::vector<Triple> test{{A, B, C}, {X, B, C}};
  const std::vector<const Markov2Model*> models{&m};
  const auto all = evaluate_mrr(m, g, test, QueryFilter::all);
  const auto filtered = evaluate_mrr(m, g, test, QueryFilter::filtered, models);
  CHECK(all.queries == 2);
  CHECK(filtered.queries == 1);
  CHECK(filtered.dropped == 1);
  CHECK(filtered.mrr >= all.mrr);
  CHECK_THROWS_AS(evaluate_mrr(m, g, test, QueryFilter::filtered), Error);
  const auto other = fit_markov2(std::vector<Triple>{{X, B, C}});
  const std::vector<const Markov2Model*> both{&m, &other};
  CHECK_THROWS_AS(evaluate_mrr(m, g, test, QueryFilter::filtered, both), Error);
  const auto parallel = evaluate_mrr(m, g, test, QueryFilter::all, {}, 4);
  CHECK(parallel.reciprocal_ranks == all.reciprocal_ranks);
}

TEST_CASE("path proportion") {
  const auto c = corpus_of({{A, X, C}, {A, Y}, {A, C, D}});
  CHECK(*path_proportion(c, A, C) == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(path_proportion(c, B, C).has_value());
  const PathProportionIndex idx(c);
  CHECK(*idx.proportion(A, C) == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(idx.proportion(B, C).has_value());
}

TEST_CASE("path-proportion index matches a full scan") {
  RngStream rng(3, 0);
  std::vector<std::vector<ArticleId>> seqs;
  for (int i = 0; i < 500; ++i) {
    std::vector<ArticleId> s;
    const std::size_t len = 1 + rng.below(6);
    for (std::size_t j = 0; j < len; ++j) s.push_back(static_cast<ArticleId>(rng.below(10)));
    seqs.push_back(s);
  }
  const auto c = corpus_of(seqs);
  const PathProportionIndex idx(c);
  for (ArticleId s = 0; s < 11; ++s) {
    for (ArticleId t = 0; t < 11; ++t) {
      const auto want = path_proportion(c, s, t);
      const auto got = idx.proportion(s, t);
      REQUIRE(want.has_value() == got.has_value());
      if (want) {
        CHECK(std::abs(*want - *got) < 1e-15);
        CHECK(*got >= 0.0);
        CHECK(*got <= 1.0);
      }
    }
  }
  // Adding a sequence [s, ..., t] never lowers p(s, t).
  auto more = c;
  more.sequences.push_back({{2, 7, 5}, false});
  CHECK(*path_proportion(more, 2, 5) >= *path_proportion(c, 2, 5));
}

TEST_CASE("precision at k") {
  LabeledLinkSet labels;
  labels.positives = {{0, 1}, {0, 2}};
  labels.negatives = {{0, 3}};
  const std::vector<RankedLink> ranked{{{0, 1}, 0.9}, {{0, 2}, 0.8}, {{0, 3}, 0.1}};
  const std::vector<std::size_t> ks{1, 3, 5};
  const auto p = precision_at_k(ranked, labels, ks);
  CHECK(p[0].precision == 1.0);
  CHECK(p[1].precision == doctest::Approx(2.0 / 3.0));
  CHECK(p[2].truncated);
  CHECK(p[2].cutoff == 3);
  CHECK_FALSE(p[1].truncated);

  RngStream rng(4, 0);
  std::vector<RankedLink> random;
  LabeledLinkSet rl;
  for (ArticleId i = 0; i < 100; ++i) {
    random.push_back({{i, i + 1}, 1.0 - i * 0.01});
    if (rng.below(3) == 0) rl.positives.push_back({i, i + 1});
  }
  std::vector<std::size_t> all_k(100);
  for (std::size_t k = 0; k < 100; ++k) all_k[k] = k + 1;
  const auto res = precision_at_k(random, rl, all_k);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < 100; ++k) {
    hits += rl.is_positive(random[k].link) ? 1 : 0;
    CHECK(std::abs(res[k].precision - static_cast<double>(hits) / static_cast<double>(k + 1)) < 1e-15);
  }
}

TEST_CASE("link ranking order and exclusion") {
  const auto c = corpus_of({{0, 1}, {0, 2}, {3, 1}});
  const PathProportionIndex idx(c);
  const std::vector<LinkPair> cand{{3, 1}, {0, 2}, {0, 1}, {5, 1}};
  const auto r = rank_links(idx, cand);
  REQUIRE(r.size() == 3);
  CHECK(r[0].link == LinkPair{3, 1});
  CHECK(r[1].link == LinkPair{0, 1});
  CHECK(r[2].link == LinkPair{0, 2});
}

TEST_CASE("added-link labels follow the construction rules") {
  // old: 0->1 ; new adds 0->2 and 3->4
  const auto old_g = HyperlinkGraph::from_edges(6, {{0, 1}});
  const auto new_g = HyperlinkGraph::from_edges(6, {{0, 1}, {0, 2}, {3, 4}});
  std::vector<std::vector<ArticleId>> seqs;
  for (int i = 0; i < 12; ++i) seqs.push_back({0, 5, 2});  // path 0..2 and 0..5, 5..2
  for (int i = 0; i < 12; ++i) seqs.push_back({0, 1});      // old edge support
  for (int i = 0; i < 3; ++i) seqs.push_back({3, 4});       // too little support
  const auto labels = build_added_links(old_g, new_g, corpus_of(seqs), 10);
  CHECK(labels.positives == std::vector<LinkPair>{{0, 2}});
  CHECK(labels.is_negative({0, 5}));
  CHECK(labels.is_negative({5, 2}));
  CHECK_FALSE(labels.is_negative({0, 1}));
  CHECK_THROWS_AS(build_added_links(old_g, new_g, corpus_of(seqs), 100), Error);
}

TEST_CASE("added-link labels equal exhaustive enumeration") {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    RngStream rng(5, trial);
    const std::size_t n = 12;
    std::vector<Edge> old_edges;
    std::vector<Edge> new_edges;
    for (int i = 0; i < 25; ++i) {
      const Edge e{static_cast<ArticleId>(rng.below(n)), static_cast<ArticleId>(rng.below(n))};
      old_edges.push_back(e);
      new_edges.push_back(e);
    }
    for (int i = 0; i < 10; ++i) {
      new_edges.emplace_back(static_cast<ArticleId>(rng.below(n)), static_cast<ArticleId>(rng.below(n)));
    }
    const auto old_g = HyperlinkGraph::from_edges(n, old_edges);
    const auto new_g = HyperlinkGraph::from_edges(n, new_edges);
    std::vector<std::vector<ArticleId>> seqs;
    for (int i = 0; i < 400; ++i) {
      std::vector<ArticleId> s;
      const std::size_t len = 2 + rng.below(4);
      for (std::size_t j = 0; j < len; ++j) s.push_back(static_cast<ArticleId>(rng.below(n)));
      seqs.push_back(s);
    }
    const auto corpus = corpus_of(seqs);
    const auto want = navsynth::testing::enumerate_link_labels(old_g, new_g, corpus, n, 5);
    if (want.positives.empty()) {
      CHECK_THROWS_AS(build_added_links(old_g, new_g, corpus, 5), Error);
      continue;
    }
    const auto got = build_added_links(old_g, new_g, corpus, 5);
    CHECK(got.positives == want.positives);
    CHECK(got.negatives == want.negatives);
    for (const auto& p : got.negatives) CHECK_FALSE(got.is_positive(p));
  }
}

TEST_CASE("SGNS pair gradient matches central differences") {
  RngStream rng(6, 0);
  const std::size_t d = 8;
  const std::size_t k = 3;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> u(d);
    std::vector<double> pos(d);
    std::vector<std::vector<double>> negs(k, std::vector<double>(d));
    for (auto& x : u) x = rng.normal();
    for (auto& x : pos) x = rng.normal();
    for (auto& n : negs) {
      for (auto& x : n) x = rng.normal();
    }
    std::vector<double> gu(d);
    std::vector<double> gp(d);
    std::vector<std::vector<double>> gn(k, std::vector<double>(d));
    const auto as_spans = [&]() {
      std::vector<std::span<const double>> s;
      for (auto& n : negs) s.emplace_back(n);
      return s;
    };
    std::vector<std::span<double>> gn_spans;
    for (auto& g : gn) gn_spans.emplace_back(g);
    sgns_pair_gradient(u, pos, as_spans(), gu, gp, gn_spans);
    const double h = 1e-6;
    const auto check = [&](double& param, double analytic) {
      const double keep = param;
      param = keep + h;
      const double up = sgns_pair_loss(u, pos, as_spans());
      param = keep - h;
      const double down = sgns_pair_loss(u, pos, as_spans());
      param = keep;
      const double numeric = (up - down) / (2 * h);
      CHECK(std::abs(numeric - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
    };
    for (std::size_t i = 0; i < d; ++i) {
      check(u[i], gu[i]);
      check(pos[i], gp[i]);
      for (std::size_t n = 0; n < k; ++n) check(negs[n][i], gn[n][i]);
    }
  }
}

TEST_CASE("SGNS learns co-occurrence and reduces its loss") {
  // A and B share sentences and context pages 10..14; C only appears with pages 20..24.
  std::vector<std::vector<ArticleId>> seqs;
  RngStream rng(7, 0);
  for (int i = 0; i < 600; ++i) {
    std::vector<ArticleId> s{0, 1, static_cast<ArticleId>(10 + rng.below(5)), static_cast<ArticleId>(10 + rng.below(5))};
    rng.shuffle(std::span<ArticleId>(s));
    seqs.push_back(s);
  }
  for (int i = 0; i < 600; ++i) {
    std::vector<ArticleId> s{2, static_cast<ArticleId>(20 + rng.below(5)), static_cast<ArticleId>(20 + rng.below(5))};
    rng.shuffle(std::span<ArticleId>(s));
    seqs.push_back(s);
  }
  seqs.push_back({9});
  SgnsOptions opt;
  opt.dimension = 16;
  opt.epochs = 8;
  opt.seed = 3;
  const auto r = train_sequence_embeddings(corpus_of(seqs), opt);
  const auto& e = r.embeddings;
  CHECK(r.sequences_used == seqs.size() - 1);
  CHECK_FALSE(e.contains(9));
  CHECK(cosine_similarity(e.get(0), e.get(1)) > cosine_similarity(e.get(0), e.get(2)));
  REQUIRE(r.epoch_loss.size() == 8);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());

  const auto again = train_sequence_embeddings(corpus_of(seqs), opt);
  for (ArticleId a : {0u, 1u, 2u, 10u, 20u}) {
    const auto x = e.get(a);
    const auto y = again.embeddings.get(a);
    CHECK(std::equal(x.begin(), x.end(), y.begin()));
  }
  CHECK_THROWS_AS(train_sequence_embeddings(corpus_of({{1}, {2}}), opt), Error);
}

TEST_CASE("relatedness correlation") {
  EmbeddingTable t(2);
  for (ArticleId i = 0; i < 6; ++i) {
    const double angle = 0.25 * i;
    t.set(i, std::vector<double>{std::cos(angle), std::sin(angle)});
  }
  std::vector<RelatednessPair> pairs;
  for (ArticleId i = 1; i < 6; ++i) pairs.push_back({0, i, 10.0 - i});
  CHECK(relatedness_eval(t, pairs).rho == doctest::Approx(1.0));
  for (auto& p : pairs) p.score = -p.score;
  CHECK(relatedness_eval(t, pairs).rho == doctest::Approx(-1.0));
  pairs.push_back({0, 42, 1.0});
  const auto r = relatedness_eval(t, pairs);
  CHECK(r.dropped == 1);
  CHECK(r.used == 5);
  const std::vector<RelatednessPair> few{{0, 1, 1}, {0, 2, 2}, {0, 77, 3}};
  CHECK_THROWS_AS(relatedness_eval(t, few), Error);
}

TEST_CASE("relatedness matches rank-then-correlate on a random instance") {
  RngStream rng(8, 0);
  EmbeddingTable t(3);
  for (ArticleId i = 0; i < 40; ++i) t.set(i, std::vector<double>{rng.normal(), rng.normal(), rng.normal()});
  std::vector<RelatednessPair> pairs;
  std::vector<double> sims;
  std::vector<double> human;
  for (int i = 0; i < 20; ++i) {
    const auto a = static_cast<ArticleId>(rng.below(40));
    const auto b = static_cast<ArticleId>(rng.below(40));
    const double score = static_cast<double>(rng.below(5));
    pairs.push_back({a, b, score});
    sims.push_back(cosine_similarity(t.get(a), t.get(b)));
    human.push_back(score);
  }
  CHECK(std::abs(relatedness_eval(t, pairs).rho - navsynth::testing::naive_spearman(sims, human)) < 1e-12);
}

TEST_CASE("relatedness and topic files") {
  navsynth::testing::TempDir dir;
  write_file(dir / "pairs.tsv", "# pairs\nA\tB\t3.5\nA\tC\t1\n");
  Interner names;
  const auto pairs = load_relatedness_pairs(dir / "pairs.tsv", names);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].score == 3.5);
  write_file(dir / "bad.tsv", "A\tB\n");
  CHECK_THROWS_AS(load_relatedness_pairs(dir / "bad.tsv", names), ParseError);

  write_file(dir / "labels.tsv", "A\t1,5\nB\t63\n");
  const auto labels = load_topic_labels(dir / "labels.tsv", names);
  CHECK(labels.size() == 2);
  CHECK(labels.has(0, 5));
  CHECK(labels.has(1, 63));
  write_file(dir / "bad_labels.tsv", "A\t64\n");
  CHECK_THROWS_AS(load_topic_labels(dir / "bad_labels.tsv", names), ParseError);
}

TEST_CASE("logistic gradient matches central differences") {
  RngStream rng(9, 0);
  LogisticData data;
  data.rows = 30;
  data.cols = 5;
  for (std::size_t i = 0; i < data.rows * data.cols; ++i) data.x.push_back(rng.normal());
  for (std::size_t i = 0; i < data.rows; ++i) data.y.push_back(rng.below(2) == 0 ? 1.0 : 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(data.cols);
    for (auto& x : w) x = rng.normal();
    double b = rng.normal();
    std::vector<double> gw(data.cols);
    double gb = 0.0;
    logistic_gradient(data, w, b, 1.0, gw, gb);
    const double h = 1e-6;
    for (std::size_t j = 0; j < data.cols; ++j) {
      const double keep = w[j];
      w[j] = keep + h;
      const double up = logistic_loss(data, w, b, 1.0);
      w[j] = keep - h;
      const double down = logistic_loss(data, w, b, 1.0);
      w[j] = keep;
      CHECK(std::abs((up - down) / (2 * h) - gw[j]) <= 1e-6 * std::max(1.0, std::abs(gw[j])));
    }
    const double up = logistic_loss(data, w, b + h, 1.0);
    const double down = logistic_loss(data, w, b - h, 1.0);
    CHECK(std::abs((up - down) / (2 * h) - gb) <= 1e-6 * std::max(1.0, std::abs(gb)));
  }
}

TEST_CASE("topic classification on separable toy data") {
  EmbeddingTable emb(2);
  TopicLabelSet labels;
  RngStream rng(10, 0);
  for (ArticleId i = 0; i < 200; ++i) {
    const bool first = i % 2 == 0;
    emb.set(i, std::vector<double>{first ? 3.0 + 0.1 * rng.normal() : -3.0 + 0.1 * rng.normal(),
                                   0.1 * rng.normal()});
    labels.add(i, first ? 0 : 1);
  }
  const auto split = make_split(labels.size(), 1);
  const auto r = topic_classification(emb, labels, split);
  CHECK(r.f1.micro == doctest::Approx(1.0));
  // Topics 2..63 have no training positives: predicted all-negative and flagged.
  CHECK(r.flagged_topics.size() == 62);
  const auto two = topic_classification(emb, labels, split, {}, 4);
  CHECK(two.f1.micro == r.f1.micro);

  TopicLabelSet missing = labels;
  missing.add(999, 0);
  CHECK_THROWS_AS(topic_classification(emb, missing, make_split(missing.size(), 1)), Error);
}

TEST_CASE("logistic training reduces the loss and all-negative scores zero") {
  LogisticData data;
  data.rows = 4;
  data.cols = 1;
  data.x = {1, 2, -1, -2};
  data.y = {1, 1, 0, 0};
  const auto m = train_logistic(data);
  CHECK(m.final_loss < std::log(2.0));
  CHECK(m.predict_probability(std::vector<double>{2.0}) > 0.5);

  std::vector<BinaryDecision> none{{0, false, true}, {0, false, false}};
  CHECK(f1_micro_macro(none, 1).micro == 0.0);
}
