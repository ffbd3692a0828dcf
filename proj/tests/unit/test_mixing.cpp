#include <doctest.h>

#include <cmath>
#include <random>

#include "ami_oracle.hpp"
#include "navsynth/error.hpp"
#include "navsynth/mixing.hpp"
#include "navsynth/rng.hpp"

using namespace navsynth;
using navsynth::testing::Matrix;
using navsynth::testing::oracle_ami;

namespace {

JointFlowTable table_of(const Matrix& m) {
  std::vector<JointFlowTable::Cell> cells;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (m[i][j] > 0) cells.push_back({static_cast<ArticleId>(i), static_cast<ArticleId>(100 + j), m[i][j]});
    }
  }
  return JointFlowTable::from_cells(7, cells);
}

Matrix random_matrix(RngStream& rng, std::size_t max_dim, std::uint64_t max_total) {
  const std::size_t r = 1 + rng.below(max_dim);
  const std::size_t c = 1 + rng.below(max_dim);
  const std::uint64_t total = 1 + rng.below(max_total);
  Matrix m(r, std::vector<std::uint64_t>(c, 0));
  for (std::uint64_t k = 0; k < total; ++k) ++m[rng.below(r)][rng.below(c)];
  return m;
}

SequenceCorpus corpus_of(std::vector<std::vector<ArticleId>> seqs) {
  SequenceCorpus c;
  for (auto& s : seqs) c.sequences.push_back({std::move(s), false});
  return c;
}

}  // namespace

TEST_CASE("sliding-window triples") {
  const auto t = extract_triples(corpus_of({{0, 1, 2, 3}, {4, 5}}));
  REQUIRE(t.size() == 2);
  CHECK(t[0] == Triple{0, 1, 2});
  CHECK(t[1] == Triple{1, 2, 3});

  RngStream rng(1, 0);
  std::vector<std::vector<ArticleId>> seqs;
  std::size_t expected = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t len = 1 + rng.below(8);
    seqs.emplace_back(len, 0);
    expected += len > 2 ? len - 2 : 0;
  }
  CHECK(extract_triples(corpus_of(seqs)).size() == expected);
}

TEST_CASE("mutual information examples") {
  CHECK(std::abs(mutual_information(table_of({{5, 5}, {5, 5}}))) < 1e-12);
  CHECK(std::abs(mutual_information(table_of({{10, 0}, {0, 10}})) - 1.0) < 1e-12);
}

TEST_CASE("mutual information on random tables matches a double loop") {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    RngStream rng(2, trial);
    Matrix m(4, std::vector<std::uint64_t>(5));
    for (auto& row : m) {
      for (auto& x : row) x = rng.below(20);
    }
    m[0][0] += 1;
    const auto o = oracle_ami(m);
    const auto t = table_of(m);
    CHECK(std::abs(mutual_information(t) - o.mi) < 1e-12);
    const auto c = Contingency::from_table(t);
    CHECK(std::abs(entropy_bits(c.row_sums, c.total) - o.h_rows) < 1e-12);
    CHECK(std::abs(entropy_bits(c.col_sums, c.total) - o.h_cols) < 1e-12);
  }
}

TEST_CASE("expected MI of a 1x1 table is zero") {
  const std::vector<std::uint64_t> one{17};
  CHECK(expected_mi(one, one, 17) == 0.0);
}

TEST_CASE("expected MI matches a permutation Monte-Carlo estimate") {
  const std::vector<std::uint64_t> rows{10, 10};
  const std::vector<std::uint64_t> cols{10, 10};
  const double exact = expected_mi(rows, cols, 20);
  // Independent permutation simulation with the standard library generator.
  std::mt19937_64 gen(12345);
  std::vector<int> labels(20);
  for (int i = 0; i < 20; ++i) labels[i] = i < 10 ? 0 : 1;
  const int draws = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int d = 0; d < draws; ++d) {
    std::shuffle(labels.begin(), labels.end(), gen);
    Matrix m(2, std::vector<std::uint64_t>(2, 0));
    for (int i = 0; i < 20; ++i) ++m[i < 10 ? 0 : 1][labels[i]];
    const double mi = oracle_ami(m).mi;
    sum += mi;
    sum_sq += mi * mi;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  CHECK(std::abs(exact - mean) < 3.0 * se);
}

TEST_CASE("library Monte-Carlo EMI agrees with the exact value") {
  const std::vector<std::uint64_t> rows{30, 20, 10};
  const std::vector<std::uint64_t> cols{25, 25, 10};
  RngStream rng(3, 0);
  const double est = expected_mi_monte_carlo(rows, cols, 20000, rng);
  const double exact = expected_mi(rows, cols, 60);
  CHECK(std::abs(est - exact) < 0.05 * exact + 1e-3);
}

TEST_CASE("expected MI is bounded by the marginal entropies") {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    RngStream rng(4, trial);
    const auto m = random_matrix(rng, 6, 200);
    const auto c = Contingency::from_table(table_of(m));
    const double emi = expected_mi(c.row_sums, c.col_sums, c.total);
    const double hs = entropy_bits(c.row_sums, c.total);
    const double ht = entropy_bits(c.col_sums, c.total);
    CHECK(emi >= -1e-12);
    CHECK(emi <= std::min(hs, ht) + 1e-9);
  }
}

TEST_CASE("AMI on random small tables matches the oracle") {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    RngStream rng(5, trial);
    const auto m = random_matrix(rng, 6, 200);
    const auto o = oracle_ami(m);
    const auto r = adjusted_mi(table_of(m));
    CHECK(std::abs(r.mi_bits - o.mi) < 1e-9);
    CHECK(std::abs(r.expected_mi_bits - o.emi) < 1e-9);
    CHECK(std::abs(r.ami - o.ami) < 1e-9);
    CHECK(r.ami <= 1.0 + 1e-9);
    CHECK(r.mi_bits <= std::min(r.entropy_source, r.entropy_target) + 1e-9);
    CHECK_FALSE(r.expected_mi_estimated);
  }
}

TEST_CASE("AMI poles") {
  // Independent uniform 2x2 at total 1000.
  const auto indep = adjusted_mi(table_of({{250, 250}, {250, 250}}));
  CHECK(std::abs(indep.ami) < 0.05);
  const auto bij = adjusted_mi(table_of({{300, 0, 0}, {0, 300, 0}, {0, 0, 300}}));
  CHECK(std::abs(bij.ami - 1.0) < 1e-9);
  const auto degenerate = adjusted_mi(table_of({{42}}));
  CHECK(degenerate.ami == 0.0);
}

TEST_CASE("AMI is invariant under relabeling") {
  RngStream rng(6, 0);
  const auto m = random_matrix(rng, 5, 150);
  Matrix flipped = m;
  std::reverse(flipped.begin(), flipped.end());
  for (auto& row : flipped) std::reverse(row.begin(), row.end());
  const auto a = adjusted_mi(table_of(m));
  const auto b = adjusted_mi(table_of(flipped));
  CHECK(std::abs(a.mi_bits - b.mi_bits) < 1e-12);
  CHECK(std::abs(a.expected_mi_bits - b.expected_mi_bits) < 1e-12);
  CHECK(std::abs(a.ami - b.ami) < 1e-12);
}

TEST_CASE("large tables switch to the Monte-Carlo EMI") {
  const auto r = adjusted_mi(table_of({{3000, 1000}, {1000, 3000}}));
  CHECK(r.expected_mi_estimated);
  CHECK(r.ami > 0.1);
  AmiOptions opt;
  opt.exact_limit = 10000;
  const auto exact = adjusted_mi(table_of({{3000, 1000}, {1000, 3000}}), opt);
  CHECK_FALSE(exact.expected_mi_estimated);
  CHECK(std::abs(exact.ami - r.ami) < 1e-3);
}

TEST_CASE("survey thresholds on triples through each article") {
  std::vector<std::vector<ArticleId>> seqs;
  for (int i = 0; i < 99; ++i) seqs.push_back({0, 1, 2});
  CHECK(ami_survey(corpus_of(seqs), 100).records.empty());
  seqs.push_back({3, 1, 4});
  const auto s = ami_survey(corpus_of(seqs), 100);
  REQUIRE(s.records.size() == 1);
  CHECK(s.records[0].middle == 1);
  CHECK(s.records[0].num_triples == 100);
}

TEST_CASE("survey output is deterministic and ordered") {
  RngStream rng(7, 0);
  std::vector<std::vector<ArticleId>> seqs;
  for (int i = 0; i < 3000; ++i) {
    std::vector<ArticleId> s;
    for (int j = 0; j < 5; ++j) s.push_back(static_cast<ArticleId>(rng.below(12)));
    seqs.push_back(s);
  }
  const auto corpus = corpus_of(seqs);
  Interner names;
  for (int i = 0; i < 12; ++i) names.intern("a" + std::to_string(i));
  const auto s1 = ami_survey(corpus, 100, {}, 1);
  const auto s2 = ami_survey(corpus, 100, {}, 3);
  CHECK(format_ami_csv(s1.records, names) == format_ami_csv(s2.records, names));
  for (std::size_t i = 1; i < s1.records.size(); ++i) CHECK(s1.records[i - 1].middle < s1.records[i].middle);
  const auto csv = format_ami_csv(s1.records, names, "run");
  CHECK(csv.rfind("# run\narticle,num_triples,mi_bits,ami\n", 0) == 0);
  const auto cdf = ami_cdf(s1.records);
  CHECK(cdf.back().second == doctest::Approx(1.0));
  for (std::size_t i = 1; i < cdf.size(); ++i) CHECK(cdf[i - 1].second <= cdf[i].second);
  CHECK(format_ami_cdf_csv(cdf).rfind("ami_bin,cumulative_fraction\n", 0) == 0);
  const auto flow = flow_table_for(corpus, 3);
  CHECK(flow.total == s1.records[3].num_triples);
}
