#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "navsynth/corpus.hpp"
#include "navsynth/interner.hpp"
#include "navsynth/rng.hpp"

namespace navsynth {

struct Triple {
  ArticleId source = 0;
  ArticleId middle = 0;
  ArticleId target = 0;
  auto operator<=>(const Triple&) const = default;
};

// Every window of three consecutive pages, in corpus order.
std::vector<Triple> extract_triples(const SequenceCorpus& corpus);

// Counts of (source, target) pairs observed around one middle article.
struct JointFlowTable {
  struct Cell {
    ArticleId source = 0;
    ArticleId target = 0;
    std::uint64_t count = 0;
  };

  ArticleId middle = 0;
  std::vector<Cell> cells;  // sorted by (source, target), counts > 0
  std::uint64_t total = 0;

  static JointFlowTable from_pairs(ArticleId middle, std::vector<std::pair<ArticleId, ArticleId>> pairs);
  static JointFlowTable from_cells(ArticleId middle, std::vector<Cell> cells);
};

// Dense-index view of a flow table: marginals plus non-zero cells.
struct Contingency {
  std::vector<std::uint64_t> row_sums;
  std::vector<std::uint64_t> col_sums;
  struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;
    std::uint64_t count = 0;
  };
  std::vector<Entry> entries;
  std::uint64_t total = 0;

  static Contingency from_table(const JointFlowTable& table);
};

// Shannon entropy in bits of the distribution sums / total.
double entropy_bits(std::span<const std::uint64_t> sums, std::uint64_t total);

double mutual_information(const JointFlowTable& table);
double mutual_information(const Contingency& c);

// Exact expected MI (bits) over all tables with the given marginals under the
// hypergeometric permutation model. Cost O(rows * cols * min(a_i, b_j)).
double expected_mi(std::span<const std::uint64_t> row_sums, std::span<const std::uint64_t> col_sums,
                   std::uint64_t total);

// Monte-Carlo estimate: mean MI over `draws` random pairings of the marginals.
double expected_mi_monte_carlo(std::span<const std::uint64_t> row_sums,
                               std::span<const std::uint64_t> col_sums, std::size_t draws,
                               RngStream& rng);

struct AmiOptions {
  std::uint64_t exact_limit = 5000;  // above this total, EMI is estimated by Monte-Carlo
  std::size_t monte_carlo_draws = 10000;
  std::uint64_t seed = 0;            // Monte-Carlo stream is RngStream(seed, middle)
};

struct AmiRecord {
  ArticleId middle = 0;
  std::uint64_t num_triples = 0;
  double mi_bits = 0.0;
  double expected_mi_bits = 0.0;
  double ami = 0.0;
  double entropy_source = 0.0;
  double entropy_target = 0.0;
  bool expected_mi_estimated = false;
};

// AMI = (MI - EMI) / (max(H(S), H(T)) - EMI); 0 when the denominator vanishes.
// Negative values are reported as-is.
AmiRecord adjusted_mi(const JointFlowTable& table, const AmiOptions& options = {});

struct AmiSurvey {
  std::vector<AmiRecord> records;  // ascending middle id
  std::optional<double> spearman_triples_vs_ami;
};

// One record per middle article with at least min_triples triples.
AmiSurvey ami_survey(const SequenceCorpus& corpus, std::size_t min_triples = 100,
                     const AmiOptions& options = {}, std::size_t workers = 1);

// Flow table for one middle article (all triples through it).
JointFlowTable flow_table_for(const SequenceCorpus& corpus, ArticleId middle);

// Cumulative fraction of records with AMI <= each bin edge (edges 0, w, 2w, ..., 1).
std::vector<std::pair<double, double>> ami_cdf(std::span<const AmiRecord> records, double bin_width = 0.01);

// "article,num_triples,mi_bits,ami"
std::string format_ami_csv(std::span<const AmiRecord> records, const Interner& names,
                           std::string_view comment = {});
// "ami_bin,cumulative_fraction"
std::string format_ami_cdf_csv(std::span<const std::pair<double, double>> cdf,
                               std::string_view comment = {});
// "source,target,count"
std::string format_flow_csv(const JointFlowTable& table, const Interner& names);

}  // namespace navsynth
