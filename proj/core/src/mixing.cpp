#include "navsynth/mixing.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "navsynth/error.hpp"
#include "navsynth/parallel.hpp"
#include "navsynth/stats.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {

std::vector<Triple> extract_triples(const SequenceCorpus& corpus) {
  std::vector<Triple> out;
  for (const auto& seq : corpus.sequences) {
    const auto& p = seq.pages;
    for (std::size_t i = 2; i < p.size(); ++i) out.push_back({p[i - 2], p[i - 1], p[i]});
  }
  return out;
}

JointFlowTable JointFlowTable::from_pairs(ArticleId middle,
                                          std::vector<std::pair<ArticleId, ArticleId>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  JointFlowTable t;
  t.middle = middle;
  for (const auto& [s, tgt] : pairs) {
    if (!t.cells.empty() && t.cells.back().source == s && t.cells.back().target == tgt) {
      ++t.cells.back().count;
    } else {
      t.cells.push_back({s, tgt, 1});
    }
  }
  t.total = pairs.size();
  return t;
}

JointFlowTable JointFlowTable::from_cells(ArticleId middle, std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  JointFlowTable t;
  t.middle = middle;
  for (const auto& c : cells) {
    if (c.count == 0) continue;
    if (!t.cells.empty() && t.cells.back().source == c.source && t.cells.back().target == c.target) {
      t.cells.back().count += c.count;
    } else {
      t.cells.push_back(c);
    }
    t.total += c.count;
  }
  return t;
}

Contingency Contingency::from_table(const JointFlowTable& table) {
  Contingency c;
  std::vector<ArticleId> sources;
  std::vector<ArticleId> targets;
  for (const auto& cell : table.cells) {
    sources.push_back(cell.source);
    targets.push_back(cell.target);
  }
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  c.row_sums.assign(sources.size(), 0);
  c.col_sums.assign(targets.size(), 0);
  for (const auto& cell : table.cells) {
    const auto r = static_cast<std::size_t>(std::lower_bound(sources.begin(), sources.end(), cell.source) -
                                            sources.begin());
    const auto k = static_cast<std::size_t>(std::lower_bound(targets.begin(), targets.end(), cell.target) -
                                            targets.begin());
    c.entries.push_back({r, k, cell.count});
    c.row_sums[r] += cell.count;
    c.col_sums[k] += cell.count;
    c.total += cell.count;
  }
  return c;
}

double entropy_bits(std::span<const std::uint64_t> sums, std::uint64_t total) {
  if (total == 0) return 0.0;
  const auto n = static_cast<double>(total);
  double h = 0.0;
  for (auto s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / n;
    h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

double mutual_information(const Contingency& c) {
  if (c.total == 0) throw Error("mutual information of empty table");
  const auto n = static_cast<double>(c.total);
  double mi = 0.0;
  for (const auto& e : c.entries) {
    const auto nij = static_cast<double>(e.count);
    mi += (nij / n) *
          std::log2(nij * n / (static_cast<double>(c.row_sums[e.row]) * static_cast<double>(c.col_sums[e.col])));
  }
  return std::max(0.0, mi);
}

double mutual_information(const JointFlowTable& table) {
  return mutual_information(Contingency::from_table(table));
}

double expected_mi(std::span<const std::uint64_t> row_sums, std::span<const std::uint64_t> col_sums,
                   std::uint64_t total) {
  if (total == 0) return 0.0;
  const auto n = static_cast<double>(total);
  const double log_n = std::log(n);
  const double lg_n1 = std::lgamma(n + 1.0);
  // lgamma(k + 1) for k = 0..total
  std::vector<double> lfact(total + 1);
  for (std::uint64_t k = 0; k <= total; ++k) lfact[k] = std::lgamma(static_cast<double>(k) + 1.0);

  double emi = 0.0;
  for (auto a : row_sums) {
    if (a == 0) continue;
    for (auto b : col_sums) {
      if (b == 0) continue;
      const std::uint64_t lo = std::max<std::uint64_t>(1, a + b > total ? a + b - total : 1);
      const std::uint64_t hi = std::min(a, b);
      const double base = lfact[a] + lfact[b] + lfact[total - a] + lfact[total - b] - lg_n1;
      const double log_ab = std::log(static_cast<double>(a)) + std::log(static_cast<double>(b));
      for (std::uint64_t nij = lo; nij <= hi; ++nij) {
        const double log_p = base - lfact[nij] - lfact[a - nij] - lfact[b - nij] - lfact[total - a - b + nij];
        const auto x = static_cast<double>(nij);
        emi += (x / n) * (log_n + std::log(x) - log_ab) * std::exp(log_p);
      }
    }
  }
  return emi / std::numbers::ln2;
}

double expected_mi_monte_carlo(std::span<const std::uint64_t> row_sums,
                               std::span<const std::uint64_t> col_sums, std::size_t draws,
                               RngStream& rng) {
  std::vector<std::uint32_t> rows;
  std::vector<std::uint32_t> cols;
  for (std::size_t i = 0; i < row_sums.size(); ++i) rows.insert(rows.end(), row_sums[i], static_cast<std::uint32_t>(i));
  for (std::size_t j = 0; j < col_sums.size(); ++j) cols.insert(cols.end(), col_sums[j], static_cast<std::uint32_t>(j));
  if (rows.size() != cols.size()) throw Error("expected_mi: marginals disagree on total");
  if (rows.empty() || draws == 0) return 0.0;
  const std::size_t r = row_sums.size();
  const std::size_t k = col_sums.size();
  const bool dense = r * k <= (1u << 22);
  std::vector<std::uint32_t> grid(dense ? r * k : 0);
  std::unordered_map<std::uint64_t, std::uint32_t> sparse;

  Contingency c;
  c.row_sums.assign(row_sums.begin(), row_sums.end());
  c.col_sums.assign(col_sums.begin(), col_sums.end());
  c.total = rows.size();
  double sum = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    rng.shuffle(std::span<std::uint32_t>(cols));
    c.entries.clear();
    if (dense) {
      std::fill(grid.begin(), grid.end(), 0);
      for (std::size_t i = 0; i < rows.size(); ++i) ++grid[rows[i] * k + cols[i]];
      for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        if (grid[idx] != 0) c.entries.push_back({idx / k, idx % k, grid[idx]});
      }
    } else {
      sparse.clear();
      for (std::size_t i = 0; i < rows.size(); ++i) ++sparse[static_cast<std::uint64_t>(rows[i]) * k + cols[i]];
      for (const auto& [key, count] : sparse) c.entries.push_back({key / k, key % k, count});
    }
    sum += mutual_information(c);
  }
  return sum / static_cast<double>(draws);
}

AmiRecord adjusted_mi(const JointFlowTable& table, const AmiOptions& options) {
  if (table.total == 0) throw Error("adjusted_mi: empty flow table");
  const auto c = Contingency::from_table(table);
  AmiRecord r;
  r.middle = table.middle;
  r.num_triples = c.total;
  r.mi_bits = mutual_information(c);
  r.entropy_source = entropy_bits(c.row_sums, c.total);
  r.entropy_target = entropy_bits(c.col_sums, c.total);
  if (c.total > options.exact_limit) {
    RngStream rng(options.seed, table.middle);
    r.expected_mi_bits = expected_mi_monte_carlo(c.row_sums, c.col_sums, options.monte_carlo_draws, rng);
    r.expected_mi_estimated = true;
  } else {
    r.expected_mi_bits = expected_mi(c.row_sums, c.col_sums, c.total);
  }
  const double denom = std::max(r.entropy_source, r.entropy_target) - r.expected_mi_bits;
  r.ami = denom > 1e-12 ? (r.mi_bits - r.expected_mi_bits) / denom : 0.0;
  return r;
}

AmiSurvey ami_survey(const SequenceCorpus& corpus, std::size_t min_triples, const AmiOptions& options,
                     std::size_t workers) {
  auto triples = extract_triples(corpus);
  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    if (a.middle != b.middle) return a.middle < b.middle;
    if (a.source != b.source) return a.source < b.source;
    return a.target < b.target;
  });
  // [begin, end) ranges of triples per middle article that pass the threshold.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < triples.size();) {
    std::size_t j = i;
    while (j < triples.size() && triples[j].middle == triples[i].middle) ++j;
    if (j - i >= min_triples) groups.emplace_back(i, j);
    i = j;
  }

  AmiSurvey survey;
  survey.records.resize(groups.size());
  parallel_for(groups.size(), workers, [&](std::size_t g) {
    const auto [begin, end] = groups[g];
    std::vector<JointFlowTable::Cell> cells;
    for (std::size_t i = begin; i < end; ++i) {
      if (!cells.empty() && cells.back().source == triples[i].source && cells.back().target == triples[i].target) {
        ++cells.back().count;
      } else {
        cells.push_back({triples[i].source, triples[i].target, 1});
      }
    }
    survey.records[g] = adjusted_mi(JointFlowTable::from_cells(triples[begin].middle, std::move(cells)), options);
  });

  if (survey.records.size() >= 3) {
    std::vector<double> counts;
    std::vector<double> amis;
    for (const auto& r : survey.records) {
      counts.push_back(static_cast<double>(r.num_triples));
      amis.push_back(r.ami);
    }
    try {
      survey.spearman_triples_vs_ami = spearman(counts, amis);
    } catch (const Error&) {
      // constant counts or AMI values: correlation undefined
    }
  }
  return survey;
}

JointFlowTable flow_table_for(const SequenceCorpus& corpus, ArticleId middle) {
  std::vector<std::pair<ArticleId, ArticleId>> pairs;
  for (const auto& seq : corpus.sequences) {
    const auto& p = seq.pages;
    for (std::size_t i = 2; i < p.size(); ++i) {
      if (p[i - 1] == middle) pairs.emplace_back(p[i - 2], p[i]);
    }
  }
  return JointFlowTable::from_pairs(middle, std::move(pairs));
}

std::vector<std::pair<double, double>> ami_cdf(std::span<const AmiRecord> records, double bin_width) {
  if (!(bin_width > 0.0)) throw Error("ami_cdf: bin width must be positive");
  std::vector<double> values;
  for (const auto& r : records) values.push_back(r.ami);
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> out;
  const auto bins = static_cast<std::size_t>(std::llround(1.0 / bin_width));
  for (std::size_t b = 0; b <= bins; ++b) {
    const double edge = static_cast<double>(b) * bin_width;
    // small slack so values printed as the edge are counted inside it
    const auto covered = std::upper_bound(values.begin(), values.end(), edge + 1e-12) - values.begin();
    const double frac = values.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(values.size());
    out.emplace_back(edge, frac);
  }
  return out;
}

std::string format_ami_csv(std::span<const AmiRecord> records, const Interner& names,
                           std::string_view comment) {
  std::string out = comment_line(comment);
  out += "article,num_triples,mi_bits,ami\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{:.9f},{:.9f}\n", csv_field(names.name(r.middle)), r.num_triples, r.mi_bits, r.ami);
  }
  return out;
}

std::string format_ami_cdf_csv(std::span<const std::pair<double, double>> cdf, std::string_view comment) {
  std::string out = comment_line(comment);
  out += "ami_bin,cumulative_fraction\n";
  for (const auto& [edge, frac] : cdf) out += fmt::format("{:.2f},{:.9f}\n", edge, frac);
  return out;
}

std::string format_flow_csv(const JointFlowTable& table, const Interner& names) {
  std::string out = "source,target,count\n";
  for (const auto& c : table.cells) {
    out += fmt::format("{},{},{}\n", csv_field(names.name(c.source)), csv_field(names.name(c.target)), c.count);
  }
  return out;
}

}  // namespace navsynth
