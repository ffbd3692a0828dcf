#include <fmt/format.h>

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>

#include "commands.hpp"
#include "inputs.hpp"
#include "navsynth/corpus.hpp"
#include "navsynth/error.hpp"
#include "navsynth/stats.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth::cli {

namespace {

// dataset -> metric -> value, with metric names in first-seen order.
struct Table {
  std::string name;
  std::vector<std::string> metrics;
  std::map<std::string, std::map<std::string, std::string>> cells;

  void set(const std::string& dataset, const std::string& metric, const std::string& value) {
    if (std::find(metrics.begin(), metrics.end(), metric) == metrics.end()) metrics.push_back(metric);
    cells[dataset][metric] = value;
  }
};

// Known dataset kinds first, in taxonomy order, then other labels alphabetically.
std::vector<std::string> ordered_datasets(const Table& t) {
  std::vector<std::string> names;
  for (const auto& [d, _] : t.cells) names.push_back(d);
  auto rank = [](const std::string& d) -> std::size_t {
    const auto kind = parse_dataset_kind(d);
    if (!kind) return std::size(kAllDatasetKinds);
    return static_cast<std::size_t>(std::find(std::begin(kAllDatasetKinds), std::end(kAllDatasetKinds), *kind) -
                                    std::begin(kAllDatasetKinds));
  };
  std::stable_sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
    const auto ra = rank(a);
    const auto rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  return names;
}

std::string format_table(const Table& t, std::string_view header) {
  std::string out = comment_line(header);
  out += "dataset";
  for (const auto& m : t.metrics) out += "," + m;
  out += '\n';
  for (const auto& d : ordered_datasets(t)) {
    out += d;
    const auto& row = t.cells.at(d);
    for (const auto& m : t.metrics) {
      out += ',';
      if (auto it = row.find(m); it != row.end()) out += it->second;
    }
    out += '\n';
  }
  return out;
}

void copy_columns(Table& t, const CsvTable& csv, const std::vector<std::pair<std::string, std::string>>& columns) {
  const auto d = csv.column("dataset");
  for (const auto& row : csv.rows) {
    for (const auto& [source, target] : columns) t.set(row[d], target, row[csv.column(source)]);
  }
}

std::optional<double> parse_value(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw Error("not a number: '" + s + "'");
  return v;
}

const std::string kBaseline{to_string(DatasetKind::logs)};

void register_report(Registry& registry) {
  struct Args {
    std::filesystem::path next;
    std::filesystem::path link;
    std::filesystem::path related;
    std::filesystem::path topic;
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("report", "Consolidate task outputs into per-table CSVs");
  cmd.input("next", a.next, "next_article.csv from eval-next", false);
  cmd.input("link", a.link, "link_prediction.csv from eval-link", false);
  cmd.input("related", a.related, "relatedness.csv from eval-related", false);
  cmd.input("topic", a.topic, "topic_classification.csv from eval-topic", false);
  cmd.on_run([&a](Command& c) {
    std::vector<std::string> missing;
    std::size_t given = 0;
    for (const auto* p : {&a.next, &a.link, &a.related, &a.topic}) {
      if (p->empty()) continue;
      ++given;
      if (!std::filesystem::is_regular_file(*p)) missing.push_back(p->string());
    }
    if (given == 0) throw Error("report: give at least one of --next, --link, --related, --topic");
    if (!missing.empty()) {
      std::string list;
      for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
      throw Error("report: missing input files: " + list);
    }

    std::vector<Table> tables;
    if (!a.next.empty()) {
      Table t{"next_article", {}, {}};
      copy_columns(t, read_csv(a.next), {{"mrr_all", "mrr_all"}, {"mrr_filtered", "mrr_filtered"}});
      tables.push_back(std::move(t));
    }
    if (!a.link.empty()) {
      Table t{"link_prediction", {}, {}};
      const auto csv = read_csv(a.link);
      const auto d = csv.column("dataset");
      const auto k = csv.column("k");
      const auto p = csv.column("precision");
      std::vector<std::pair<std::size_t, std::size_t>> order;  // (k, row)
      for (std::size_t r = 0; r < csv.rows.size(); ++r) order.emplace_back(std::stoull(csv.rows[r][k]), r);
      std::stable_sort(order.begin(), order.end(),
                       [](const auto& x, const auto& y) { return x.first < y.first; });
      for (const auto& [kv, r] : order) t.set(csv.rows[r][d], fmt::format("p_at_{}", kv), csv.rows[r][p]);
      tables.push_back(std::move(t));
    }
    if (!a.related.empty() || !a.topic.empty()) {
      Table t{"embeddings", {}, {}};
      if (!a.related.empty()) copy_columns(t, read_csv(a.related), {{"rho", "relatedness_rho"}});
      if (!a.topic.empty()) {
        copy_columns(t, read_csv(a.topic), {{"micro_f1", "topic_micro_f1"}, {"macro_f1", "topic_macro_f1"}});
      }
      tables.push_back(std::move(t));
    }

    std::string rel = comment_line(c.header());
    rel += "table,metric,dataset,logs_value,value,relative_difference_pct\n";
    for (const auto& t : tables) {
      c.write_output("table_" + t.name + ".csv", format_table(t, c.header()));
      const auto base = t.cells.find(kBaseline);
      if (base == t.cells.end()) {
        fmt::print(stderr, "navsynth: table {} has no {} row; no relative differences\n", t.name, kBaseline);
        continue;
      }
      for (const auto& m : t.metrics) {
        const auto bit = base->second.find(m);
        if (bit == base->second.end()) continue;
        const auto b = parse_value(bit->second);
        if (!b || *b == 0.0) continue;
        for (const auto& d : ordered_datasets(t)) {
          if (d == kBaseline) continue;
          const auto& row = t.cells.at(d);
          const auto it = row.find(m);
          if (it == row.end()) continue;
          const auto v = parse_value(it->second);
          if (!v) continue;
          rel += fmt::format("{},{},{},{},{},{:.4f}\n", t.name, m, d, bit->second, it->second,
                             relative_difference(*b, *v));
        }
      }
    }
    c.write_output("relative_difference.csv", rel);
    fmt::print("tables={}\n", tables.size());
  });
}

}  // namespace

void register_report_command(Registry& registry) { register_report(registry); }

}  // namespace navsynth::cli
