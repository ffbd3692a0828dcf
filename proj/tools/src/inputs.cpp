#include "inputs.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <map>

#include "navsynth/cache.hpp"
#include "navsynth/error.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth::cli {

void InputSet::adopt_names(const std::filesystem::path& names_file) {
  const auto canonical = std::filesystem::weakly_canonical(names_file);
  if (names_source_) {
    if (*names_source_ != canonical) {
      throw Error("cached inputs come from different name tables: " + names_source_->string() + " and " +
                  canonical.string());
    }
    return;
  }
  if (names_.size() != 0) {
    throw Error("binary caches must be given before text inputs (" + names_file.string() + ")");
  }
  if (!std::filesystem::exists(names_file)) {
    throw Error("cache needs its name table next to it: " + names_file.string() + " is missing");
  }
  names_ = Interner::read_tsv(names_file);
  names_source_ = canonical;
}

HyperlinkGraph InputSet::graph(const std::filesystem::path& path) {
  if (path.extension() == ".nsg") {
    adopt_names(path.parent_path() / "names.tsv");
    auto g = read_graph_cache(path);
    if (g.num_nodes() > names_.size()) throw Error(path.string() + ": graph has more nodes than names.tsv");
    return g;
  }
  return load_edge_list(path, names_);
}

ClickstreamTable InputSet::clickstream(const std::filesystem::path& path) {
  if (path.extension() == ".nsc") {
    adopt_names(path.parent_path() / "names.tsv");
    auto t = read_clickstream_cache(path);
    if (t.id_bound() > names_.size()) throw Error(path.string() + ": clickstream mentions unknown ids");
    return t;
  }
  return load_clickstream(path, names_);
}

SequenceCorpus InputSet::corpus(const std::filesystem::path& path) { return read_corpus(path, names_); }

EmbeddingTable InputSet::embeddings(const std::filesystem::path& path) {
  return load_embeddings(path, names_);
}

HyperlinkGraph InputSet::cover(const HyperlinkGraph& graph) const {
  if (graph.num_nodes() >= names_.size()) return graph;
  return HyperlinkGraph::from_edges(names_.size(), graph.edges());
}

std::vector<std::string> dataset_labels(const std::vector<SequenceCorpus>& corpora) {
  std::map<std::string, int> seen;
  std::vector<std::string> out;
  for (const auto& c : corpora) {
    std::string label(to_string(c.kind));
    const int n = ++seen[label];
    if (n > 1) label += fmt::format("-{}", n);
    out.push_back(label);
  }
  return out;
}

std::filesystem::path cache_directory(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("NAVSYNTH_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return fallback;
}

std::string embedding_label(const std::filesystem::path& path) {
  const std::string stem = path.stem().string();
  if (stem.starts_with("emb_")) {
    if (auto kind = parse_dataset_kind(std::string_view(stem).substr(4))) return std::string(to_string(*kind));
  }
  return stem;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(fmt::format("missing column '{}'", name));
}

CsvTable read_csv(const std::filesystem::path& path) {
  LineReader reader(path);
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    if (line.find('"') != std::string::npos) {
      throw ParseError(reader.file_name(), reader.line_number(), "quoted CSV fields are not supported");
    }
    std::vector<std::string> fields;
    for (auto f : split(line, ',')) fields.emplace_back(f);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError(reader.file_name(), reader.line_number(),
                       fmt::format("expected {} fields, found {}", table.header.size(), fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw ParseError(reader.file_name(), reader.line_number(), "missing header row");
  return table;
}

std::string format_edge_list(const HyperlinkGraph& graph, const Interner& names, std::string_view comment) {
  std::string out = comment_line(comment);
  for (const auto& [s, t] : graph.edges()) {
    out += names.name(s);
    out += '\t';
    out += names.name(t);
    out += '\n';
  }
  return out;
}

std::string format_clickstream(const ClickstreamTable& table, const Interner& names, std::string_view comment) {
  std::string out = comment_line(comment);
  for (const auto& e : table.entries()) {
    out += fmt::format("{}\t{}\tlink\t{}\n", names.name(e.source), names.name(e.target), e.count);
  }
  return out;
}

}  // namespace navsynth::cli
