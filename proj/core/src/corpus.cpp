#include "navsynth/corpus.hpp"

#include <algorithm>
#include <cctype>

#include "navsynth/error.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {

std::string_view to_string(DatasetKind kind) noexcept {
  switch (kind) {
    case DatasetKind::logs: return "Logs";
    case DatasetKind::clickstream_priv: return "Clickstream-Priv";
    case DatasetKind::clickstream_pub: return "Clickstream-Pub";
    case DatasetKind::clickstream_pub_intrinsic: return "Clickstream-Pub(I)";
    case DatasetKind::graph: return "Graph";
  }
  return "Logs";
}

std::string_view to_slug(DatasetKind kind) noexcept {
  switch (kind) {
    case DatasetKind::logs: return "logs";
    case DatasetKind::clickstream_priv: return "clickstream-priv";
    case DatasetKind::clickstream_pub: return "clickstream-pub";
    case DatasetKind::clickstream_pub_intrinsic: return "clickstream-pub-intrinsic";
    case DatasetKind::graph: return "graph";
  }
  return "logs";
}

std::optional<DatasetKind> parse_dataset_kind(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered == "logs" || lowered == "real") return DatasetKind::logs;
  if (lowered == "clickstream-priv") return DatasetKind::clickstream_priv;
  if (lowered == "clickstream-pub") return DatasetKind::clickstream_pub;
  if (lowered == "clickstream-pub(i)" || lowered == "clickstream-pub-intrinsic")
    return DatasetKind::clickstream_pub_intrinsic;
  if (lowered == "graph") return DatasetKind::graph;
  return std::nullopt;
}

std::size_t SequenceCorpus::flagged_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(sequences.begin(), sequences.end(), [](const auto& s) { return s.flagged; }));
}

std::string format_corpus(const SequenceCorpus& corpus, const Interner& names,
                          std::string_view comment) {
  std::string out = "#kind=";
  out += to_string(corpus.kind);
  out += '\n';
  if (!comment.empty()) {
    out += "# ";
    out += comment;
    out += '\n';
  }
  for (const auto& seq : corpus.sequences) {
    for (std::size_t i = 0; i < seq.pages.size(); ++i) {
      if (i > 0) out += '\t';
      out += names.name(seq.pages[i]);
    }
    out += '\n';
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, const SequenceCorpus& corpus,
                  const Interner& names, std::string_view comment) {
  write_file(path, format_corpus(corpus, names, comment));
}

SequenceCorpus read_corpus(const std::filesystem::path& path, Interner& names) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line)) throw ParseError(reader.file_name(), 1, "empty corpus file");
  constexpr std::string_view prefix = "#kind=";
  if (!line.starts_with(prefix)) {
    throw ParseError(reader.file_name(), 1, "corpus header must start with #kind=");
  }
  const auto kind = parse_dataset_kind(std::string_view(line).substr(prefix.size()));
  if (!kind) throw ParseError(reader.file_name(), 1, "unknown dataset kind '" + line + "'");

  SequenceCorpus corpus;
  corpus.kind = *kind;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    NavigationSequence seq;
    for (auto field : split(line, '\t')) {
      if (field.empty()) throw ParseError(reader.file_name(), reader.line_number(), "empty article name");
      seq.pages.push_back(names.intern(field));
    }
    corpus.sequences.push_back(std::move(seq));
  }
  return corpus;
}

}  // namespace navsynth
