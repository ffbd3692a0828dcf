#include "navsynth/embedding.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "navsynth/error.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {

void EmbeddingTable::set(ArticleId id, std::span<const double> vec) {
  if (vec.size() != dimension_) throw Error("embedding dimension mismatch");
  if (std::all_of(vec.begin(), vec.end(), [](double x) { return x == 0.0; })) {
    throw Error("embedding vector is all zeros");
  }
  if (id >= present_.size()) {
    present_.resize(id + 1ULL, false);
    data_.resize(present_.size() * dimension_, 0.0);
  }
  if (!present_[id]) ++count_;
  present_[id] = true;
  std::copy(vec.begin(), vec.end(), data_.begin() + static_cast<std::ptrdiff_t>(id * dimension_));
}

std::span<const double> EmbeddingTable::get(ArticleId id) const {
  if (!contains(id)) throw Error("no embedding for article id " + std::to_string(id));
  return std::span<const double>(data_).subspan(id * dimension_, dimension_);
}

std::span<double> EmbeddingTable::mutable_get(ArticleId id) {
  if (!contains(id)) throw Error("no embedding for article id " + std::to_string(id));
  return std::span<double>(data_).subspan(id * dimension_, dimension_);
}

std::vector<ArticleId> EmbeddingTable::coverage() const {
  std::vector<ArticleId> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < present_.size(); ++i) {
    if (present_[i]) out.push_back(static_cast<ArticleId>(i));
  }
  return out;
}

void EmbeddingTable::scale(double factor) {
  if (!(factor > 0.0)) throw Error("embedding scale factor must be positive");
  for (auto& x : data_) x *= factor;
}

namespace {

double parse_double(std::string_view text, const LineReader& reader) {
  // std::from_chars for double is not available in every libstdc++ we target.
  std::string buf(text);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || buf.empty() || !std::isfinite(v)) {
    throw ParseError(reader.file_name(), reader.line_number(), "bad number '" + buf + "'");
  }
  return v;
}

std::size_t parse_size(std::string_view text, const LineReader& reader) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(reader.file_name(), reader.line_number(), "bad integer '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

EmbeddingTable load_embeddings(const std::filesystem::path& path, Interner& names,
                               EmbeddingLoadStats* stats) {
  LineReader reader(path);
  std::string line;
  bool have_header = false;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    have_header = true;
    break;
  }
  if (!have_header) throw ParseError(reader.file_name(), reader.line_number(), "missing header 'N dim'");
  const auto header = split_ws(line);
  if (header.size() != 2) throw ParseError(reader.file_name(), reader.line_number(), "header must be 'N dim'");
  const std::size_t expected_rows = parse_size(header[0], reader);
  const std::size_t dim = parse_size(header[1], reader);
  if (dim == 0) throw ParseError(reader.file_name(), 1, "dimension must be positive");

  EmbeddingTable table(dim);
  EmbeddingLoadStats local;
  std::vector<double> vec(dim);
  while (reader.next(line)) {
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw ParseError(reader.file_name(), reader.line_number(),
                       fmt::format("expected {} values, found {}", dim, fields.size() - 1));
    }
    ++local.rows;
    for (std::size_t i = 0; i < dim; ++i) vec[i] = parse_double(fields[i + 1], reader);
    const ArticleId id = names.intern(fields[0]);
    if (std::all_of(vec.begin(), vec.end(), [](double x) { return x == 0.0; })) {
      ++local.zero_vectors_dropped;
      continue;
    }
    table.set(id, vec);
  }
  if (local.rows != expected_rows) {
    throw ParseError(reader.file_name(), reader.line_number(),
                     fmt::format("header declares {} rows, found {}", expected_rows, local.rows));
  }
  if (stats != nullptr) *stats = local;
  return table;
}

std::string format_embeddings(const EmbeddingTable& table, const Interner& names,
                              std::string_view comment) {
  const auto ids = table.coverage();
  std::string out = comment_line(comment);
  out += fmt::format("{} {}\n", ids.size(), table.dimension());
  for (ArticleId id : ids) {
    out += names.name(id);
    for (double x : table.get(id)) {
      out += ' ';
      out += fmt::format("{}", x);
    }
    out += '\n';
  }
  return out;
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table,
                      const Interner& names, std::string_view comment) {
  write_file(path, format_embeddings(table, names, comment));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("cosine distance: dimension mismatch");
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw Error("cosine distance undefined for zero vector");
  return std::clamp(1.0 - dot(a, b) / (na * nb), 0.0, 2.0);
}

}  // namespace navsynth
