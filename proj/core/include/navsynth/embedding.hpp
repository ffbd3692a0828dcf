#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "navsynth/interner.hpp"

namespace navsynth {

// Dense vector per article. All vectors share dimension(); stored vectors are
// never all-zero.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return count_; }
  bool contains(ArticleId id) const noexcept { return id < present_.size() && present_[id]; }

  // Throws on dimension mismatch or an all-zero vector.
  void set(ArticleId id, std::span<const double> vec);
  std::span<const double> get(ArticleId id) const;
  std::span<double> mutable_get(ArticleId id);

  // Embedded ids, ascending.
  std::vector<ArticleId> coverage() const;

  // Multiplies every vector by `factor` (> 0).
  void scale(double factor);

 private:
  std::size_t dimension_ = 0;
  std::size_t count_ = 0;
  std::vector<double> data_;
  std::vector<bool> present_;
};

struct EmbeddingLoadStats {
  std::size_t rows = 0;
  std::size_t zero_vectors_dropped = 0;
};

// Text format: optional leading '#' comment lines, header "N dim", then N rows "name v1 ... v_dim" separated by
// whitespace. Row dimension mismatches raise ParseError with the line number.
// All-zero rows are dropped and counted.
EmbeddingTable load_embeddings(const std::filesystem::path& path, Interner& names,
                               EmbeddingLoadStats* stats = nullptr);

// Shortest round-trip decimal representation of each value.
std::string format_embeddings(const EmbeddingTable& table, const Interner& names,
                              std::string_view comment = {});
void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table,
                      const Interner& names, std::string_view comment = {});

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

// 1 - cos(a, b), in [0, 2]. Throws for zero vectors or mismatched sizes.
double cosine_distance(std::span<const double> a, std::span<const double> b);
inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  return 1.0 - cosine_distance(a, b);
}

}  // namespace navsynth
