#include "navsynth/relatedness.hpp"

#include <cstdlib>
#include <string>

#include "navsynth/error.hpp"
#include "navsynth/stats.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {

RelatednessResult relatedness_eval(const EmbeddingTable& emb, std::span<const RelatednessPair> pairs) {
  std::vector<double> model;
  std::vector<double> human;
  RelatednessResult r;
  for (const auto& p : pairs) {
    if (!emb.contains(p.a) || !emb.contains(p.b)) {
      ++r.dropped;
      continue;
    }
    model.push_back(cosine_similarity(emb.get(p.a), emb.get(p.b)));
    human.push_back(p.score);
  }
  r.used = model.size();
  if (r.used < 3) throw Error("relatedness_eval: fewer than 3 pairs with embedded articles");
  r.rho = spearman(model, human);
  return r;
}

std::vector<RelatednessPair> load_relatedness_pairs(const std::filesystem::path& path, Interner& names) {
  LineReader reader(path);
  std::vector<RelatednessPair> out;
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() != 3) throw ParseError(reader.file_name(), reader.line_number(), "expected 3 fields");
    const std::string score_text(f[2]);
    char* end = nullptr;
    const double score = std::strtod(score_text.c_str(), &end);
    if (score_text.empty() || end != score_text.c_str() + score_text.size()) {
      throw ParseError(reader.file_name(), reader.line_number(), "bad score");
    }
    out.push_back({names.intern(f[0]), names.intern(f[1]), score});
  }
  return out;
}

}  // namespace navsynth
