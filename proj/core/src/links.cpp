#include "navsynth/links.hpp"

#include <algorithm>
#include <unordered_set>

#include "navsynth/error.hpp"

namespace navsynth {
namespace {

std::uint64_t pack(ArticleId s, ArticleId t) noexcept {
  return (static_cast<std::uint64_t>(s) << 32) | t;
}

LinkPair unpack(std::uint64_t k) noexcept {
  return {static_cast<ArticleId>(k >> 32), static_cast<ArticleId>(k & 0xffffffffu)};
}

bool old_edge(const HyperlinkGraph& g, LinkPair p) {
  return p.source < g.num_nodes() && g.has_edge(p.source, p.target);
}

}  // namespace

bool LabeledLinkSet::is_positive(LinkPair p) const {
  return std::binary_search(positives.begin(), positives.end(), p);
}

bool LabeledLinkSet::is_negative(LinkPair p) const {
  return std::binary_search(negatives.begin(), negatives.end(), p);
}

std::unordered_map<std::uint64_t, std::uint32_t> count_indirect_paths(
    const SequenceCorpus& corpus, std::span<const ArticleId> sources,
    std::span<const ArticleId> targets) {
  const std::unordered_set<ArticleId> src(sources.begin(), sources.end());
  const std::unordered_set<ArticleId> tgt(targets.begin(), targets.end());
  std::unordered_map<std::uint64_t, std::uint32_t> counts;
  std::vector<std::uint64_t> seen;
  for (const auto& seq : corpus.sequences) {
    seen.clear();
    const auto& p = seq.pages;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const bool from_source = src.contains(p[i]);
      for (std::size_t j = i + 1; j < p.size(); ++j) {
        if (p[i] == p[j]) continue;
        if (from_source || tgt.contains(p[j])) seen.push_back(pack(p[i], p[j]));
      }
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (std::uint64_t k : seen) ++counts[k];
  }
  return counts;
}

LabeledLinkSet build_added_links(const HyperlinkGraph& old_graph, const HyperlinkGraph& new_graph,
                                 const SequenceCorpus& reference, std::size_t min_paths) {
  std::vector<LinkPair> added;
  for (const auto& e : new_graph.edges()) {
    const LinkPair p{e.first, e.second};
    if (!old_edge(old_graph, p)) added.push_back(p);
  }
  std::vector<ArticleId> sources;
  std::vector<ArticleId> targets;
  for (const auto& p : added) {
    sources.push_back(p.source);
    targets.push_back(p.target);
  }
  const auto counts = count_indirect_paths(reference, sources, targets);
  const auto support = [&](LinkPair p) -> std::size_t {
    const auto it = counts.find(pack(p.source, p.target));
    return it == counts.end() ? 0 : it->second;
  };

  LabeledLinkSet out;
  for (const auto& p : added) {
    if (support(p) >= min_paths) out.positives.push_back(p);
  }
  if (out.positives.empty()) throw Error("build_added_links: no added link has enough path support");
  std::sort(out.positives.begin(), out.positives.end());

  std::unordered_set<ArticleId> pos_sources;
  std::unordered_set<ArticleId> pos_targets;
  for (const auto& p : out.positives) {
    pos_sources.insert(p.source);
    pos_targets.insert(p.target);
  }
  for (const auto& [k, c] : counts) {
    if (c < min_paths) continue;
    const LinkPair p = unpack(k);
    if (!pos_sources.contains(p.source) && !pos_targets.contains(p.target)) continue;
    if (old_edge(old_graph, p) || out.is_positive(p)) continue;
    out.negatives.push_back(p);
  }
  std::sort(out.negatives.begin(), out.negatives.end());
  return out;
}

PathProportionIndex::PathProportionIndex(const SequenceCorpus& corpus) {
  std::vector<ArticleId> later;
  for (const auto& seq : corpus.sequences) {
    if (seq.pages.empty()) continue;
    const ArticleId s = seq.pages.front();
    ++starts_[s];
    later.assign(seq.pages.begin() + 1, seq.pages.end());
    std::sort(later.begin(), later.end());
    later.erase(std::unique(later.begin(), later.end()), later.end());
    for (ArticleId t : later) ++reaches_[pack(s, t)];
  }
}

std::uint64_t PathProportionIndex::starts(ArticleId s) const noexcept {
  const auto it = starts_.find(s);
  return it == starts_.end() ? 0 : it->second;
}

std::uint64_t PathProportionIndex::reaches(ArticleId s, ArticleId t) const noexcept {
  const auto it = reaches_.find(pack(s, t));
  return it == reaches_.end() ? 0 : it->second;
}

std::optional<double> PathProportionIndex::proportion(ArticleId s, ArticleId t) const noexcept {
  const std::uint64_t n = starts(s);
  if (n == 0) return std::nullopt;
  return static_cast<double>(reaches(s, t)) / static_cast<double>(n);
}

std::optional<double> path_proportion(const SequenceCorpus& corpus, ArticleId s, ArticleId t) {
  std::uint64_t n = 0;
  std::uint64_t hit = 0;
  for (const auto& seq : corpus.sequences) {
    if (seq.pages.empty() || seq.pages.front() != s) continue;
    ++n;
    if (std::find(seq.pages.begin() + 1, seq.pages.end(), t) != seq.pages.end()) ++hit;
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(hit) / static_cast<double>(n);
}

std::vector<RankedLink> rank_links(const PathProportionIndex& index,
                                   std::span<const LinkPair> candidates) {
  std::vector<RankedLink> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (const auto p = index.proportion(c.source, c.target)) out.push_back({c, *p});
  }
  std::sort(out.begin(), out.end(), [](const RankedLink& a, const RankedLink& b) {
    if (a.proportion != b.proportion) return a.proportion > b.proportion;
    return a.link < b.link;
  });
  return out;
}

std::vector<PrecisionAtK> precision_at_k(std::span<const RankedLink> ranked,
                                         const LabeledLinkSet& labels,
                                         std::span<const std::size_t> ks) {
  std::vector<std::size_t> prefix(ranked.size() + 1, 0);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    prefix[i + 1] = prefix[i] + (labels.is_positive(ranked[i].link) ? 1 : 0);
  }
  std::vector<PrecisionAtK> out;
  out.reserve(ks.size());
  for (std::size_t k : ks) {
    if (k == 0) throw Error("precision_at_k: k must be positive");
    PrecisionAtK r;
    r.k = k;
    r.cutoff = std::min(k, ranked.size());
    r.truncated = k > ranked.size();
    r.precision = r.cutoff == 0 ? 0.0
                                : static_cast<double>(prefix[r.cutoff]) / static_cast<double>(r.cutoff);
    out.push_back(r);
  }
  return out;
}

}  // namespace navsynth
