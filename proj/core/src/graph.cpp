#include "navsynth/graph.hpp"

#include <algorithm>
#include <charconv>

#include "navsynth/error.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {

// ---------------------------------------------------------------------------
// HyperlinkGraph

HyperlinkGraph HyperlinkGraph::from_edges(std::size_t num_nodes, std::vector<Edge> edges,
                                          BuildStats* stats) {
  BuildStats local;
  const auto loops = std::remove_if(edges.begin(), edges.end(),
                                    [](const Edge& e) { return e.first == e.second; });
  local.self_loops_dropped = static_cast<std::size_t>(edges.end() - loops);
  edges.erase(loops, edges.end());
  std::sort(edges.begin(), edges.end());
  const auto dup = std::unique(edges.begin(), edges.end());
  local.duplicates_collapsed = static_cast<std::size_t>(edges.end() - dup);
  edges.erase(dup, edges.end());

  for (const auto& [s, t] : edges) num_nodes = std::max<std::size_t>(num_nodes, std::max(s, t) + 1ULL);

  HyperlinkGraph g;
  g.offsets_.assign(num_nodes + 1, 0);
  g.targets_.reserve(edges.size());
  for (const auto& [s, t] : edges) {
    ++g.offsets_[s + 1];
    g.targets_.push_back(t);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
  if (stats != nullptr) *stats = local;
  return g;
}

HyperlinkGraph HyperlinkGraph::from_csr(std::vector<std::uint64_t> offsets,
                                        std::vector<ArticleId> targets) {
  if (offsets.empty() || offsets.front() != 0 || offsets.back() != targets.size()) {
    throw Error("malformed CSR graph");
  }
  const std::size_t n = offsets.size() - 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (offsets[v] > offsets[v + 1]) throw Error("malformed CSR graph offsets");
    for (std::uint64_t i = offsets[v]; i < offsets[v + 1]; ++i) {
      if (targets[i] >= n || targets[i] == v) throw Error("malformed CSR graph target");
      if (i > offsets[v] && targets[i - 1] >= targets[i]) throw Error("CSR successors not sorted");
    }
  }
  HyperlinkGraph g;
  g.offsets_ = std::move(offsets);
  g.targets_ = std::move(targets);
  return g;
}

std::span<const ArticleId> HyperlinkGraph::successors(ArticleId v) const noexcept {
  if (v >= num_nodes()) return {};
  return std::span<const ArticleId>(targets_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

bool HyperlinkGraph::has_edge(ArticleId s, ArticleId t) const noexcept {
  const auto succ = successors(s);
  return std::binary_search(succ.begin(), succ.end(), t);
}

std::vector<Edge> HyperlinkGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (ArticleId v = 0; v < num_nodes(); ++v) {
    for (ArticleId t : successors(v)) out.emplace_back(v, t);
  }
  return out;
}

HyperlinkGraph load_edge_list(const std::filesystem::path& path, Interner& names,
                              EdgeListStats* stats) {
  LineReader reader(path);
  std::vector<Edge> edges;
  std::string line;
  EdgeListStats local;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(reader.file_name(), reader.line_number(),
                       "expected source<TAB>target, got '" + line + "'");
    }
    ++local.lines;
    edges.emplace_back(names.intern(fields[0]), names.intern(fields[1]));
  }
  HyperlinkGraph::BuildStats build;
  auto g = HyperlinkGraph::from_edges(names.size(), std::move(edges), &build);
  local.self_loops_dropped = build.self_loops_dropped;
  local.duplicates_collapsed = build.duplicates_collapsed;
  if (stats != nullptr) *stats = local;
  return g;
}

// ---------------------------------------------------------------------------
// ClickstreamTable

ClickstreamTable ClickstreamTable::from_entries(std::vector<ClickEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const ClickEntry& a, const ClickEntry& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  ClickstreamTable t;
  std::size_t bound = 0;
  for (const auto& e : entries) {
    if (e.count == 0) throw Error("clickstream counts must be positive");
    if (!t.entries_.empty() && t.entries_.back().source == e.source &&
        t.entries_.back().target == e.target) {
      t.entries_.back().count += e.count;
    } else {
      t.entries_.push_back(e);
    }
    bound = std::max<std::size_t>(bound, std::max(e.source, e.target) + 1ULL);
  }
  t.source_totals_.assign(bound, 0);
  t.target_totals_.assign(bound, 0);
  for (const auto& e : t.entries_) {
    t.source_totals_[e.source] += e.count;
    t.target_totals_[e.target] += e.count;
    t.total_ += e.count;
  }
  return t;
}

std::span<const ClickEntry> ClickstreamTable::entries_from(ArticleId source) const noexcept {
  const auto lo = std::lower_bound(entries_.begin(), entries_.end(), source,
                                   [](const ClickEntry& e, ArticleId s) { return e.source < s; });
  auto hi = lo;
  while (hi != entries_.end() && hi->source == source) ++hi;
  return {lo, hi};
}

std::optional<std::uint64_t> ClickstreamTable::count(ArticleId source, ArticleId target) const noexcept {
  for (const auto& e : entries_from(source)) {
    if (e.target == target) return e.count;
  }
  return std::nullopt;
}

std::uint64_t ClickstreamTable::source_total(ArticleId source) const noexcept {
  return source < source_totals_.size() ? source_totals_[source] : 0;
}

std::uint64_t ClickstreamTable::target_total(ArticleId target) const noexcept {
  return target < target_totals_.size() ? target_totals_[target] : 0;
}

ClickstreamTable load_clickstream(const std::filesystem::path& path, Interner& names,
                                  const std::set<std::string, std::less<>>& link_types,
                                  ClickstreamStats* stats) {
  LineReader reader(path);
  std::vector<ClickEntry> entries;
  ClickstreamStats local;
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(reader.file_name(), reader.line_number(),
                       "expected prev<TAB>curr<TAB>type<TAB>count");
    }
    ++local.rows;
    std::uint64_t count = 0;
    const auto* end = fields[3].data() + fields[3].size();
    const auto [ptr, ec] = std::from_chars(fields[3].data(), end, count);
    if (ec != std::errc{} || ptr != end || count == 0) {
      throw ParseError(reader.file_name(), reader.line_number(),
                       "count must be a positive integer, got '" + std::string(fields[3]) + "'");
    }
    if (!link_types.contains(fields[2])) {
      ++local.skipped_type;
      continue;
    }
    if (fields[0] == fields[1]) {
      ++local.self_loops_dropped;
      continue;
    }
    ++local.kept;
    entries.push_back({names.intern(fields[0]), names.intern(fields[1]), count});
  }
  if (stats != nullptr) *stats = local;
  return ClickstreamTable::from_entries(std::move(entries));
}

ClickstreamTable apply_k_anonymity(const ClickstreamTable& table, std::uint64_t threshold) {
  std::vector<ClickEntry> kept;
  kept.reserve(table.size());
  for (const auto& e : table.entries()) {
    if (e.count > threshold) kept.push_back(e);
  }
  return ClickstreamTable::from_entries(std::move(kept));
}

// ---------------------------------------------------------------------------
// TransitionModel

std::span<const ArticleId> TransitionModel::successors(ArticleId v) const noexcept {
  if (v >= num_nodes()) return {};
  return std::span<const ArticleId>(targets_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::span<const double> TransitionModel::probabilities(ArticleId v) const noexcept {
  if (v >= num_nodes()) return {};
  return std::span<const double>(probs_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

bool TransitionModel::has_transition(ArticleId s, ArticleId t) const noexcept {
  const auto succ = successors(s);
  return std::binary_search(succ.begin(), succ.end(), t);
}

ArticleId TransitionModel::sample_successor(ArticleId v, RngStream& rng) const noexcept {
  const std::uint64_t begin = offsets_[v];
  const std::uint64_t end = offsets_[v + 1];
  const double u = rng.uniform();
  const auto first = cumulative_.begin() + static_cast<std::ptrdiff_t>(begin);
  const auto last = cumulative_.begin() + static_cast<std::ptrdiff_t>(end);
  auto it = std::upper_bound(first, last, u);
  if (it == last) --it;
  return targets_[static_cast<std::size_t>(it - cumulative_.begin())];
}

TransitionModel TransitionModel::with_stops(std::span<const double> stops) const {
  TransitionModel m = *this;
  m.stop_.assign(num_nodes(), 0.0);
  for (std::size_t v = 0; v < num_nodes() && v < stops.size(); ++v) {
    if (!(stops[v] >= 0.0 && stops[v] <= 1.0)) throw Error("stop probability outside [0,1]");
    m.stop_[v] = stops[v];
  }
  for (std::size_t v = 0; v < num_nodes(); ++v) {
    const double old_mass = 1.0 - stop_probability(static_cast<ArticleId>(v));
    const double new_mass = 1.0 - m.stop_[v];
    for (std::uint64_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
      m.probs_[i] = old_mass > 0.0 ? probs_[i] / old_mass * new_mass : 0.0;
    }
  }
  return m;
}

TransitionModel build_transition_model(const HyperlinkGraph& graph, const ClickstreamTable* weights,
                                       bool restrict_to_graph) {
  TransitionModel m;
  std::vector<std::vector<std::pair<ArticleId, double>>> rows;
  if (weights == nullptr) {
    m.kind_ = TransitionKind::uniform;
    m.dataset_kind_ = DatasetKind::graph;
    rows.resize(graph.num_nodes());
    for (ArticleId v = 0; v < graph.num_nodes(); ++v) {
      const auto succ = graph.successors(v);
      const double p = succ.empty() ? 0.0 : 1.0 / static_cast<double>(succ.size());
      for (ArticleId t : succ) rows[v].emplace_back(t, p);
    }
  } else {
    m.kind_ = TransitionKind::weighted;
    m.dataset_kind_ = DatasetKind::clickstream_priv;
    rows.resize(std::max(graph.num_nodes(), weights->id_bound()));
    std::vector<std::uint64_t> kept_totals(rows.size(), 0);
    std::vector<const ClickEntry*> kept;
    kept.reserve(weights->size());
    for (const auto& e : weights->entries()) {
      if (restrict_to_graph && !graph.has_edge(e.source, e.target)) {
        m.stats_.dropped_clicks += e.count;
        ++m.stats_.dropped_pairs;
        continue;
      }
      kept.push_back(&e);
      kept_totals[e.source] += e.count;
      m.stats_.kept_clicks += e.count;
    }
    if (kept.empty()) throw Error("empty transition model");
    for (const auto* e : kept) {
      rows[e->source].emplace_back(
          e->target, static_cast<double>(e->count) / static_cast<double>(kept_totals[e->source]));
    }
  }

  m.offsets_.assign(rows.size() + 1, 0);
  for (std::size_t v = 0; v < rows.size(); ++v) {
    m.offsets_[v + 1] = m.offsets_[v] + rows[v].size();
    double running = 0.0;
    for (std::size_t i = 0; i < rows[v].size(); ++i) {
      const auto [t, p] = rows[v][i];
      running += p;
      m.targets_.push_back(t);
      m.probs_.push_back(p);
      m.cumulative_.push_back(i + 1 == rows[v].size() ? 1.0 : running);
    }
  }
  return m;
}

}  // namespace navsynth
