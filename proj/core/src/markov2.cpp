#include "navsynth/markov2.hpp"

#include <algorithm>

#include "navsynth/error.hpp"
#include "navsynth/parallel.hpp"

namespace navsynth {

void Markov2Model::add(const Triple& t, std::uint64_t count) {
  if (count == 0) return;
  auto& ctx = contexts_[key(t.source, t.middle)];
  auto it = std::lower_bound(ctx.targets.begin(), ctx.targets.end(), t.target,
                             [](const auto& e, ArticleId id) { return e.first < id; });
  if (it != ctx.targets.end() && it->first == t.target) {
    it->second += count;
  } else {
    ctx.targets.insert(it, {t.target, count});
  }
  ctx.total += count;
  total_ += count;
}

void Markov2Model::merge(const Markov2Model& other) {
  for (const auto& [k, ctx] : other.contexts_) {
    const auto s1 = static_cast<ArticleId>(k >> 32);
    const auto s2 = static_cast<ArticleId>(k & 0xffffffffu);
    for (const auto& [t, c] : ctx.targets) add({s1, s2, t}, c);
  }
}

const Markov2Model::Context* Markov2Model::context(ArticleId s1, ArticleId s2) const noexcept {
  const auto it = contexts_.find(key(s1, s2));
  return it == contexts_.end() ? nullptr : &it->second;
}

std::uint64_t Markov2Model::count(ArticleId s1, ArticleId s2, ArticleId t) const noexcept {
  const Context* ctx = context(s1, s2);
  if (ctx == nullptr) return 0;
  auto it = std::lower_bound(ctx->targets.begin(), ctx->targets.end(), t,
                             [](const auto& e, ArticleId id) { return e.first < id; });
  return (it != ctx->targets.end() && it->first == t) ? it->second : 0;
}

std::uint64_t Markov2Model::context_total(ArticleId s1, ArticleId s2) const noexcept {
  const Context* ctx = context(s1, s2);
  return ctx == nullptr ? 0 : ctx->total;
}

double Markov2Model::probability(ArticleId s1, ArticleId s2, ArticleId t) const noexcept {
  const std::uint64_t total = context_total(s1, s2);
  if (total == 0) return 0.0;
  return static_cast<double>(count(s1, s2, t)) / static_cast<double>(total);
}

Markov2Model fit_markov2(std::span<const Triple> triples, std::size_t workers) {
  workers = std::max<std::size_t>(1, std::min(workers, triples.size() / 10000 + 1));
  std::vector<Markov2Model> shards(workers);
  const std::size_t per = (triples.size() + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    const std::size_t lo = std::min(triples.size(), w * per);
    const std::size_t hi = std::min(triples.size(), lo + per);
    for (std::size_t i = lo; i < hi; ++i) shards[w].add(triples[i]);
  });
  Markov2Model model = std::move(shards[0]);
  for (std::size_t w = 1; w < workers; ++w) model.merge(shards[w]);
  return model;
}

std::vector<ArticleId> rank_next(const Markov2Model& model, const HyperlinkGraph& graph,
                                 ArticleId s1, ArticleId s2) {
  if (s2 >= graph.num_nodes()) return {};
  const auto succ = graph.successors(s2);
  std::vector<std::pair<std::uint64_t, ArticleId>> keyed;
  keyed.reserve(succ.size());
  for (ArticleId t : succ) keyed.emplace_back(model.count(s1, s2, t), t);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<ArticleId> out;
  out.reserve(keyed.size());
  for (const auto& [c, t] : keyed) out.push_back(t);
  return out;
}

std::size_t rank_of(const Markov2Model& model, const HyperlinkGraph& graph, ArticleId s1,
                    ArticleId s2, ArticleId target) {
  if (s2 >= graph.num_nodes() || !graph.has_edge(s2, target)) return 0;
  const std::uint64_t ct = model.count(s1, s2, target);
  std::size_t rank = 1;
  for (ArticleId t : graph.successors(s2)) {
    if (t == target) continue;
    const std::uint64_t c = model.count(s1, s2, t);
    if (c > ct || (c == ct && t < target)) ++rank;
  }
  return rank;
}

MrrResult evaluate_mrr(const Markov2Model& model, const HyperlinkGraph& graph,
                       std::span<const Triple> test, QueryFilter filter,
                       std::span<const Markov2Model* const> reference_models, std::size_t workers) {
  if (test.empty()) throw Error("evaluate_mrr: empty test set");
  if (filter == QueryFilter::filtered && reference_models.empty()) {
    throw Error("evaluate_mrr: filtered mode needs the compared models");
  }
  std::vector<char> keep(test.size(), 1);
  std::vector<double> rr(test.size(), 0.0);
  parallel_for(test.size(), workers, [&](std::size_t i) {
    const Triple& q = test[i];
    if (filter == QueryFilter::filtered) {
      for (const Markov2Model* m : reference_models) {
        if (m->context_total(q.source, q.middle) == 0) {
          keep[i] = 0;
          return;
        }
      }
    }
    const std::size_t r = rank_of(model, graph, q.source, q.middle, q.target);
    rr[i] = r == 0 ? 0.0 : 1.0 / static_cast<double>(r);
  });
  MrrResult out;
  double sum = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (!keep[i]) {
      ++out.dropped;
      continue;
    }
    out.reciprocal_ranks.push_back(rr[i]);
    sum += rr[i];
  }
  out.queries = out.reciprocal_ranks.size();
  if (out.queries == 0) throw Error("evaluate_mrr: no query survives filtering");
  out.mrr = sum / static_cast<double>(out.queries);
  return out;
}

}  // namespace navsynth
