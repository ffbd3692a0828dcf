#include "navsynth/synth.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "navsynth/error.hpp"
#include "navsynth/parallel.hpp"

namespace navsynth {

void StoppingRule::validate() const {
  if (variant != Variant::intrinsic) return;
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("intrinsic stopping: epsilon must be in (0,1)");
  if (max_length < 2) throw Error("intrinsic stopping: max_length must be >= 2");
}

namespace {

// Samples among successors of `node` that are not in `excluded`, using the
// row's conditional probabilities. Returns kNoArticle when nothing is left.
ArticleId sample_excluding(const TransitionModel& model, ArticleId node,
                           const std::vector<ArticleId>& excluded, RngStream& rng) {
  const auto succ = model.successors(node);
  if (excluded.empty()) return succ.empty() ? kNoArticle : model.sample_successor(node, rng);

  const auto probs = model.probabilities(node);
  const double mass = 1.0 - model.stop_probability(node);
  double remaining = 0.0;
  std::size_t remaining_count = 0;
  for (std::size_t i = 0; i < succ.size(); ++i) {
    if (std::find(excluded.begin(), excluded.end(), succ[i]) != excluded.end()) continue;
    remaining += mass > 0.0 ? probs[i] / mass : 1.0;
    ++remaining_count;
  }
  if (remaining_count == 0) return kNoArticle;
  double u = rng.uniform() * remaining;
  ArticleId last = kNoArticle;
  for (std::size_t i = 0; i < succ.size(); ++i) {
    if (std::find(excluded.begin(), excluded.end(), succ[i]) != excluded.end()) continue;
    last = succ[i];
    u -= mass > 0.0 ? probs[i] / mass : 1.0;
    if (u < 0.0) return succ[i];
  }
  return last;
}

}  // namespace

NavigationSequence generate_sequence(const TransitionModel& model, const WalkSpec& spec, RngStream& rng) {
  NavigationSequence seq;
  seq.pages.push_back(spec.start);
  if (!model.contains(spec.start)) {
    seq.flagged = spec.target_length > 1;
    return seq;
  }
  // excluded[i]: children of pages[i] known to dead-end.
  std::vector<std::vector<ArticleId>> excluded(1);
  std::size_t dead_ends = 0;
  while (seq.pages.size() < spec.target_length) {
    const ArticleId current = seq.pages.back();
    const ArticleId next = sample_excluding(model, current, excluded.back(), rng);
    if (next != kNoArticle) {
      seq.pages.push_back(next);
      excluded.emplace_back();
      continue;
    }
    if (seq.pages.size() == 1 || ++dead_ends > kBacktrackBudget) {
      seq.flagged = true;
      return seq;
    }
    seq.pages.pop_back();
    excluded.pop_back();
    excluded.back().push_back(current);
  }
  return seq;
}

NavigationSequence generate_sequence_intrinsic(const TransitionModel& model, ArticleId start,
                                               RngStream& rng, const StoppingRule& rule) {
  rule.validate();
  NavigationSequence seq;
  seq.pages.push_back(start);
  if (!model.contains(start)) {
    seq.flagged = true;
    return seq;
  }
  while (seq.pages.size() < rule.max_length) {
    const ArticleId current = seq.pages.back();
    if (model.is_terminal(current)) break;
    if (rng.uniform() < model.stop_probability(current)) break;
    seq.pages.push_back(model.sample_successor(current, rng));
  }
  return seq;
}

std::string GenerationReport::to_json_line() const {
  nlohmann::ordered_json j;
  j["event"] = "generation";
  j["kind"] = std::string(to_string(kind));
  j["seed"] = seed;
  j["sequences"] = sequences;
  j["flagged"] = flagged;
  j["missing_start"] = missing_start;
  j["dropped_click_mass"] = dropped_click_mass;
  j["dropped_pairs"] = dropped_pairs;
  j["stopping"] = rule.variant == StoppingRule::Variant::intrinsic ? "intrinsic" : "extrinsic-length";
  if (rule.variant == StoppingRule::Variant::intrinsic) {
    j["epsilon"] = rule.epsilon;
    j["max_length"] = rule.max_length;
  }
  j["backtrack_budget"] = kBacktrackBudget;
  return j.dump();
}

SequenceCorpus generate_corpus(const TransitionModel& model, const SequenceCorpus& reference,
                               const StoppingRule& rule, std::uint64_t seed, std::size_t workers,
                               GenerationReport* report) {
  if (reference.empty()) throw Error("generate_corpus: empty reference corpus");
  rule.validate();
  const bool intrinsic = rule.variant == StoppingRule::Variant::intrinsic;

  SequenceCorpus out;
  out.kind = intrinsic ? DatasetKind::clickstream_pub_intrinsic : model.dataset_kind();
  out.sequences.resize(reference.size());
  std::vector<char> missing(reference.size(), 0);
  parallel_for(reference.size(), workers, [&](std::size_t i) {
    const auto& ref = reference.sequences[i];
    if (ref.pages.empty()) throw Error("generate_corpus: reference sequence " + std::to_string(i) + " is empty");
    RngStream rng(seed, i);
    const ArticleId start = ref.pages.front();
    if (!model.contains(start)) {
      missing[i] = 1;
      out.sequences[i] = NavigationSequence{{start}, true};
      return;
    }
    out.sequences[i] = intrinsic ? generate_sequence_intrinsic(model, start, rng, rule)
                                 : generate_sequence(model, {start, ref.pages.size()}, rng);
  });

  if (report != nullptr) {
    report->kind = out.kind;
    report->seed = seed;
    report->sequences = out.size();
    report->flagged = out.flagged_count();
    report->missing_start = static_cast<std::size_t>(std::count(missing.begin(), missing.end(), 1));
    report->dropped_click_mass = model.build_stats().dropped_clicks;
    report->dropped_pairs = model.build_stats().dropped_pairs;
    report->rule = rule;
  }
  return out;
}

std::vector<double> derive_intrinsic_stops(const ClickstreamTable& table, std::size_t num_nodes,
                                           double epsilon) {
  std::vector<double> stops(num_nodes, epsilon);
  for (std::size_t v = 0; v < num_nodes; ++v) {
    const auto in = static_cast<double>(table.target_total(static_cast<ArticleId>(v)));
    const auto out = static_cast<double>(table.source_total(static_cast<ArticleId>(v)));
    if (in > 0.0) stops[v] = std::clamp(1.0 - out / in, epsilon, 1.0);
  }
  return stops;
}

SynthesisPlan plan_synthesis(DatasetKind kind, const HyperlinkGraph& graph,
                             const ClickstreamTable* clickstream, const SynthesisOptions& options) {
  SynthesisPlan plan{TransitionModel{}, StoppingRule::extrinsic()};
  if (kind == DatasetKind::logs) throw Error("plan_synthesis: Logs is not a synthetic kind");
  if (kind == DatasetKind::graph) {
    plan.model = build_transition_model(graph, nullptr);
    plan.model.set_dataset_kind(kind);
    return plan;
  }
  if (clickstream == nullptr) {
    throw Error(fmt::format("plan_synthesis: {} needs a clickstream table", to_string(kind)));
  }
  if (kind == DatasetKind::clickstream_priv) {
    plan.model = build_transition_model(graph, clickstream);
    plan.model.set_dataset_kind(kind);
    return plan;
  }
  const ClickstreamTable published = apply_k_anonymity(*clickstream, options.k_threshold);
  plan.model = build_transition_model(graph, &published);
  plan.model.set_dataset_kind(kind);
  if (kind == DatasetKind::clickstream_pub_intrinsic) {
    const auto stops = derive_intrinsic_stops(published, plan.model.num_nodes(), options.epsilon);
    plan.model = plan.model.with_stops(stops);
    plan.model.set_dataset_kind(kind);
    plan.rule = StoppingRule::intrinsic(options.epsilon, options.max_length);
    plan.rule.validate();
  }
  return plan;
}

}  // namespace navsynth
