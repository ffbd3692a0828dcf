#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "navsynth/corpus.hpp"
#include "navsynth/graph.hpp"
#include "navsynth/rng.hpp"

namespace navsynth {

struct WalkSpec {
  ArticleId start = 0;
  std::size_t target_length = 2;
};

struct StoppingRule {
  enum class Variant { extrinsic_length, intrinsic };

  Variant variant = Variant::extrinsic_length;
  double epsilon = 0.01;        // stop-probability floor for intrinsic stopping
  std::size_t max_length = 50;  // hard cap for intrinsic stopping

  static StoppingRule extrinsic() { return {}; }
  static StoppingRule intrinsic(double epsilon = 0.01, std::size_t max_length = 50) {
    return {Variant::intrinsic, epsilon, max_length};
  }
  void validate() const;
};

// Dead ends tolerated per sequence before giving up.
inline constexpr std::size_t kBacktrackBudget = 100;

// Walks from spec.start until spec.target_length pages. On a dead end the
// failing page is removed from its parent's candidate set and the parent
// resamples. If the start is terminal, or more than kBacktrackBudget dead ends
// occur, the partial walk is returned with `flagged` set.
NavigationSequence generate_sequence(const TransitionModel& model, const WalkSpec& spec, RngStream& rng);

// At each page stop with the page's stop probability, else step. Terminal pages
// stop; the walk never exceeds rule.max_length pages.
NavigationSequence generate_sequence_intrinsic(const TransitionModel& model, ArticleId start,
                                               RngStream& rng, const StoppingRule& rule);

struct GenerationReport {
  DatasetKind kind = DatasetKind::graph;
  std::uint64_t seed = 0;
  std::size_t sequences = 0;
  std::size_t flagged = 0;
  std::size_t missing_start = 0;
  std::uint64_t dropped_click_mass = 0;
  std::size_t dropped_pairs = 0;
  StoppingRule rule;

  // Single JSON object on one line.
  std::string to_json_line() const;
};

// One synthetic sequence per reference sequence; sequence i uses
// RngStream(seed, i), so output is independent of `workers`. Under
// extrinsic stopping each copies its reference's start and length. A
// reference start unknown to the model yields a flagged length-1 sequence.
// Kind: the model's dataset kind, or Clickstream-Pub(I) for intrinsic stopping.
SequenceCorpus generate_corpus(const TransitionModel& model, const SequenceCorpus& reference,
                               const StoppingRule& rule, std::uint64_t seed, std::size_t workers = 1,
                               GenerationReport* report = nullptr);

// Flow-ratio stop rule: stop(v) = clamp(1 - out(v)/in(v), epsilon, 1) when
// in(v) > 0, else epsilon. Result covers ids [0, num_nodes).
std::vector<double> derive_intrinsic_stops(const ClickstreamTable& table, std::size_t num_nodes,
                                           double epsilon = 0.01);

struct SynthesisOptions {
  std::uint64_t k_threshold = 10;  // public clickstream keeps pairs with count > k_threshold
  double epsilon = 0.01;
  std::size_t max_length = 50;
};

struct SynthesisPlan {
  TransitionModel model;
  StoppingRule rule;
};

// Model and stopping rule for one synthetic dataset kind:
//   graph                      uniform walk, lengths copied from the reference
//   clickstream-priv           weighted by the unfiltered clickstream
//   clickstream-pub            weighted after the k-anonymity filter
//   clickstream-pub-intrinsic  as clickstream-pub, with flow-ratio stopping
// Throws for DatasetKind::logs and when a clickstream kind gets no table.
SynthesisPlan plan_synthesis(DatasetKind kind, const HyperlinkGraph& graph,
                             const ClickstreamTable* clickstream, const SynthesisOptions& options = {});

}  // namespace navsynth
