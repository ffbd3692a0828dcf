#include <fmt/format.h>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "inputs.hpp"
#include "navsynth/cache.hpp"
#include "navsynth/planted.hpp"
#include "navsynth/sessions.hpp"
#include "navsynth/synth.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth::cli {

namespace {

std::string json_header(Command& cmd) {
  nlohmann::json j;
  j["navsynth"] = NAVSYNTH_VERSION;
  j["seed"] = cmd.globals().seed;
  j["config"] = cmd.config_digest();
  return j.dump();
}

void register_ingest(Registry& registry) {
  struct Args {
    std::filesystem::path graph;
    std::filesystem::path clickstream;
    std::vector<std::string> link_types{"link"};
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("ingest", "Intern a graph (and clickstream) and write binary caches");
  cmd.input("graph", a.graph, "Edge list, source<TAB>target per line (.gz ok)")->required();
  cmd.input("clickstream", a.clickstream, "Clickstream dump prev<TAB>curr<TAB>type<TAB>count");
  cmd.list("link-types", a.link_types, "Clickstream row types to keep");
  cmd.on_run([&a](Command& c) {
    InputSet in;
    const auto text_graph = in.graph(a.graph);
    ClickstreamTable clicks;
    if (!a.clickstream.empty()) {
      const std::set<std::string, std::less<>> types(a.link_types.begin(), a.link_types.end());
      clicks = load_clickstream(a.clickstream, in.names(), types);
    }
    const auto graph = in.cover(text_graph);
    const auto dir = cache_directory(c.globals().out_dir);
    std::filesystem::create_directories(dir);
    in.names().write_tsv(dir / "names.tsv", c.header());
    write_graph_cache(dir / "graph.nsg", graph, c.header());
    if (!a.clickstream.empty()) write_clickstream_cache(dir / "clickstream.nsc", clicks, c.header());
    fmt::print("nodes={} edges={} total_clicks={}\n", graph.num_nodes(), graph.num_edges(), clicks.total_clicks());
  });
}

void register_build_sessions(Registry& registry) {
  struct Args {
    std::filesystem::path events;
    double inactivity_minutes = 60.0;
    std::string output = "corpus_logs.tsv";
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("build-sessions", "Stitch pageview events into trees and sample one path per tree");
  cmd.input("events", a.events, "reader_hex<TAB>timestamp_ms<TAB>article<TAB>referrer_or_dash")->required();
  cmd.param("inactivity-minutes", a.inactivity_minutes, "Parent views older than this start a new tree")
      ->check(CLI::PositiveNumber);
  cmd.param("output", a.output, "Corpus file name inside --out-dir");
  cmd.on_run([&a](Command& c) {
    Interner names;
    const auto events = load_pageview_events(a.events, names);
    SessionOptions opt;
    opt.inactivity_cutoff_ms = static_cast<std::int64_t>(a.inactivity_minutes * 60'000.0);
    const auto trees = build_trees(events, opt);
    const auto corpus = sequences_from_trees(trees, c.globals().seed);
    c.write_output(a.output, format_corpus(corpus, names, c.header()));
    fmt::print("events={} trees={} sequences={}\n", events.size(), trees.size(), corpus.size());
  });
}

void register_synth(Registry& registry) {
  struct Args {
    std::string kind;
    std::filesystem::path corpus;
    std::filesystem::path graph;
    std::filesystem::path clickstream;
    std::uint64_t k_threshold = 10;
    double epsilon = 0.01;
    std::size_t max_length = 50;
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("synth", "Generate a synthetic corpus mirroring a reference corpus");
  cmd.param("kind", a.kind, "Synthetic dataset kind")
      ->required()
      ->check(CLI::IsMember({"clickstream-priv", "clickstream-pub", "clickstream-pub-intrinsic", "graph"}));
  cmd.input("corpus", a.corpus, "Reference corpus; supplies starts and lengths")->required();
  cmd.input("graph", a.graph, "Hyperlink graph (edge list or .nsg cache)")->required();
  cmd.input("clickstream", a.clickstream, "Clickstream (dump or .nsc cache) for clickstream kinds");
  cmd.param("k-threshold", a.k_threshold, "Public clickstream keeps pairs with count above this");
  cmd.param("epsilon", a.epsilon, "Stop-probability floor for intrinsic stopping");
  cmd.param("max-length", a.max_length, "Length cap for intrinsic stopping");
  cmd.on_run([&a](Command& c) {
    const auto kind = *parse_dataset_kind(a.kind);
    if (kind != DatasetKind::graph && a.clickstream.empty()) throw CLI::RequiredError("--clickstream");
    InputSet in;
    const auto raw_graph = in.graph(a.graph);
    ClickstreamTable clicks;
    if (!a.clickstream.empty()) clicks = in.clickstream(a.clickstream);
    const auto reference = in.corpus(a.corpus);
    const auto graph = in.cover(raw_graph);

    SynthesisOptions so;
    so.k_threshold = a.k_threshold;
    so.epsilon = a.epsilon;
    so.max_length = a.max_length;
    const auto plan = plan_synthesis(kind, graph, a.clickstream.empty() ? nullptr : &clicks, so);
    GenerationReport report;
    const auto corpus = generate_corpus(plan.model, reference, plan.rule, c.globals().seed,
                                        c.globals().workers, &report);
    const std::string slug(to_slug(kind));
    c.write_output("corpus_" + slug + ".tsv", format_corpus(corpus, in.names(), c.header()));
    c.write_output("synth_" + slug + ".jsonl", json_header(c) + "\n" + report.to_json_line() + "\n");
    fmt::print("kind={} sequences={} flagged={} missing_start={}\n", to_string(kind), report.sequences,
               report.flagged, report.missing_start);
  });
}

void register_planted_world(Registry& registry) {
  struct Args {
    PlantedWorldSpec spec;
    std::size_t pairs = 500;
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("planted-world", "Write a synthetic ground-truth world with tunable memory");
  auto& s = a.spec;
  cmd.param("nodes", s.num_nodes, "Number of articles");
  cmd.param("out-degree", s.out_degree, "Links per article");
  cmd.param("near-links", s.near_links, "Ring-neighbour links per article");
  cmd.param("near-window", s.near_window, "Ring distance limit for neighbour links");
  cmd.param("near-decay", s.near_decay, "Decay scale of neighbour link weights");
  cmd.param("far-weight", s.far_weight, "Weight of each distant link");
  cmd.param("memory", s.memory_strength, "Second-order memory strength in [0, 1]");
  cmd.param("sequences", s.corpus_size, "Corpus size");
  cmd.param("min-length", s.min_length, "Minimum sequence length");
  cmd.param("mean-extra-length", s.mean_extra_length, "Mean number of pages beyond the minimum");
  cmd.param("max-length", s.max_length, "Maximum sequence length");
  cmd.param("dim", s.embedding_dim, "Dimension of the semantic embedding");
  cmd.param("noise", s.embedding_noise, "Noise scale of the semantic embedding");
  cmd.param("added-links", s.added_links, "Links added in the new graph snapshot");
  cmd.param("pairs", a.pairs, "Relatedness pairs to write");
  cmd.on_run([&a](Command& c) {
    auto spec = a.spec;
    spec.seed = c.globals().seed;
    const auto world = generate_planted_world(spec);
    const auto& h = c.header();
    c.write_output("graph.tsv", format_edge_list(world.graph, world.names, h));
    c.write_output("new_graph.tsv", format_edge_list(world.new_graph, world.names, h));
    c.write_output("clickstream.tsv", format_clickstream(world.clickstream, world.names, h));
    c.write_output("corpus_logs.tsv", format_corpus(world.corpus, world.names, h));
    c.write_output("semantic.txt", format_embeddings(world.semantic, world.names, h));

    std::string topics = comment_line(h);
    for (std::size_t v = 0; v < world.names.size(); ++v) {
      topics += fmt::format("{}\t{}\n", world.names.name(static_cast<ArticleId>(v)),
                            world.topic_of(static_cast<ArticleId>(v)));
    }
    c.write_output("topics.tsv", topics);

    std::string pairs = comment_line(h);
    for (const auto& p : planted_relatedness_pairs(world, a.pairs, spec.seed)) {
      pairs += fmt::format("{}\t{}\t{}\n", world.names.name(p.a), world.names.name(p.b), p.score);
    }
    c.write_output("pairs.tsv", pairs);
    fmt::print("nodes={} edges={} new_edges={} sequences={}\n", world.graph.num_nodes(), world.graph.num_edges(),
               world.new_graph.num_edges(), world.corpus.size());
  });
}

}  // namespace

void register_data_commands(Registry& registry) {
  register_ingest(registry);
  register_build_sessions(registry);
  register_synth(registry);
  register_planted_world(registry);
}

}  // namespace navsynth::cli
