#include <fmt/format.h>

#include <algorithm>

#include "commands.hpp"
#include "inputs.hpp"
#include "navsynth/diffusion.hpp"
#include "navsynth/mixing.hpp"
#include "navsynth/stats.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth::cli {

namespace {

void register_mixing(Registry& registry) {
  struct Args {
    std::filesystem::path corpus;
    std::size_t min_triples = 100;
    std::uint64_t exact_limit = 5000;
    std::size_t mc_draws = 10000;
    double bin_width = 0.01;
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("mixing", "Adjusted mutual information of in/out flows per article");
  cmd.input("corpus", a.corpus, "Corpus to survey")->required();
  cmd.param("min-triples", a.min_triples, "Articles with fewer triples are skipped");
  cmd.param("exact-limit", a.exact_limit, "Above this many triples the expected MI is estimated");
  cmd.param("mc-draws", a.mc_draws, "Monte-Carlo draws for estimated expected MI");
  cmd.param("bin-width", a.bin_width, "Bin width of the AMI CDF")->check(CLI::Range(1e-6, 1.0));
  cmd.on_run([&a](Command& c) {
    InputSet in;
    const auto corpus = in.corpus(a.corpus);
    AmiOptions opt;
    opt.exact_limit = a.exact_limit;
    opt.monte_carlo_draws = a.mc_draws;
    opt.seed = c.globals().seed;
    const auto survey = ami_survey(corpus, a.min_triples, opt, c.globals().workers);
    const std::string slug(to_slug(corpus.kind));
    c.write_output("ami_" + slug + ".csv", format_ami_csv(survey.records, in.names(), c.header()));
    c.write_output("ami_cdf_" + slug + ".csv",
                   format_ami_cdf_csv(ami_cdf(survey.records, a.bin_width), c.header()));

    std::string summary = comment_line(c.header());
    summary += "dataset,surveyed,median_ami,fraction_above_0.1,spearman_triples_ami\n";
    summary += fmt::format("{},{}", to_string(corpus.kind), survey.records.size());
    if (survey.records.empty()) {
      summary += ",,,\n";
    } else {
      std::vector<double> amis;
      for (const auto& r : survey.records) amis.push_back(r.ami);
      std::sort(amis.begin(), amis.end());
      const auto above = std::count_if(amis.begin(), amis.end(), [](double x) { return x > 0.1; });
      summary += fmt::format(",{:.9f},{:.9f},", quantile_sorted(amis, 0.5),
                             static_cast<double>(above) / static_cast<double>(amis.size()));
      if (survey.spearman_triples_vs_ami) summary += fmt::format("{:.9f}", *survey.spearman_triples_vs_ami);
      summary += '\n';
    }
    c.write_output("mixing_summary_" + slug + ".csv", summary);
    fmt::print("dataset={} surveyed={}\n", to_string(corpus.kind), survey.records.size());
  });
}

void register_diffusion(Registry& registry) {
  struct Args {
    std::vector<std::filesystem::path> corpora;
    std::filesystem::path embeddings;
    std::size_t k_max = 10;
    std::size_t bootstrap = 1000;
    std::vector<std::size_t> hist_k{1, 2, 4, 8};
    double bin_width = 0.02;
    std::size_t baseline_pairs = 10000;
  };
  auto& a = registry.keep<Args>();
  auto& cmd = registry.add("diffusion", "Semantic drift of sequences away from their first article");
  cmd.inputs("corpus", a.corpora, "Corpora to compare (repeat or comma-separate)")->required();
  cmd.input("embeddings", a.embeddings, "Semantic embedding file")->required();
  cmd.param("k-max", a.k_max, "Largest step k")->check(CLI::PositiveNumber);
  cmd.param("bootstrap", a.bootstrap, "Bootstrap resamples per step")->check(CLI::PositiveNumber);
  cmd.list("hist-k", a.hist_k, "Steps with a distance histogram");
  cmd.param("bin-width", a.bin_width, "Histogram bin width")->check(CLI::Range(1e-6, 2.0));
  cmd.param("baseline-pairs", a.baseline_pairs, "Random article pairs for the baseline")
      ->check(CLI::PositiveNumber);
  cmd.on_run([&a](Command& c) {
    InputSet in;
    const auto emb = in.embeddings(a.embeddings);
    std::vector<SequenceCorpus> corpora;
    for (const auto& p : a.corpora) corpora.push_back(in.corpus(p));
    const auto labels = dataset_labels(corpora);
    const auto seed = c.globals().seed;

    std::string curve = comment_line(c.header());
    curve += "dataset,k,mean,ci_low,ci_high,n\n";
    std::string hist = comment_line(c.header());
    hist += "dataset,k,bin_low,bin_high,fraction\n";
    for (std::size_t i = 0; i < corpora.size(); ++i) {
      const auto dc = diffusion_curve(corpora[i], emb, a.k_max, a.bootstrap, seed);
      for (const auto& p : dc.points) {
        curve += fmt::format("{},{},{:.9f},{:.9f},{:.9f},{}\n", labels[i], p.k, p.mean, p.ci_low, p.ci_high, p.n);
      }
      for (std::size_t k : a.hist_k) {
        const auto h = diffusion_histogram(corpora[i], emb, k, a.bin_width);
        for (std::size_t b = 0; b < h.fractions.size(); ++b) {
          const double lo = static_cast<double>(b) * h.bin_width;
          hist += fmt::format("{},{},{:.4f},{:.4f},{:.9f}\n", labels[i], k, lo, std::min(2.0, lo + h.bin_width),
                              h.fractions[b]);
        }
      }
    }
    c.write_output("diffusion_curve.csv", curve);
    c.write_output("diffusion_histogram.csv", hist);

    RngStream rng(seed, 0);
    const auto base = random_pair_baseline(emb, a.baseline_pairs, rng);
    std::string baseline = comment_line(c.header());
    baseline += "mean,std_error,ci_low,ci_high,pairs\n";
    baseline += fmt::format("{:.9f},{:.9f},{:.9f},{:.9f},{}\n", base.mean, base.std_error, base.ci_low,
                            base.ci_high, base.pairs);
    c.write_output("diffusion_baseline.csv", baseline);
    fmt::print("datasets={} embedded={}\n", corpora.size(), emb.size());
  });
}

}  // namespace

void register_analysis_commands(Registry& registry) {
  register_mixing(registry);
  register_diffusion(registry);
}

}  // namespace navsynth::cli
