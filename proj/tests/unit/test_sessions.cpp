#include <doctest.h>

#include <map>
#include <set>

#include "navsynth/error.hpp"
#include "navsynth/rng.hpp"
#include "navsynth/sessions.hpp"
#include "navsynth/text_io.hpp"
#include "test_util.hpp"

using namespace navsynth;

namespace {

PageviewEvent ev(const ReaderKey& r, std::int64_t ts, ArticleId a, ArticleId ref = kNoArticle) {
  return {r, ts, a, ref};
}

// Quadratic reference: for each event scan backwards over the same reader's
// earlier events for the latest view of the referrer.
struct OracleNode {
  std::size_t tree;
  std::size_t index;
};

std::vector<NavigationTree> oracle_trees(const std::vector<PageviewEvent>& events,
                                         std::int64_t cutoff) {
  std::vector<NavigationTree> trees;
  std::vector<OracleNode> placed(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    bool attached = false;
    if (e.referrer != kNoArticle && e.referrer != e.article) {
      for (std::size_t j = i; j-- > 0;) {
        const auto& p = events[j];
        if (p.reader != e.reader || p.article != e.referrer) continue;
        if (e.timestamp_ms - p.timestamp_ms <= cutoff) {
          auto& tree = trees[placed[j].tree];
          tree.nodes.push_back({e.article, e.timestamp_ms, placed[j].index});
          placed[i] = {placed[j].tree, tree.nodes.size() - 1};
          attached = true;
        }
        break;
      }
    }
    if (!attached) {
      NavigationTree t;
      t.nodes.push_back({e.article, e.timestamp_ms, NavigationTree::kNoParent});
      trees.push_back(t);
      placed[i] = {trees.size() - 1, 0};
    }
  }
  return trees;
}

}  // namespace

TEST_CASE("reader keys are MD5 of the concatenation") {
  const auto a = reader_key("1.2.3.4", "agentA");
  CHECK(a == reader_key("1.2.3.4", "agentA"));
  CHECK(a != reader_key("1.2.3.4", "agentB"));
  CHECK(reader_key("a", "bc") == reader_key("ab", "c"));
  // MD5("abc") is a published test vector.
  CHECK(reader_key("a", "bc").to_hex() == "900150983cd24fb0d6963f7d28e17f72");
  CHECK(ReaderKey::from_hex(a.to_hex()) == a);
  CHECK_FALSE(ReaderKey::from_hex("zz").has_value());
  CHECK_THROWS_AS(reader_key("", "ua"), Error);
  CHECK_THROWS_AS(reader_key("ip", ""), Error);
}

TEST_CASE("bot deny-list matches substrings") {
  const std::vector<std::string> deny{"bot", "crawler"};
  CHECK(is_denied_agent("Googlebot/2.1", deny));
  CHECK_FALSE(is_denied_agent("Mozilla/5.0", deny));
  CHECK_FALSE(is_denied_agent("Googlebot", {}));
}

TEST_CASE("branching from multiple tabs forms one tree") {
  const auto r = reader_key("ip", "ua");
  const std::vector<PageviewEvent> events{ev(r, 0, 0), ev(r, 10, 1, 0), ev(r, 20, 2, 0)};
  const auto trees = build_trees(events);
  REQUIRE(trees.size() == 1);
  REQUIRE(trees[0].size() == 3);
  CHECK(trees[0].nodes[1].parent == 0);
  CHECK(trees[0].nodes[2].parent == 0);
  CHECK(trees[0].leaves() == std::vector<std::size_t>{1, 2});
}

TEST_CASE("unseen referrer starts a new tree") {
  const auto r = reader_key("ip", "ua");
  const std::vector<PageviewEvent> events{ev(r, 0, 0), ev(r, 5, 1, 7)};
  CHECK(build_trees(events).size() == 2);
}

TEST_CASE("referrer attaches to the most recent view") {
  const auto r = reader_key("ip", "ua");
  // A, B(ref A), A again, C(ref A) -> C hangs under the second A.
  const std::vector<PageviewEvent> events{ev(r, 0, 0), ev(r, 1, 1, 0), ev(r, 2, 0), ev(r, 3, 2, 0)};
  const auto trees = build_trees(events);
  REQUIRE(trees.size() == 2);
  CHECK(trees[1].size() == 2);
  CHECK(trees[1].nodes[1].article == 2);
}

TEST_CASE("inactivity cutoff and self-referral start new trees") {
  const auto r = reader_key("ip", "ua");
  SessionOptions opt;
  opt.inactivity_cutoff_ms = 1000;
  CHECK(build_trees(std::vector{ev(r, 0, 0), ev(r, 1001, 1, 0)}, opt).size() == 2);
  CHECK(build_trees(std::vector{ev(r, 0, 0), ev(r, 1000, 1, 0)}, opt).size() == 1);
  CHECK(build_trees(std::vector{ev(r, 0, 0), ev(r, 10, 0, 0)}, opt).size() == 2);
}

TEST_CASE("readers are stitched independently") {
  const auto r1 = reader_key("ip", "ua1");
  const auto r2 = reader_key("ip", "ua2");
  const std::vector<PageviewEvent> events{ev(r1, 0, 0), ev(r2, 1, 5), ev(r2, 2, 1, 0), ev(r1, 3, 1, 0)};
  const auto trees = build_trees(events);
  CHECK(trees.size() == 3);
}

TEST_CASE("out-of-order timestamps are rejected") {
  const auto r = reader_key("ip", "ua");
  CHECK_THROWS_WITH(build_trees(std::vector{ev(r, 10, 0), ev(r, 5, 1)}), "unsorted input");
}

TEST_CASE("random streams match the backwards-scan simulator") {
  const std::vector<ReaderKey> readers{reader_key("a", "1"), reader_key("b", "2"), reader_key("c", "3")};
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    RngStream rng(21, trial);
    std::vector<PageviewEvent> events;
    std::int64_t ts = 0;
    for (int i = 0; i < 30; ++i) {
      ts += static_cast<std::int64_t>(rng.below(600)) * 1000;
      const auto& r = readers[rng.below(readers.size())];
      const auto a = static_cast<ArticleId>(rng.below(8));
      const ArticleId ref = rng.below(4) == 0 ? kNoArticle : static_cast<ArticleId>(rng.below(8));
      events.push_back(ev(r, ts, a, ref));
    }
    SessionOptions opt;
    opt.inactivity_cutoff_ms = 1200 * 1000;
    const auto got = build_trees(events, opt);
    const auto want = oracle_trees(events, opt.inactivity_cutoff_ms);
    REQUIRE(got.size() == want.size());
    std::size_t nodes = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i] == want[i]);
      nodes += got[i].size();
      for (std::size_t n = 1; n < got[i].size(); ++n) {
        const auto& node = got[i].nodes[n];
        REQUIRE(node.parent < n);
        CHECK(node.timestamp_ms >= got[i].nodes[node.parent].timestamp_ms);
      }
    }
    CHECK(nodes == events.size());
  }
}

TEST_CASE("root-to-leaf sampling") {
  NavigationTree single;
  single.nodes.push_back({0, 0, NavigationTree::kNoParent});
  RngStream rng(1, 0);
  CHECK_FALSE(sample_root_to_leaf(single, rng).has_value());

  NavigationTree chain;
  chain.nodes = {{0, 0, NavigationTree::kNoParent}, {1, 1, 0}, {2, 2, 1}};
  for (int i = 0; i < 10; ++i) {
    const auto s = sample_root_to_leaf(chain, rng);
    REQUIRE(s.has_value());
    CHECK(s->pages == std::vector<ArticleId>{0, 1, 2});
  }
  CHECK(chain.depth() == 2);
}

TEST_CASE("leaf choice is uniform on a star") {
  NavigationTree star;
  star.nodes = {{0, 0, NavigationTree::kNoParent}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}};
  RngStream rng(2024, 0);
  std::map<ArticleId, int> freq;
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    const auto s = sample_root_to_leaf(star, rng);
    REQUIRE(s->size() == 2);
    ++freq[s->pages[1]];
  }
  double chi2 = 0.0;
  for (ArticleId leaf = 1; leaf <= 3; ++leaf) {
    const double f = static_cast<double>(freq[leaf]) / n;
    CHECK(std::abs(f - 1.0 / 3.0) < 0.01);
    const double expected = n / 3.0;
    chi2 += (freq[leaf] - expected) * (freq[leaf] - expected) / expected;
  }
  // chi-square critical value for df = 2, alpha = 0.01
  CHECK(chi2 < 9.210);
}

TEST_CASE("sequence lengths are bounded by tree depth") {
  const auto r = reader_key("ip", "ua");
  RngStream gen(5, 0);
  std::vector<PageviewEvent> events;
  for (int i = 0; i < 200; ++i) {
    const ArticleId ref = i == 0 || gen.below(5) == 0 ? kNoArticle : static_cast<ArticleId>(gen.below(20));
    events.push_back(ev(r, i, static_cast<ArticleId>(gen.below(20)), ref));
  }
  const auto trees = build_trees(events);
  const auto corpus = sequences_from_trees(trees, 9);
  CHECK(corpus.kind == DatasetKind::logs);
  std::size_t multi = 0;
  for (const auto& t : trees) multi += t.size() >= 2 ? 1 : 0;
  CHECK(corpus.size() == multi);
  std::size_t k = 0;
  for (const auto& t : trees) {
    if (t.size() < 2) continue;
    CHECK(corpus.sequences[k].size() <= t.depth() + 1);
    CHECK(corpus.sequences[k].size() >= 2);
    ++k;
  }
  CHECK(sequences_from_trees(trees, 9).sequences == corpus.sequences);
}

TEST_CASE("pageview events load from TSV") {
  navsynth::testing::TempDir dir;
  const auto r = reader_key("ip", "ua").to_hex();
  write_file(dir / "ev.tsv", r + "\t0\tA\t-\n" + r + "\t5\tB\tA\n");
  Interner names;
  const auto events = load_pageview_events(dir / "ev.tsv", names);
  REQUIRE(events.size() == 2);
  CHECK(events[0].referrer == kNoArticle);
  CHECK(events[1].referrer == *names.find("A"));
  write_file(dir / "bad.tsv", r + "\tnot-a-time\tA\t-\n");
  CHECK_THROWS_AS(load_pageview_events(dir / "bad.tsv", names), ParseError);
}
