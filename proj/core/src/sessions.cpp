#include "navsynth/sessions.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <map>
#include <unordered_map>

#include "navsynth/error.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {

std::string ReaderKey::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::optional<ReaderKey> ReaderKey::from_hex(std::string_view hex) {
  if (hex.size() != 32) return std::nullopt;
  ReaderKey key;
  for (std::size_t i = 0; i < 16; ++i) {
    std::uint8_t value = 0;
    const auto* first = hex.data() + 2 * i;
    const auto [ptr, ec] = std::from_chars(first, first + 2, value, 16);
    if (ec != std::errc{} || ptr != first + 2) return std::nullopt;
    key.bytes[i] = value;
  }
  return key;
}

ReaderKey reader_key(std::string_view ip, std::string_view user_agent) {
  if (ip.empty() || user_agent.empty()) throw Error("reader_key: ip and user agent must be non-empty");
  ReaderKey key;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error("reader_key: cannot allocate digest context");
  unsigned int len = 0;
  const bool ok = EVP_DigestInit_ex(ctx, EVP_md5(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, ip.data(), ip.size()) == 1 &&
                  EVP_DigestUpdate(ctx, user_agent.data(), user_agent.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, key.bytes.data(), &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok || len != key.bytes.size()) throw Error("reader_key: MD5 digest failed");
  return key;
}

bool is_denied_agent(std::string_view user_agent, std::span<const std::string> deny_list) {
  return std::any_of(deny_list.begin(), deny_list.end(), [&](const std::string& needle) {
    return !needle.empty() && user_agent.find(needle) != std::string_view::npos;
  });
}

std::vector<PageviewEvent> load_pageview_events(const std::filesystem::path& path, Interner& names) {
  LineReader reader(path);
  std::vector<PageviewEvent> events;
  std::string line;
  while (reader.next(line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 4 || fields[2].empty() || fields[3].empty()) {
      throw ParseError(reader.file_name(), reader.line_number(),
                       "expected reader_key<TAB>timestamp_ms<TAB>article<TAB>referrer");
    }
    PageviewEvent ev;
    const auto key = ReaderKey::from_hex(fields[0]);
    if (!key) throw ParseError(reader.file_name(), reader.line_number(), "reader key must be 32 hex digits");
    ev.reader = *key;
    const auto* end = fields[1].data() + fields[1].size();
    const auto [ptr, ec] = std::from_chars(fields[1].data(), end, ev.timestamp_ms);
    if (ec != std::errc{} || ptr != end || ev.timestamp_ms < 0) {
      throw ParseError(reader.file_name(), reader.line_number(), "timestamp must be a non-negative integer");
    }
    ev.article = names.intern(fields[2]);
    ev.referrer = fields[3] == "-" ? kNoArticle : names.intern(fields[3]);
    events.push_back(ev);
  }
  return events;
}

std::vector<std::size_t> NavigationTree::leaves() const {
  std::vector<bool> has_child(nodes.size(), false);
  for (const auto& n : nodes) {
    if (n.parent != kNoParent) has_child[n.parent] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!has_child[i]) out.push_back(i);
  }
  return out;
}

std::size_t NavigationTree::depth() const {
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].parent != kNoParent) level[i] = level[nodes[i].parent] + 1;
    best = std::max(best, level[i]);
  }
  return best;
}

std::vector<ArticleId> NavigationTree::path_to(std::size_t node) const {
  std::vector<ArticleId> path;
  for (std::size_t i = node; i != kNoParent; i = nodes[i].parent) path.push_back(nodes[i].article);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<NavigationTree> build_trees(std::span<const PageviewEvent> events,
                                        const SessionOptions& options) {
  struct Location {
    std::size_t tree;
    std::size_t node;
  };
  struct ReaderState {
    std::int64_t last_timestamp = 0;
    std::unordered_map<ArticleId, Location> latest;  // most recent view of each article
  };

  std::vector<NavigationTree> trees;
  std::map<ReaderKey, ReaderState> readers;
  for (const auto& ev : events) {
    auto [it, inserted] = readers.try_emplace(ev.reader);
    ReaderState& state = it->second;
    if (!inserted && ev.timestamp_ms < state.last_timestamp) throw Error("unsorted input");
    state.last_timestamp = ev.timestamp_ms;

    std::optional<Location> parent;
    if (ev.referrer != kNoArticle && ev.referrer != ev.article) {
      if (auto found = state.latest.find(ev.referrer); found != state.latest.end()) {
        const auto& candidate = trees[found->second.tree].nodes[found->second.node];
        if (ev.timestamp_ms - candidate.timestamp_ms <= options.inactivity_cutoff_ms) {
          parent = found->second;
        }
      }
    }
    Location here{};
    if (parent) {
      auto& tree = trees[parent->tree];
      tree.nodes.push_back({ev.article, ev.timestamp_ms, parent->node});
      here = {parent->tree, tree.nodes.size() - 1};
    } else {
      trees.emplace_back();
      trees.back().nodes.push_back({ev.article, ev.timestamp_ms, NavigationTree::kNoParent});
      here = {trees.size() - 1, 0};
    }
    state.latest[ev.article] = here;
  }
  return trees;
}

std::optional<NavigationSequence> sample_root_to_leaf(const NavigationTree& tree, RngStream& rng) {
  if (tree.size() < 2) return std::nullopt;
  const auto leaves = tree.leaves();
  const std::size_t leaf = leaves[rng.below(leaves.size())];
  NavigationSequence seq;
  seq.pages = tree.path_to(leaf);
  return seq;
}

SequenceCorpus sequences_from_trees(std::span<const NavigationTree> trees, std::uint64_t seed) {
  SequenceCorpus corpus;
  corpus.kind = DatasetKind::logs;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    RngStream rng(seed, i);
    if (auto seq = sample_root_to_leaf(trees[i], rng)) corpus.sequences.push_back(std::move(*seq));
  }
  return corpus;
}

}  // namespace navsynth
