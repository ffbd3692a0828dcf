#include "navsynth/cache.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <type_traits>

#include "navsynth/error.hpp"
#include "navsynth/text_io.hpp"

namespace navsynth {

static_assert(std::endian::native == std::endian::little, "binary caches assume a little-endian host");

namespace {

constexpr std::string_view kGraphMagic = "NSGRAPH1";
constexpr std::string_view kClickMagic = "NSCLICK1";

class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const char*>(&value);
    buf_.append(p, sizeof(T));
  }
  void bytes(std::string_view s) { buf_.append(s); }
  const std::string& str() const noexcept { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string data, std::string name) : data_(std::move(data)), name_(std::move(name)) {}

  template <typename T>
  T get() {
    T value;
    need(sizeof(T));
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void expect_end() const {
    if (pos_ != data_.size()) throw Error(name_ + ": trailing bytes in cache file");
  }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  [[noreturn]] void fail(const std::string& what) const { throw Error(name_ + ": " + what); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) fail("truncated cache file");
  }
  std::string data_;
  std::string name_;
  std::size_t pos_ = 0;
};

void put_preamble(Writer& w, std::string_view magic, std::string_view header) {
  w.bytes(magic);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(header.size()));
  w.bytes(header);
}

Reader open_cache(const std::filesystem::path& path, std::string_view magic, std::string* header) {
  Reader r(read_file(path), path.string());
  if (r.bytes(magic.size()) != magic) r.fail("not a " + std::string(magic) + " cache file");
  const auto len = r.get<std::uint32_t>();
  std::string h = r.bytes(len);
  if (header) *header = std::move(h);
  return r;
}

}  // namespace

void write_graph_cache(const std::filesystem::path& path, const HyperlinkGraph& graph,
                       std::string_view header) {
  Writer w;
  put_preamble(w, kGraphMagic, header);
  w.put<std::uint64_t>(graph.num_nodes());
  w.put<std::uint64_t>(graph.num_edges());
  for (auto o : graph.offsets()) w.put<std::uint64_t>(o);
  for (auto t : graph.targets()) w.put<std::uint32_t>(t);
  write_file(path, w.str());
}

HyperlinkGraph read_graph_cache(const std::filesystem::path& path, std::string* header) {
  Reader r = open_cache(path, kGraphMagic, header);
  const auto nodes = r.get<std::uint64_t>();
  const auto edges = r.get<std::uint64_t>();
  if (r.remaining() != (nodes + 1) * 8 + edges * 4) r.fail("graph cache size does not match its counts");
  std::vector<std::uint64_t> offsets(nodes + 1);
  for (auto& o : offsets) o = r.get<std::uint64_t>();
  std::vector<ArticleId> targets(edges);
  for (auto& t : targets) t = r.get<std::uint32_t>();
  r.expect_end();
  return HyperlinkGraph::from_csr(std::move(offsets), std::move(targets));
}

void write_clickstream_cache(const std::filesystem::path& path, const ClickstreamTable& table,
                             std::string_view header) {
  Writer w;
  put_preamble(w, kClickMagic, header);
  w.put<std::uint64_t>(table.size());
  for (const auto& e : table.entries()) {
    w.put<std::uint32_t>(e.source);
    w.put<std::uint32_t>(e.target);
    w.put<std::uint64_t>(e.count);
  }
  write_file(path, w.str());
}

ClickstreamTable read_clickstream_cache(const std::filesystem::path& path, std::string* header) {
  Reader r = open_cache(path, kClickMagic, header);
  const auto n = r.get<std::uint64_t>();
  if (r.remaining() != n * 16) r.fail("clickstream cache size does not match its count");
  std::vector<ClickEntry> entries(n);
  for (auto& e : entries) {
    e.source = r.get<std::uint32_t>();
    e.target = r.get<std::uint32_t>();
    e.count = r.get<std::uint64_t>();
  }
  r.expect_end();
  return ClickstreamTable::from_entries(std::move(entries));
}

}  // namespace navsynth
