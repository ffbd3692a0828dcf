#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "navsynth/graph.hpp"

namespace navsynth {

// Compact little-endian binary snapshots of ingested inputs. Each file starts
// with an 8-byte magic and a length-prefixed free-text header (the same
// provenance line the text artifacts carry), followed by the raw arrays.
// Readers validate the magic, sizes and the invariants of the loaded object.

void write_graph_cache(const std::filesystem::path& path, const HyperlinkGraph& graph,
                       std::string_view header = {});
HyperlinkGraph read_graph_cache(const std::filesystem::path& path, std::string* header = nullptr);

void write_clickstream_cache(const std::filesystem::path& path, const ClickstreamTable& table,
                             std::string_view header = {});
ClickstreamTable read_clickstream_cache(const std::filesystem::path& path,
                                        std::string* header = nullptr);

}  // namespace navsynth
