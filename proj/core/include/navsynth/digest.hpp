#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace navsynth {

// Lower-case hex MD5 of a byte string.
std::string md5_hex(std::string_view bytes);

// MD5 of a file's raw bytes (no decompression).
std::string md5_file_hex(const std::filesystem::path& path);

}  // namespace navsynth
