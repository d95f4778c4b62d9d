#pragma once

#include <filesystem>
#include <string>

namespace moeadstn {

// Whole-file text I/O; paths ending in ".gz" are gzip-compressed. The gzip
// header carries no timestamp, so equal content gives equal bytes.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace moeadstn
