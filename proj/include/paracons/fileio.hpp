#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace paracons {

std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temp file and rename(), so readers never observe a
/// partially written artifact.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string> split_lines(std::string_view text);

}  // namespace paracons
