#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace paracons {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's bytes; throws ValidationError when unreadable.
std::string sha256_file(const std::string& path);

// 64-bit FNV-1a followed by a splitmix64 finalizer. Stable across platforms;
// used to derive per-query random streams from string keys.
std::uint64_t hash64(std::string_view data, std::uint64_t seed = 0);

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace paracons
