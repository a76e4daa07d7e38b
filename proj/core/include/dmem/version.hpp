#pragma once

#include <cstdint>
#include <string_view>

namespace dmem {

inline constexpr std::string_view version_string = "dmem 0.1.0";

// FNV-1a, used to stamp output files with a stable hash of the run config.
inline std::uint64_t fnv1a_hash(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace dmem
