#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace cctree {

// Shortest round-trip decimal form; used everywhere a float reaches a
// persisted artifact so outputs stay byte-stable.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace cctree
