#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace bpdo {

/// Shortest round-trip decimal form; identical inputs give identical text.
inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

}  // namespace bpdo
