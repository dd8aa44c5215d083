#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace plectic {

// Thrown for every domain violation: malformed permutations, non-closed
// subgroups, structure constraints that fail, parse errors.  The message
// always names the violated condition.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

inline void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

// Enumeration guards.  Group closure stops at group_closure_cap() elements,
// full materialization of an automorphism group at wreath_enum_cap() elements.
// PLECTIC_LAB_CAP overrides both.
inline std::size_t env_cap(std::size_t fallback) {
  if (const char* s = std::getenv("PLECTIC_LAB_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return fallback;
}

inline std::size_t group_closure_cap() { return env_cap(1000000); }
inline std::size_t wreath_enum_cap() { return env_cap(100000); }

}  // namespace plectic
