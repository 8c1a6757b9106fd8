#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stgl {

// Finalizer from splitmix64; good avalanche, cheap.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_str(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// One root seed per run; every component derives its own independent
/// generator so that adding a consumer never shifts another's stream.
class RunRng {
 public:
  explicit RunRng(std::uint64_t root) : root_(root) {}

  std::uint64_t root() const { return root_; }

  std::mt19937_64 stream(std::string_view component) const {
    return std::mt19937_64(mix64(root_ ^ hash_str(component)));
  }

  /// Keyed generator, pure in (root, component, a, b): used where a fresh
  /// generator is needed per query without threading a stateful one through.
  std::mt19937_64 stream(std::string_view component, std::uint64_t a, std::uint64_t b = 0) const {
    return std::mt19937_64(mix64(mix64(root_ ^ hash_str(component)) ^ mix64(a ^ mix64(b))));
  }

 private:
  std::uint64_t root_;
};

}  // namespace stgl
