#pragma once

#include <cstdint>
#include <initializer_list>

namespace radviz {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a root seed and a path of tags,
// e.g. derive_seed(seed, {i, j}) for the (i, j) pair of an overlap matrix.
// The result depends only on its arguments, never on evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(root);
  for (std::uint64_t tag : path) h = mix64(h ^ mix64(tag + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace radviz
