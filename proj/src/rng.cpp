// SPDX-License-Identifier: Apache-2.0
#include "cfris/rng.hpp"

#include <array>

namespace cfris {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(seed);
  for (auto t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
  std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
      static_cast<std::uint32_t>(mix64(h)), static_cast<std::uint32_t>(mix64(h) >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace cfris
