// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cfris {

using Rng = std::mt19937_64;

// Stream tags used when splitting the global seed.
namespace stream {
inline constexpr std::uint64_t kSetup = 1;
inline constexpr std::uint64_t kBoxChannel = 2;
inline constexpr std::uint64_t kBlocks = 3;
inline constexpr std::uint64_t kRandomPhases = 4;
}  // namespace stream

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent generator from a seed and a path of tags. The
/// result depends only on its arguments, never on scheduling order.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

}  // namespace cfris
