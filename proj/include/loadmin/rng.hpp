/*
Copyright 2026 The loadmin Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace loadmin {

/// Named substreams derived from a master seed.
enum class Stream : std::uint64_t {
    kPlacement = 1,
    kShadowing = 2,
    kFading = 3,
    kDrop = 4,
    kOrdering = 5,
};

inline constexpr std::uint64_t SplitMix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Hashes a seed together with a stream tag and integer coordinates into a new seed.
/// Each distinct coordinate tuple yields an independent generator, so adding users or
/// PRBs never shifts the draws of existing ones.
inline std::uint64_t DeriveSeed(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> coords = {}) {
    std::uint64_t h = SplitMix64(seed ^ SplitMix64(static_cast<std::uint64_t>(stream)));
    for (std::uint64_t c : coords) {
        h = SplitMix64(h ^ SplitMix64(c + 0x632be59bd9b4e019ULL));
    }
    return h;
}

inline std::mt19937_64 MakeEngine(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> coords = {}) {
    return std::mt19937_64(DeriveSeed(seed, stream, coords));
}

}  // namespace loadmin
