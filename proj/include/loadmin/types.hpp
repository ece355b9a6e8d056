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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace loadmin {

using CellId = std::size_t;
using UserId = std::size_t;
using PrbIndex = std::size_t;
using VertexId = std::size_t;

/// A set of PRB indices packed into a bitmask; bit n set means PRB n is a member.
using PrbMask = std::uint64_t;

inline constexpr std::size_t kMaxPrbs = 64;

/// Thrown for invalid scenario or topology parameters.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr PrbMask PrbBit(PrbIndex n) { return PrbMask{1} << n; }

inline constexpr std::size_t PrbCount(PrbMask mask) { return static_cast<std::size_t>(std::popcount(mask)); }

inline constexpr bool Intersects(PrbMask a, PrbMask b) { return (a & b) != 0; }

inline std::vector<PrbIndex> PrbList(PrbMask mask) {
    std::vector<PrbIndex> out;
    out.reserve(PrbCount(mask));
    while (mask != 0) {
        out.push_back(static_cast<PrbIndex>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return out;
}

inline PrbMask MaskOf(const std::vector<PrbIndex> &prbs) {
    PrbMask mask = 0;
    for (PrbIndex n : prbs) {
        if (n >= kMaxPrbs) {
            throw std::out_of_range("PRB index " + std::to_string(n) + " exceeds mask width");
        }
        mask |= PrbBit(n);
    }
    return mask;
}

/// Lexicographic order on the ascending index sequences of two PRB sets.
inline bool LexicographicLess(PrbMask a, PrbMask b) {
    while (a != 0 && b != 0) {
        const int ia = std::countr_zero(a);
        const int ib = std::countr_zero(b);
        if (ia != ib) {
            return ia < ib;
        }
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

std::string FormatPrbSet(PrbMask mask);

}  // namespace loadmin
