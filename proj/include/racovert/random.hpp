// SPDX-License-Identifier: Apache-2.0
//
// racovert: covert transmission with rotatable directional antenna arrays
// Copyright (C) 2026 The racovert authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RACOVERT_RANDOM_HPP
#define RACOVERT_RANDOM_HPP

#include <cstdint>
#include <random>

namespace racovert
{
    // splitmix64 finalizer.
    inline std::uint64_t mix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Order-sensitive fold of words into one seed.
    template <typename... Words>
    std::uint64_t derive_seed(std::uint64_t base, Words... words)
    {
        std::uint64_t h = mix64(base);
        ((h = mix64(h ^ static_cast<std::uint64_t>(words))), ...);
        return h;
    }

    // mt19937_64 with a library-independent mapping to [0, 1), so draws are identical
    // across standard library implementations.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    private:
        std::mt19937_64 engine_;
    };

} // namespace racovert

#endif
