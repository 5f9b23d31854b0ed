// SPDX-License-Identifier: Apache-2.0
//
// riscal - joint RIS calibration and user positioning toolkit
// Copyright (C) 2026 riscal contributors
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

#ifndef RISCAL_RANDOM_HPP
#define RISCAL_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace riscal {

using Rng = std::mt19937_64;

// SplitMix64 finaliser; used to derive independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Child seed for (master, tag...). Independent of evaluation order, so worker
// count never changes results.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags)
{
    std::uint64_t s = mix_seed(master);
    for (std::uint64_t t : tags)
        s = mix_seed(s ^ mix_seed(t + 0x632be59bd9b4e019ULL));
    return s;
}

} // namespace riscal

#endif // RISCAL_RANDOM_HPP
