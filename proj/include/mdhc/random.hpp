/*
 * Copyright 2026 The mdhc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "mdhc/bigint.hpp"

#include <cstdint>
#include <string_view>

namespace mdhc {

/// Deterministic byte stream: block i is SHA-256(seed || i as 8 big-endian bytes).
///
/// Everything that draws randomness in the library takes one of these, so a
/// seed fully determines keys, coins and chain start values.
class SeededStream {
public:
    explicit SeededStream(Bytes seed);
    static SeededStream from_hex(std::string_view seed_hex);

    /// Fresh 16-byte seed from std::random_device, for entropy mode.
    static Bytes entropy_seed();

    /// Independent child stream; the parent advances by one block.
    SeededStream fork(std::string_view label);

    Bytes bytes(std::size_t count);
    std::uint64_t next_u64();

    /// Uniform integer with at most `bits` bits.
    BigInt bits(std::size_t bits);
    /// Uniform in [0, bound); bound must be positive.
    BigInt below(const BigInt& bound);
    /// Uniform in [lo, hi].
    BigInt between(const BigInt& lo, const BigInt& hi);

    const Bytes& seed() const noexcept { return seed_; }

private:
    void refill();

    Bytes seed_;
    std::uint64_t counter_ = 0;
    Bytes block_;
    std::size_t offset_ = 0;
};

}  // namespace mdhc
