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

#include "mdhc/random.hpp"

#include "mdhc/errors.hpp"

#include <random>

namespace mdhc {

SeededStream::SeededStream(Bytes seed) : seed_(std::move(seed)) {}

SeededStream SeededStream::from_hex(std::string_view seed_hex) {
    return SeededStream(hex_to_bytes(seed_hex));
}

Bytes SeededStream::entropy_seed() {
    std::random_device device;
    Bytes seed(16);
    for (auto& b : seed) {
        b = static_cast<std::uint8_t>(device());
    }
    return seed;
}

SeededStream SeededStream::fork(std::string_view label) {
    Bytes child = bytes(32);
    child.insert(child.end(), label.begin(), label.end());
    return SeededStream(sha256(child));
}

void SeededStream::refill() {
    Bytes input = seed_;
    for (int shift = 56; shift >= 0; shift -= 8) {
        input.push_back(static_cast<std::uint8_t>(counter_ >> shift));
    }
    ++counter_;
    block_ = sha256(input);
    offset_ = 0;
}

Bytes SeededStream::bytes(std::size_t count) {
    Bytes out;
    out.reserve(count);
    while (out.size() < count) {
        if (offset_ >= block_.size()) {
            refill();
        }
        out.push_back(block_[offset_++]);
    }
    return out;
}

std::uint64_t SeededStream::next_u64() {
    std::uint64_t value = 0;
    for (auto b : bytes(8)) {
        value = value << 8 | b;
    }
    return value;
}

BigInt SeededStream::bits(std::size_t count) {
    if (count == 0) {
        return 0;
    }
    Bytes raw = bytes((count + 7) / 8);
    std::size_t excess = raw.size() * 8 - count;
    raw.front() &= static_cast<std::uint8_t>(0xff >> excess);
    return from_bytes(raw);
}

BigInt SeededStream::below(const BigInt& bound) {
    if (sgn(bound) <= 0) {
        throw Error(Errc::invalid_argument, "random bound must be positive");
    }
    std::size_t width = bit_length(bound);
    for (;;) {
        BigInt candidate = bits(width);
        if (candidate < bound) {
            return candidate;
        }
    }
}

BigInt SeededStream::between(const BigInt& lo, const BigInt& hi) {
    if (hi < lo) {
        throw Error(Errc::invalid_argument, "empty random range");
    }
    return lo + below(hi - lo + 1);
}

}  // namespace mdhc
