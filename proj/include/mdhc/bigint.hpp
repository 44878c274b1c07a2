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

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdhc {

using BigInt = mpz_class;
using Bytes = std::vector<std::uint8_t>;

/// Canonical form: lowercase, big-endian, no leading zeros, zero is "0".
std::string to_hex(const BigInt& value);

/// Parses the canonical hex form only; uppercase, prefixes, signs and leading
/// zeros are rejected with Errc::format.
BigInt from_hex(std::string_view text);

Bytes to_bytes(const BigInt& value);
BigInt from_bytes(std::span<const std::uint8_t> bytes);

std::size_t bit_length(const BigInt& value);

/// SHA-256 over raw bytes.
Bytes sha256(std::span<const std::uint8_t> data);
Bytes sha256(std::string_view data);

std::string bytes_to_hex(std::span<const std::uint8_t> bytes);
Bytes hex_to_bytes(std::string_view text);

}  // namespace mdhc
