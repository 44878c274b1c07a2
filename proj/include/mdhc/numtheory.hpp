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
#include "mdhc/random.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mdhc {

/// RSA modulus with its secret factorization. M = pq and E = (p-1)(q-1).
struct TrapdoorModulus {
    BigInt p;
    BigInt q;
    BigInt modulus;
    BigInt totient;
    std::size_t bit_length = 0;  // bits of p (and of q under the strict rule)

    bool operator==(const TrapdoorModulus&) const = default;
};

/// Exponents c_1..c_m of the commutative hash family x -> x^c mod M.
struct ExponentSet {
    std::vector<BigInt> values;

    std::size_t size() const noexcept { return values.size(); }
    const BigInt& operator[](std::size_t i) const { return values[i]; }
    bool operator==(const ExponentSet&) const = default;
};

enum class BitLengthRule { equal, any };

/// Parameter profiles are plain data: prime size and default dimension count.
struct Profile {
    std::string name;
    std::size_t prime_bits;
    std::size_t default_dimensions;
};

const Profile& toy_profile();
const Profile& demo_profile();
const Profile& profile_by_name(std::string_view name);

inline constexpr int kMillerRabinRounds = 40;

/// Trial division by small primes followed by `rounds` Miller-Rabin rounds with
/// bases derived deterministically from n.
bool is_probable_prime(const BigInt& n, int rounds = kMillerRabinRounds);

bool is_safe_prime(const BigInt& p);

/// Safe prime p = 2p'+1 (p' odd prime) with exactly `bits` bits.
/// Throws Errc::search_exhausted if the bounded search fails.
BigInt gen_safe_prime(std::size_t bits, SeededStream& rng);
BigInt gen_safe_prime(std::size_t bits, std::span<const std::uint8_t> seed);

/// Random prime with exactly `bits` bits (used for signature keys).
BigInt gen_prime(std::size_t bits, SeededStream& rng);

TrapdoorModulus make_modulus(const BigInt& p, const BigInt& q,
                             BitLengthRule rule = BitLengthRule::equal);

/// Two distinct safe primes of `prime_bits` bits each.
TrapdoorModulus generate_modulus(std::size_t prime_bits, SeededStream& rng);

BigInt mod_pow(const BigInt& base, const BigInt& exponent, const BigInt& modulus);
BigInt mod_inv(const BigInt& value, const BigInt& modulus);

/// The m smallest odd primes that do not divide E.
ExponentSet select_exponents(std::size_t m, const TrapdoorModulus& modulus);

/// Checks distinct odd primes, each coprime to `totient` (skipped when totient is 0).
void validate_exponents(const ExponentSet& exponents, const BigInt& totient = 0);

/// Primes below `limit` by sieve; shared by trial division and exponent selection.
const std::vector<std::uint32_t>& small_primes();

}  // namespace mdhc
