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

// Reference implementations used only by tests. Each one is written
// independently of the library code it checks.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Right-to-left square and multiply on native integers; modulus < 2^64.
inline u64 modpow_u64(u64 base, u64 exp, u64 mod) {
    if (mod == 1) return 0;
    u128 result = 1;
    u128 b = base % mod;
    while (exp > 0) {
        if (exp & 1) result = (result * b) % mod;
        b = (b * b) % mod;
        exp >>= 1;
    }
    return static_cast<u64>(result);
}

// Same algorithm on big integers using only multiplication and remainder.
inline mpz_class modpow_schoolbook(mpz_class base, mpz_class exp, const mpz_class& mod) {
    mpz_class result = 1;
    base %= mod;
    if (base < 0) base += mod;
    while (exp > 0) {
        if (mpz_odd_p(exp.get_mpz_t())) result = (result * base) % mod;
        base = (base * base) % mod;
        exp /= 2;
    }
    return result % mod;
}

// Iterative extended Euclid; returns 0 when no inverse exists.
inline std::int64_t inverse_i64(std::int64_t a, std::int64_t m) {
    std::int64_t old_r = a % m, r = m;
    std::int64_t old_s = 1, s = 0;
    if (old_r < 0) old_r += m;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) return 0;
    return ((old_s % m) + m) % m;
}

inline mpz_class inverse_big(const mpz_class& a, const mpz_class& m) {
    mpz_class old_r = a % m, r = m, old_s = 1, s = 0;
    if (old_r < 0) old_r += m;
    while (r != 0) {
        mpz_class q = old_r / r;
        mpz_class t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) return 0;
    mpz_class out = old_s % m;
    if (out < 0) out += m;
    return out;
}

// Sieve of Eratosthenes: primes < limit.
inline std::vector<u64> sieve(u64 limit) {
    std::vector<bool> composite(limit, false);
    std::vector<u64> out;
    for (u64 i = 2; i < limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j < limit; j += i) composite[j] = true;
    }
    return out;
}

inline bool is_prime_trial(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

// GMP's own primality routine, independent of the library's Miller-Rabin.
inline bool is_prime_gmp(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 50) > 0;
}

// All safe primes p = 2p'+1, p' odd prime, with exactly `bits` bits.
inline std::vector<u64> safe_primes_with_bits(unsigned bits) {
    std::vector<u64> out;
    u64 lo = u64{1} << (bits - 1);
    u64 hi = u64{1} << bits;
    for (u64 p : sieve(hi)) {
        if (p < lo) continue;
        u64 half = (p - 1) / 2;
        if (half % 2 == 1 && is_prime_trial(half)) out.push_back(p);
    }
    return out;
}

// Digits of `value` in base `base`, least significant first, padded to m.
inline std::vector<std::uint32_t> digits(u64 value, u64 base, std::size_t m) {
    std::vector<std::uint32_t> out(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = static_cast<std::uint32_t>(value % base);
        value /= base;
    }
    if (value != 0) throw std::out_of_range("value exceeds m digits");
    return out;
}

// Node value by direct exponent arithmetic: start^(prod c_i^(n_i-k_i)) mod M,
// with the exponent computed exactly (no reduction).
inline mpz_class node_value(const mpz_class& start, const std::vector<mpz_class>& exponents,
                            const std::vector<std::uint32_t>& sizes, const std::vector<std::uint32_t>& index,
                            const mpz_class& modulus) {
    mpz_class e = 1;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        for (std::uint32_t s = index[i]; s < sizes[i]; ++s) e *= exponents[i];
    }
    return modpow_schoolbook(start, e, modulus);
}

}  // namespace oracle
