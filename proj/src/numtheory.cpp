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

#include "mdhc/numtheory.hpp"

#include "mdhc/errors.hpp"

#include <algorithm>
#include <set>

namespace mdhc {

namespace {

constexpr std::uint32_t kSieveLimit = 1u << 16;
constexpr std::size_t kTrialDivisionPrimes = 168;  // primes below 1000
constexpr std::size_t kSafePrimeSievePrimes = 2048;
constexpr std::uint64_t kSieveWindow = 1u << 20;

// Candidate bases are drawn from a stream keyed by n, so the test is a pure
// function of its input.
SeededStream witness_stream(const BigInt& n) {
    return SeededStream(sha256("miller-rabin:" + to_hex(n)));
}

bool miller_rabin(const BigInt& n, int rounds) {
    BigInt n_minus_1 = n - 1;
    BigInt d = n_minus_1;
    std::size_t s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d >>= 1;
        ++s;
    }
    SeededStream bases = witness_stream(n);
    BigInt x;
    for (int round = 0; round < rounds; ++round) {
        BigInt a = bases.between(2, n - 2);
        mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n_minus_1) {
            continue;
        }
        bool composite = true;
        for (std::size_t r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == n_minus_1) {
                composite = false;
                break;
            }
            if (x == 1) {
                break;
            }
        }
        if (composite) {
            return false;
        }
    }
    return true;
}

bool fermat_base2(const BigInt& n) {
    BigInt result;
    BigInt two = 2;
    BigInt e = n - 1;
    mpz_powm(result.get_mpz_t(), two.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
    return result == 1;
}

}  // namespace

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<bool> composite(kSieveLimit, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i < kSieveLimit; ++i) {
            if (composite[i]) {
                continue;
            }
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t{i} * i; j < kSieveLimit; j += i) {
                composite[j] = true;
            }
        }
        return out;
    }();
    return primes;
}

const Profile& toy_profile() {
    static const Profile profile{"toy", 16, 4};
    return profile;
}

const Profile& demo_profile() {
    static const Profile profile{"demo", 512, 8};
    return profile;
}

const Profile& profile_by_name(std::string_view name) {
    if (name == "toy") return toy_profile();
    if (name == "demo") return demo_profile();
    throw Error(Errc::invalid_argument, "unknown profile '" + std::string(name) + "' (toy|demo)");
}

bool is_probable_prime(const BigInt& n, int rounds) {
    if (n < 2) {
        return false;
    }
    const auto& primes = small_primes();
    if (n < kSieveLimit) {
        return std::binary_search(primes.begin(), primes.end(), n.get_ui());
    }
    for (std::size_t i = 0; i < kTrialDivisionPrimes; ++i) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), primes[i])) {
            return false;
        }
    }
    return miller_rabin(n, rounds);
}

bool is_safe_prime(const BigInt& p) {
    if (p < 7 || mpz_even_p(p.get_mpz_t())) {
        return false;
    }
    BigInt half = (p - 1) / 2;
    if (mpz_even_p(half.get_mpz_t())) {
        return false;
    }
    return is_probable_prime(half) && is_probable_prime(p);
}

BigInt gen_safe_prime(std::size_t bits, SeededStream& rng) {
    if (bits < 3) {
        throw Error(Errc::invalid_argument, "safe primes need at least 3 bits");
    }
    // p = 2q + 1 has exactly `bits` bits iff q has bits - 1.
    const BigInt lo = BigInt(1) << (bits - 2);
    const BigInt hi = BigInt(1) << (bits - 1);
    const std::uint64_t budget = 64ull * bits * bits + 4096;
    const auto& primes = small_primes();
    std::uint64_t tested = 0;

    while (tested < budget) {
        BigInt q = lo + rng.below(hi - lo);
        if (mpz_even_p(q.get_mpz_t())) {
            q += 1;
        }
        if (q >= hi) {
            ++tested;
            continue;
        }
        if (bits <= 64) {
            ++tested;
            if (q >= 3 && is_probable_prime(q) && is_probable_prime(2 * q + 1)) {
                return 2 * q + 1;
            }
            continue;
        }

        // Sieve a window of odd offsets against q = 0 and 2q + 1 = 0 (mod r).
        std::vector<std::uint32_t> residues(kSafePrimeSievePrimes);
        for (std::size_t j = 1; j < kSafePrimeSievePrimes; ++j) {
            residues[j] = static_cast<std::uint32_t>(mpz_fdiv_ui(q.get_mpz_t(), primes[j]));
        }
        for (std::uint64_t step = 0; step < kSieveWindow && tested < budget; step += 2) {
            BigInt candidate = q + step;
            if (candidate >= hi) {
                break;
            }
            ++tested;
            bool survives = true;
            for (std::size_t j = 1; j < kSafePrimeSievePrimes; ++j) {
                std::uint64_t r = (residues[j] + step) % primes[j];
                if (r == 0 || r == (primes[j] - 1) / 2) {
                    survives = false;
                    break;
                }
            }
            if (!survives) {
                continue;
            }
            BigInt p = 2 * candidate + 1;
            if (!fermat_base2(candidate) || !fermat_base2(p)) {
                continue;
            }
            if (is_probable_prime(candidate) && is_probable_prime(p)) {
                return p;
            }
        }
    }
    throw Error(Errc::search_exhausted,
                "no " + std::to_string(bits) + "-bit safe prime found within the search budget");
}

BigInt gen_safe_prime(std::size_t bits, std::span<const std::uint8_t> seed) {
    SeededStream rng(Bytes(seed.begin(), seed.end()));
    return gen_safe_prime(bits, rng);
}

BigInt gen_prime(std::size_t bits, SeededStream& rng) {
    if (bits < 2) {
        throw Error(Errc::invalid_argument, "primes need at least 2 bits");
    }
    const std::uint64_t budget = 64ull * bits * bits + 4096;
    for (std::uint64_t i = 0; i < budget; ++i) {
        BigInt candidate = rng.bits(bits) | (BigInt(1) << (bits - 1));
        if (bits > 2) {
            candidate |= 1;
        }
        if (is_probable_prime(candidate)) {
            return candidate;
        }
    }
    throw Error(Errc::search_exhausted, "no " + std::to_string(bits) + "-bit prime found");
}

TrapdoorModulus make_modulus(const BigInt& p, const BigInt& q, BitLengthRule rule) {
    if (p == q) {
        throw Error(Errc::invalid_argument, "modulus factors must be distinct primes");
    }
    for (const BigInt* factor : {&p, &q}) {
        if (!is_safe_prime(*factor)) {
            throw Error(Errc::not_safe_prime, to_hex(*factor) + " is not a safe prime");
        }
    }
    if (rule == BitLengthRule::equal && bit_length(p) != bit_length(q)) {
        throw Error(Errc::invalid_argument, "modulus factors must have equal bit length (" +
                                                std::to_string(bit_length(p)) + " vs " +
                                                std::to_string(bit_length(q)) + ")");
    }
    TrapdoorModulus out;
    out.p = p;
    out.q = q;
    out.modulus = p * q;
    out.totient = (p - 1) * (q - 1);
    out.bit_length = bit_length(p);
    return out;
}

TrapdoorModulus generate_modulus(std::size_t prime_bits, SeededStream& rng) {
    BigInt p = gen_safe_prime(prime_bits, rng);
    for (int attempt = 0; attempt < 64; ++attempt) {
        BigInt q = gen_safe_prime(prime_bits, rng);
        if (q != p) {
            return make_modulus(p, q);
        }
    }
    throw Error(Errc::search_exhausted,
                "could not find two distinct " + std::to_string(prime_bits) + "-bit safe primes");
}

BigInt mod_pow(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
    if (modulus < 2) {
        throw Error(Errc::invalid_argument, "modulus must be at least 2");
    }
    if (sgn(exponent) < 0) {
        throw Error(Errc::invalid_argument, "exponent must be non-negative");
    }
    BigInt out;
    mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
    return out;
}

BigInt mod_inv(const BigInt& value, const BigInt& modulus) {
    if (modulus < 2) {
        throw Error(Errc::invalid_argument, "modulus must be at least 2");
    }
    BigInt out;
    if (mpz_invert(out.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t()) == 0) {
        BigInt g = gcd(value, modulus);
        throw Error(Errc::not_invertible, to_hex(value) + " is not invertible (gcd " + g.get_str() + ")");
    }
    return out;
}

ExponentSet select_exponents(std::size_t m, const TrapdoorModulus& modulus) {
    if (m == 0) {
        throw Error(Errc::invalid_argument, "need at least one exponent");
    }
    ExponentSet out;
    const auto& primes = small_primes();
    for (std::size_t i = 1; i < primes.size() && out.size() < m; ++i) {
        if (!mpz_divisible_ui_p(modulus.totient.get_mpz_t(), primes[i])) {
            out.values.emplace_back(primes[i]);
        }
    }
    for (BigInt c = primes.back() + 2; out.size() < m; c += 2) {
        if (is_probable_prime(c) && !mpz_divisible_p(modulus.totient.get_mpz_t(), c.get_mpz_t())) {
            out.values.push_back(c);
        }
    }
    return out;
}

void validate_exponents(const ExponentSet& exponents, const BigInt& totient) {
    if (exponents.size() == 0) {
        throw Error(Errc::invalid_argument, "exponent set is empty");
    }
    std::set<BigInt> seen;
    for (const auto& c : exponents.values) {
        if (c < 3 || mpz_even_p(c.get_mpz_t()) || !is_probable_prime(c)) {
            throw Error(Errc::invalid_argument, "exponent " + c.get_str() + " is not an odd prime");
        }
        if (!seen.insert(c).second) {
            throw Error(Errc::invalid_argument, "exponent " + c.get_str() + " repeated");
        }
        if (sgn(totient) != 0 && gcd(c, totient) != 1) {
            throw Error(Errc::not_invertible, "exponent " + c.get_str() + " divides E");
        }
    }
}

}  // namespace mdhc
