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

#include "mdhc/bigint.hpp"

#include "mdhc/errors.hpp"

#include <openssl/evp.h>

namespace mdhc {

std::string to_hex(const BigInt& value) {
    if (sgn(value) < 0) {
        throw Error(Errc::invalid_argument, "negative values have no canonical hex form");
    }
    return value.get_str(16);
}

BigInt from_hex(std::string_view text) {
    if (text.empty()) {
        throw Error(Errc::format, "hex: empty string");
    }
    for (char ch : text) {
        bool digit = ch >= '0' && ch <= '9';
        bool lower = ch >= 'a' && ch <= 'f';
        if (!digit && !lower) {
            throw Error(Errc::format, "hex: non-canonical character '" + std::string(1, ch) +
                                          "' (lowercase 0-9a-f only)");
        }
    }
    if (text.size() > 1 && text.front() == '0') {
        throw Error(Errc::format, "hex: leading zeros are not canonical");
    }
    return BigInt(std::string(text), 16);
}

Bytes to_bytes(const BigInt& value) {
    if (sgn(value) == 0) {
        return {};
    }
    Bytes out((mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8);
    std::size_t written = 0;
    mpz_export(out.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
    out.resize(written);
    return out;
}

BigInt from_bytes(std::span<const std::uint8_t> bytes) {
    BigInt out;
    if (!bytes.empty()) {
        mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    }
    return out;
}

std::size_t bit_length(const BigInt& value) {
    if (sgn(value) == 0) {
        return 0;
    }
    return mpz_sizeinbase(value.get_mpz_t(), 2);
}

Bytes sha256(std::span<const std::uint8_t> data) {
    Bytes digest(32);
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::invalid_argument, "SHA-256 failed");
    }
    digest.resize(len);
    return digest;
}

Bytes sha256(std::string_view data) {
    return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::string bytes_to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes hex_to_bytes(std::string_view text) {
    auto nibble = [](char ch) -> int {
        if (ch >= '0' && ch <= '9') return ch - '0';
        if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
        if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
        return -1;
    };
    std::string padded(text);
    if (padded.size() % 2 != 0) {
        padded.insert(padded.begin(), '0');
    }
    Bytes out;
    out.reserve(padded.size() / 2);
    for (std::size_t i = 0; i < padded.size(); i += 2) {
        int hi = nibble(padded[i]);
        int lo = nibble(padded[i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(Errc::format, "hex: invalid byte string '" + std::string(text) + "'");
        }
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

}  // namespace mdhc
