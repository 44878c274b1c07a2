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

#include "mdhc/bank.hpp"
#include "mdhc/chain.hpp"
#include "mdhc/errors.hpp"
#include "mdhc/numtheory.hpp"

#include <doctest.h>

#include <string>

namespace testing {

// M = 23 * 47 = 1081, E = 1012, exponents (3, 5, 7).
inline mdhc::TrapdoorModulus fixture_modulus() {
    return mdhc::make_modulus(23, 47, mdhc::BitLengthRule::any);
}

inline mdhc::ExponentSet fixture_exponents(std::size_t m = 3) {
    return mdhc::select_exponents(m, fixture_modulus());
}

inline mdhc::SecretChain fixture_chain(std::vector<std::uint32_t> sizes, mdhc::BigInt start = 123) {
    auto modulus = fixture_modulus();
    mdhc::SecretChain chain;
    chain.params.modulus = modulus.modulus;
    chain.params.exponents = mdhc::select_exponents(sizes.size(), modulus);
    chain.params.sizes = std::move(sizes);
    chain.start = start;
    chain.trapdoor = modulus;
    return chain;
}

inline mdhc::Bytes seed_of(const std::string& label) {
    return mdhc::Bytes(label.begin(), label.end());
}

inline mdhc::Errc errc_of(const auto& fn) {
    try {
        fn();
    } catch (const mdhc::Error& e) {
        return e.code();
    }
    FAIL("expected an mdhc::Error");
    return mdhc::Errc::inconsistent;
}

}  // namespace testing
