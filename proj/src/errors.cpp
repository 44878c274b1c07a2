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

#include "mdhc/errors.hpp"
#include "mdhc/outcome.hpp"

#include <array>
#include <utility>

namespace mdhc {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_argument: return "invalid_argument";
        case Errc::out_of_range: return "out_of_range";
        case Errc::not_invertible: return "not_invertible";
        case Errc::not_safe_prime: return "not_safe_prime";
        case Errc::search_exhausted: return "search_exhausted";
        case Errc::missing_trapdoor: return "missing_trapdoor";
        case Errc::not_adjacent: return "not_adjacent";
        case Errc::capacity_exceeded: return "capacity_exceeded";
        case Errc::chain_exhausted: return "chain_exhausted";
        case Errc::dimension_unbound: return "dimension_unbound";
        case Errc::inconsistent: return "inconsistent";
        case Errc::format: return "format";
        case Errc::io: return "io";
        case Errc::replay: return "replay";
    }
    return "unknown";
}

namespace {

constexpr std::array<std::pair<Outcome, std::string_view>, 14> kOutcomeNames{{
    {Outcome::accept, "accept"},
    {Outcome::credited, "credited"},
    {Outcome::settled, "settled"},
    {Outcome::unknown_root, "unknown_root"},
    {Outcome::bad_value, "bad_value"},
    {Outcome::bad_exponent, "bad_exponent"},
    {Outcome::bad_link, "bad_link"},
    {Outcome::bad_total, "bad_total"},
    {Outcome::bad_signature, "bad_signature"},
    {Outcome::out_of_order, "out_of_order"},
    {Outcome::double_spent, "double_spent"},
    {Outcome::wrong_vendor, "wrong_vendor"},
    {Outcome::invalid, "invalid"},
    {Outcome::inconsistent, "inconsistent"},
}};

}  // namespace

std::string_view outcome_name(Outcome outcome) noexcept {
    for (const auto& [value, name] : kOutcomeNames) {
        if (value == outcome) return name;
    }
    return "unknown";
}

std::optional<Outcome> outcome_from_name(std::string_view name) noexcept {
    for (const auto& [value, text] : kOutcomeNames) {
        if (text == name) return value;
    }
    return std::nullopt;
}

}  // namespace mdhc
