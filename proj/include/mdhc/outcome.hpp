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

#include <optional>
#include <string_view>

namespace mdhc {

/// Protocol verdicts. Rejections are values, not exceptions.
enum class Outcome {
    accept,
    credited,
    settled,
    unknown_root,
    bad_value,
    bad_exponent,
    bad_link,
    bad_total,
    bad_signature,
    out_of_order,
    double_spent,
    wrong_vendor,
    invalid,
    inconsistent,
};

std::string_view outcome_name(Outcome outcome) noexcept;
std::optional<Outcome> outcome_from_name(std::string_view name) noexcept;

inline bool is_success(Outcome o) noexcept {
    return o == Outcome::accept || o == Outcome::credited || o == Outcome::settled;
}

}  // namespace mdhc
