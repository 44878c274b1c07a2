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

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdhc {

enum class Errc {
    invalid_argument,
    out_of_range,
    not_invertible,
    not_safe_prime,
    search_exhausted,
    missing_trapdoor,
    not_adjacent,
    capacity_exceeded,
    chain_exhausted,
    dimension_unbound,
    inconsistent,
    format,
    io,
    replay,
};

std::string_view errc_name(Errc code) noexcept;

/// Library-wide exception; `code()` is mapped onto C status codes at the API boundary.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace mdhc
