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
#include "mdhc/store.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdhc {

struct StepResult {
    std::size_t step = 0;
    std::string actor;
    std::string action;
    std::string outcome;
    std::optional<std::string> expected;
    std::optional<std::int64_t> value;
    std::optional<std::int64_t> expected_value;
    bool matched = true;
};

struct ScenarioReport {
    std::string name;
    std::vector<StepResult> steps;
    BankState final_state;
    std::vector<LedgerRecord> ledger;

    bool ok() const;
    /// One line per step: index, actor, action, outcome, and OK or MISMATCH.
    std::string to_text() const;
};

/// Checks that every actor and bound object is declared before use and that
/// each action has its required fields. Throws Errc::format.
void validate_scenario(std::string_view script);

/// Runs a scenario script in memory. Protocol rejections are outcomes; a
/// mismatch against "expect" marks the step but does not stop the run.
ScenarioReport run_scenario(std::string_view script);

}  // namespace mdhc
