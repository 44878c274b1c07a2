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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace mdhc {

/// Directory-backed bank, wallets and ledger:
///   params.public.json   PublicParams
///   params.private.json  TrapdoorModulus
///   ledger.jsonl         bank transitions, replayed on open
///   batch.<id>.json      published batch (S1 BatchS1 without secrets, S2 roots)
///   wallet.<name>.json   CustomerWallet or VendorWallet
class Workspace {
public:
    /// Generates and writes parameters; returns a JSON summary.
    static std::string create(const std::filesystem::path& dir, const std::string& profile,
                              std::size_t prime_bits, std::size_t m, const Bytes& seed);

    explicit Workspace(std::filesystem::path dir);
    ~Workspace();

    /// scheme "s1" or "s2". Returns a JSON summary of what was minted.
    std::string mint(const std::string& scheme, std::uint32_t length, const Bytes& seed,
                     const std::string& customer, const std::optional<std::string>& vendor_tag);

    /// Takes the customer's next coin (S1 coins first, then chains) addressed to
    /// `vendor`; returns the encoded Payment.
    std::string pay(const std::string& customer, const std::string& vendor);

    /// Vendor-side acceptance; accepted coins are kept in the vendor wallet.
    Outcome verify(const std::string& vendor, const std::string& payment_text);

    /// Deposits every held S1 coin and the latest coin of each chain.
    /// Returns a JSON summary; `credited` receives the total.
    std::string redeem(const std::string& vendor, std::uint64_t& credited, bool& all_ok);

    const Bank& bank() const;
    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path wallet_path(const std::string& name) const;

    std::filesystem::path dir_;
    std::unique_ptr<Bank> bank_;
    std::unique_ptr<LedgerWriter> ledger_;
};

}  // namespace mdhc
