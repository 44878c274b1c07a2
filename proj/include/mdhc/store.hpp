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
#include "mdhc/numtheory.hpp"
#include "mdhc/payword.hpp"
#include "mdhc/scheme_s1.hpp"
#include "mdhc/scheme_s2.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mdhc {

inline constexpr int kFormatVersion = 1;

// Wallet contents persisted between CLI invocations.
struct ChainSpend {
    CoinChainHandle handle;
    std::uint32_t next_position = 1;
    bool operator==(const ChainSpend&) const = default;
};

struct CustomerWallet {
    std::string name;
    std::vector<CoinS1> coins;
    std::vector<ChainSpend> chains;
    bool operator==(const CustomerWallet&) const = default;
};

struct VendorWallet {
    std::string name;
    /// S1 coins accepted but not yet deposited.
    std::vector<CoinS1> received;
    /// Latest accepted coin per S2 chain.
    std::vector<ChainCoin> chain_heads;
    /// Highest position already redeemed per chain (root_id:index -> j).
    std::map<std::string, std::uint32_t> redeemed;
    bool operator==(const VendorWallet&) const = default;
};

struct Payment {
    std::string customer;
    std::string vendor;
    std::variant<CoinS1, ChainCoin> item;
    bool operator==(const Payment&) const = default;
};

/// Serializes as {"payload": ..., "schema": ..., "version": 1}: sorted keys,
/// two-space indent, trailing newline. Big integers are canonical hex strings.
///
/// Supported: TrapdoorModulus, PublicParams, ChainParams, Node, SecretChain,
/// CoinS1, BatchS1, CoinChainHandle, ChainCoin, PaywordCommitment,
/// SignaturePublicKey, SignatureKeypair, SpendState, RegistryS1, RegistryS2,
/// BankState, CustomerWallet, VendorWallet, Payment.
template <class T>
std::string encode(const T& value);

/// Rejects wrong schema, unknown version, non-canonical hex and any violated
/// type invariant with Errc::format, naming the rule.
template <class T>
T decode(std::string_view text);

template <class T>
std::string_view schema_name();

struct LedgerRecord {
    std::uint64_t seq = 0;
    Event event;
    bool operator==(const LedgerRecord&) const = default;
};

/// One JSON object per line, no trailing newline.
std::string encode_record(const LedgerRecord& record);
LedgerRecord decode_record(std::string_view line);

/// Reads every line; a malformed line throws Errc::replay naming its line number.
std::vector<LedgerRecord> read_ledger(const std::filesystem::path& path);

/// Rebuilds bank state. Sequence numbers must be 1, 2, 3, ... without gaps or
/// repeats; the failing position is reported in the error.
BankState replay(std::span<const LedgerRecord> records);

/// Appends events with monotone sequence numbers, continuing an existing file.
class LedgerWriter {
public:
    explicit LedgerWriter(std::filesystem::path path);

    void append(const Event& event);
    std::uint64_t last_seq() const noexcept { return seq_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::uint64_t seq_ = 0;
};

std::string read_file(const std::filesystem::path& path);
/// Writes via a temporary file and rename.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mdhc
