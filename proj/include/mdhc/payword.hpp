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
#include "mdhc/outcome.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mdhc {

/// Positional number system over an m-dimensional chain of uniform size n:
/// dimension i carries weight (n+1)^{i-1}.
struct DenominationSchedule {
    std::uint32_t n = 1;
    std::size_t m = 1;

    std::uint64_t base() const noexcept { return std::uint64_t{n} + 1; }
    /// (n+1)^m - 1. Throws Errc::capacity_exceeded if it does not fit in 64 bits.
    std::uint64_t capacity() const;
    /// (n+1)^i for the 0-based dimension i.
    std::uint64_t weight(std::size_t i) const;
};

std::uint64_t value_of_index(const DenominationSchedule& schedule, const NodeIndex& index);
NodeIndex index_of_value(const DenominationSchedule& schedule, std::uint64_t value);

// Demo-grade textbook RSA over SHA-256. Not for production use.
struct SignaturePublicKey {
    BigInt modulus;
    BigInt exponent;

    bool operator==(const SignaturePublicKey&) const = default;
};

struct SignatureKeypair {
    SignaturePublicKey public_key;
    BigInt private_exponent;

    bool operator==(const SignatureKeypair&) const = default;
};

/// Modulus of `modulus_bits` from two random primes, e = 65537.
SignatureKeypair generate_signature_keypair(std::size_t modulus_bits, SeededStream& rng);
Bytes sign(const SignatureKeypair& key, std::span<const std::uint8_t> message);
bool verify_signature(const SignaturePublicKey& key, std::span<const std::uint8_t> message,
                      std::span<const std::uint8_t> signature);

enum class CommitmentPurpose { denomination, multivendor };

std::string_view purpose_name(CommitmentPurpose purpose) noexcept;
CommitmentPurpose purpose_from_name(std::string_view name);

/// Customer-signed chain root. For multivendor chains, vendor_bindings[i] is
/// the vendor paid through dimension i+1.
struct PaywordCommitment {
    BigInt root;
    ChainParams params;
    CommitmentPurpose purpose = CommitmentPurpose::denomination;
    std::vector<std::string> vendor_bindings;
    std::string customer;
    Bytes signature;

    std::string id() const { return root_id_of(root); }
    bool operator==(const PaywordCommitment&) const = default;
};

/// Length-prefixed (4-byte big-endian) fields in fixed order; the signature is excluded.
Bytes canonical_encoding(const PaywordCommitment& commitment);

/// Root by forward hashing (customers hold no trapdoor), then signs.
PaywordCommitment commit(const SignatureKeypair& key, const std::string& customer,
                         const SecretChain& chain, CommitmentPurpose purpose,
                         std::vector<std::string> vendor_bindings, OpCounter& counter);

bool verify_commitment(const PaywordCommitment& commitment, const SignaturePublicKey& key);

struct SpendState {
    NodeIndex index;
    std::uint64_t total = 0;

    bool operator==(const SpendState&) const = default;
};

SpendState initial_spend_state(std::size_t m);

struct Payword {
    Node node;
    SpendState state;
};

/// Reveals the node at index_of_value(T + amount). Throws Errc::capacity_exceeded.
Payword pay_denominated(const SpendState& state, std::uint64_t amount, const SecretChain& chain,
                        OpCounter& counter);

/// Accepts iff the node's positional value is `claimed_total` and it hashes
/// to the committed root.
Outcome verify_denominated(const PaywordCommitment& commitment, const Node& node,
                           std::uint64_t claimed_total, OpCounter& counter);

/// Advances one step in `dim` (1-based) for the vendor bound to it.
/// Throws Errc::dimension_unbound or Errc::chain_exhausted.
Payword pay_vendor(const SpendState& state, std::size_t dim, const std::string& vendor,
                   const SecretChain& chain, const PaywordCommitment& commitment, OpCounter& counter);

/// Vendor-side verification that reuses already verified nodes: a new node is
/// hashed down to its nearest cached ancestor instead of all the way to the root.
class PaywordVerifier {
public:
    explicit PaywordVerifier(PaywordCommitment commitment);

    Outcome verify(const Node& node, OpCounter& counter);
    const PaywordCommitment& commitment() const noexcept { return commitment_; }
    std::size_t cached() const noexcept { return verified_.size(); }

private:
    PaywordCommitment commitment_;
    std::map<NodeIndex, BigInt> verified_;
};

struct Deposit {
    std::string vendor;
    Node node;
};

struct Settlement {
    Outcome outcome = Outcome::invalid;
    std::optional<NodeIndex> settled_index;
    std::map<std::string, std::uint64_t> credits;
    std::uint64_t debit = 0;
};

/// Picks the deposit whose index dominates all others, credits vendor i its
/// k_i and debits the sum. invalid if any node fails the root path check,
/// inconsistent if no deposit dominates.
Settlement settle_multivendor(const PaywordCommitment& commitment, std::span<const Deposit> deposits,
                              OpCounter& counter);

/// Bank-side: signature check, one settlement per commitment, ledger update.
Settlement settle_multivendor(Bank& bank, const PaywordCommitment& commitment,
                              const SignaturePublicKey& customer_key, std::span<const Deposit> deposits);

/// Bank-side redemption of a denominated payword for a single vendor.
Settlement redeem_denominated(Bank& bank, const PaywordCommitment& commitment,
                              const SignaturePublicKey& customer_key, const std::string& vendor,
                              const Node& node, std::uint64_t claimed_total);

/// Original linear PayWord: amount j if hashing the payword j times reaches the root.
std::optional<std::uint64_t> linear_payword_amount(const BigInt& root, const BigInt& payword,
                                                   std::uint32_t position, const BigInt& exponent,
                                                   const BigInt& modulus);

}  // namespace mdhc
