// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/word.hpp>

#include <map>
#include <string>
#include <vector>

namespace skanf
{
struct BlockCtx
{
    uint64_t number = 0;
    uint64_t timestamp = 0;
    Address coinbase;
    uint64_t chain_id = 1;

    bool operator==(const BlockCtx&) const = default;
};

/// ERC-20 token implemented as a native handler instead of bytecode: the
/// simulated chain dispatches transfer/approve/transferFrom/balanceOf calls
/// on such accounts directly to C++ code and emits standard events.
struct MockToken
{
    std::string name;
    std::map<Address, Word> balances;
    std::map<std::pair<Address, Address>, Word> allowances;  ///< (owner, spender).

    bool operator==(const MockToken&) const = default;
};

struct Account
{
    Word balance;
    bytes code;
    std::optional<MockToken> token;  ///< Mutually exclusive with code.
    std::map<Word, Word> storage;
    uint64_t nonce = 0;

    bool operator==(const Account&) const = default;
};

struct EventLog
{
    Address emitter;
    std::vector<Word> topics;
    bytes data;

    bool operator==(const EventLog&) const = default;
};

/// Keccak topics of the standard ERC-20 events.
Word transfer_event_topic();
Word approval_event_topic();

/// The four ERC-20 selectors the mock token understands.
namespace selectors
{
constexpr uint32_t transfer = 0xa9059cbb;
constexpr uint32_t approve = 0x095ea7b3;
constexpr uint32_t transfer_from = 0x23b872dd;
constexpr uint32_t balance_of = 0x70a08231;
}  // namespace selectors

struct WorldState
{
    std::map<Address, Account> accounts;
    BlockCtx block;

    /// Snapshot stacks are transient bookkeeping, not state.
    bool operator==(const WorldState& other) const
    {
        return accounts == other.accounts && block == other.block;
    }

    Account& get_or_create(const Address& a) { return accounts[a]; }

    [[nodiscard]] const Account* find(const Address& a) const
    {
        const auto it = accounts.find(a);
        return it == accounts.end() ? nullptr : &it->second;
    }

    /// Throws std::invalid_argument if the account already holds code.
    void register_mock_erc20(const Address& a, std::string name,
        std::map<Address, Word> balances);

    [[nodiscard]] Word token_balance(const Address& token, const Address& holder) const;

    /// Snapshot stack for transactional execution: snapshot() pushes a deep
    /// copy, rollback() restores and pops, commit() pops without restoring.
    void snapshot();
    void rollback();
    void commit();

private:
    std::vector<std::pair<std::map<Address, Account>, BlockCtx>> snapshots_;
};
}  // namespace skanf
