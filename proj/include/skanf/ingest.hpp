// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/interpreter.hpp>
#include <skanf/symexec.hpp>
#include <skanf/world.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace skanf
{
/// One historical transaction as a block explorer would report it: outcome,
/// event logs, and (optionally) the internal call tree. Replaying the record
/// on its block's state snapshot is the ground truth; a record whose declared
/// status or logs disagree with the replay is divergent and never seeds
/// analysis.
struct TransactionRecord
{
    Word hash;
    Address from;  ///< Transaction origin.
    Address to;
    Word value;
    bytes calldata;
    uint64_t block_number = 0;
    bool success = true;
    std::vector<EventLog> logs;
    /// Optional in fixtures; the replay-reconstructed call tree is
    /// authoritative whenever a snapshot is available.
    std::vector<InternalCall> internal_calls;
};

/// A fixture file: per-block world snapshots plus the transactions recorded
/// against them.
///
/// JSON schema (all byte fields hex, 0x prefix):
///   {
///     "snapshots": {
///       "<decimal block>": {
///         "block": {"number": N, "timestamp": N, "coinbase": "0x..", "chainId": N},
///         "accounts": {
///           "0x<address>": {
///             "balance": "0x..",
///             "codeHex": "0x..",                // or, mutually exclusive:
///             "mockToken": {"name": "..", "balances": {"0x..": "0x.."},
///                           "allowances": [{"owner": "0x..", "spender": "0x..",
///                                           "amount": "0x.."}]},
///             "storage": {"0x<slot>": "0x<word>"},
///             "nonce": N
///           }
///         }
///       }
///     },
///     "transactions": [
///       {"hash": "0x..", "from": "0x..", "to": "0x..", "value": "0x..",
///        "calldata": "0x..", "blockNumber": N, "status": "success"|"fail",
///        "logs": [{"address": "0x..", "topics": ["0x.."], "data": "0x.."}],
///        "internalCalls": [{"caller": "0x..", "callee": "0x..",
///                           "value": "0x..", "calldata": "0x.."}]}
///     ]
///   }
struct FixtureBundle
{
    std::map<uint64_t, WorldState> snapshots;
    std::vector<TransactionRecord> transactions;
};

/// Schema or cross-link violation in a fixture; the message names the
/// offending field (and block, for dangling snapshot references).
struct FixtureError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Parses a fixture from JSON text. Throws FixtureError with field context on
/// schema violations, including any transaction referencing a block with no
/// snapshot.
FixtureBundle parse_fixture(const std::string& text);

/// parse_fixture over a file's contents. Throws FixtureError if unreadable.
FixtureBundle load_fixture(const std::string& path);

/// Canonical JSON (sorted snapshot keys, lowercase hex, two-space indent).
/// serialize_fixture(parse_fixture(x)) is a fixpoint of x.
std::string serialize_fixture(const FixtureBundle& bundle);

WorldState world_from_json_text(const std::string& text);
std::string world_to_json_text(const WorldState& world);

struct ReplayOutcome
{
    ExecResult result;
    bool divergent = false;
    std::string reason;  ///< Set when divergent.
};

/// Re-executes the record against a copy of `snapshot` and flags divergence
/// when the declared status or event logs disagree with the replay.
ReplayOutcome replay(const TransactionRecord& record, const WorldState& snapshot);

/// Read access to historical chain data. Only the file-backed implementation
/// ships; a remote (archive node / explorer API) implementation can slot in
/// behind the same interface.
class HistoricalProvider
{
public:
    virtual ~HistoricalProvider() = default;

    /// Transactions involving `contract` (as callee, log emitter, or internal
    /// call target), newest first, at most `limit`.
    virtual std::vector<TransactionRecord> transactions_for(
        const Address& contract, size_t limit) = 0;

    /// World state at the given block, or nullopt when unavailable.
    virtual std::optional<WorldState> snapshot_at(uint64_t block) = 0;
};

/// HistoricalProvider backed by one fixture bundle.
class FileProvider final : public HistoricalProvider
{
public:
    explicit FileProvider(FixtureBundle bundle) : bundle_{std::move(bundle)} {}

    static FileProvider open(const std::string& path) { return FileProvider{load_fixture(path)}; }

    std::vector<TransactionRecord> transactions_for(
        const Address& contract, size_t limit) override;
    std::optional<WorldState> snapshot_at(uint64_t block) override;

    [[nodiscard]] const FixtureBundle& bundle() const { return bundle_; }

private:
    FixtureBundle bundle_;
};

struct SeedExtraction
{
    std::vector<SeedInput> seeds;
    std::vector<std::string> warnings;  ///< One entry per skipped record.
};

/// Filters the bundle's transactions into concolic seeds: keeps successful,
/// non-divergent records whose replay emits an ERC-20 Transfer touching
/// `contract` (as emitter or as a from/to topic), then extracts every call
/// targeting `contract` with nonempty calldata from the replayed call tree.
SeedExtraction extract_seeds(const FixtureBundle& bundle, const Address& contract);
}  // namespace skanf
