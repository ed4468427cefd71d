// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/bytecode.hpp>
#include <skanf/world.hpp>

namespace skanf
{
struct Tx
{
    Address from;
    Address to;
    Word value;
    bytes calldata;
    int64_t gas = 10'000'000;
    int64_t gas_price = 0;
};

enum class Status
{
    Success,
    Revert,
    Fault,
};

struct TraceEntry
{
    uint32_t pc = 0;
    uint8_t opcode = 0;
    int depth = 0;
    uint32_t stack_height = 0;  ///< Before the instruction executes.
};

/// A CALL-family instruction that was reached, recorded before the callee
/// runs. The independent ground truth for taint checks.
struct CallObservation
{
    uint32_t pc = 0;
    int depth = 0;
    uint8_t opcode = 0;
    Address target;
    Word value;
    bytes args;  ///< Memory region passed to the callee.
};

/// A message call executed inside a transaction (the calls a block explorer
/// would list as internal transactions).
struct InternalCall
{
    Address caller;
    Address callee;
    Word value;
    bytes calldata;
    uint8_t opcode = 0;  ///< 0 for the top-level call.
};

struct ExecResult
{
    Status status = Status::Fault;
    std::string fault;  ///< Reason when status == Fault; "unsupported: X" for subset gaps.
    bytes return_data;
    std::vector<EventLog> logs;
    std::vector<TraceEntry> trace;
    std::vector<InternalCall> calls;            ///< Includes the top-level call.
    std::vector<CallObservation> observations;  ///< All CALL sites reached, any frame.
    int64_t gas_used = 0;
};

struct ExecOptions
{
    /// Executes this stream for the `to` account instead of its stored code;
    /// used to run instrumented views against an unmodified world.
    const CodeView* root_code = nullptr;
    bool record_trace = true;
    int max_depth = 64;
};

/// Runs a full transaction against the world. State changes persist on
/// success/revert semantics per frame; a failed top-level call leaves the
/// world deep-equal to the pre-state (value transfer included).
ExecResult execute_transaction(WorldState& world, const Tx& tx, const ExecOptions& options = {});

/// Message call below the transaction level (no intrinsic gas, no nonce
/// bump). The symbolic machine uses this to execute concrete nested calls
/// against a path's world copy.
ExecResult call_message(WorldState& world, const Address& caller, const Address& origin,
    const Address& callee, const Word& value, const bytes& calldata, bool is_static, int64_t gas,
    int depth = 1, const ExecOptions& options = {});

bool reached_pc(const ExecResult& result, uint32_t pc);

/// One "pc opcode" pair per line.
std::string dump_trace(const ExecResult& result);

/// Simplified flat gas cost of one opcode, excluding memory expansion.
int64_t base_gas_cost(uint8_t opcode);
}  // namespace skanf
