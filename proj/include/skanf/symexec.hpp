// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/deobfuscator.hpp>
#include <skanf/interpreter.hpp>
#include <skanf/solver.hpp>
#include <skanf/taint.hpp>

#include <optional>
#include <vector>

namespace skanf
{
/// One machine value: concrete shadow (always present in concolic mode),
/// symbolic expression, and per-byte taint.
struct SymWord
{
    std::optional<Word> concrete;
    SymExprPtr expr;
    TaintVec taint;
};

/// A transaction-shaped input extracted from history that drives one
/// concolic run.
struct SeedInput
{
    Address caller;
    Address origin;
    bytes calldata;
    Word value;
    uint64_t block_number = 0;
};

/// A CALL site one path reached, with everything later stages need: the
/// taint decomposition, the parameters' symbolic expressions, the path
/// constraints accumulated through the halt, and the calldata pinning that
/// reproduces the path.
struct SinkRecord
{
    CallSiteAnalysis site;

    SymExprPtr target_expr;
    SymExprPtr value_expr;
    SymExprPtr selector_expr;            ///< Right-aligned 4-byte word.
    std::vector<SymExprPtr> arg_exprs;   ///< Aligned with site.args.

    /// Full path constraints once the path halted (branch conditions in
    /// order taken). Valid whether or not the halt completed; see
    /// reached_halt.
    std::vector<SymExprPtr> constraints;

    std::map<uint32_t, uint8_t> pins;      ///< Concrete calldata bytes assumed.
    std::vector<uint32_t> symbolic_bytes;  ///< Calldata bytes feeding CALL params.
    size_t calldata_len = 0;

    Address caller;
    Address origin;
    bool recorded_origin = false;  ///< Origin came from history, not the adversary.
    Word call_value;
    uint64_t block_number = 0;

    Status halt_status = Status::Fault;
    bool reached_halt = false;  ///< False when a budget cut the path short.
};

struct ExploreStats
{
    uint64_t paths_explored = 0;
    uint64_t pruned_unsat = 0;
    uint64_t pruned_cfg = 0;
    uint64_t pruned_table_cap = 0;
    uint64_t steps = 0;
};

struct ExploreConfig
{
    uint32_t table_visit_cap = 2;
    uint32_t path_cap = 4096;
    double time_budget_seconds = 600.0;
    uint64_t max_steps_per_path = 1 << 20;

    /// Fallback mode's concrete CALLDATASIZE: pure-symbolic paths assume an
    /// input this long with every byte free.
    size_t assumed_calldata_size = 0x200;

    Address adversary;  ///< Caller (and origin unless recorded_origin is set).
    std::optional<Address> recorded_origin;
    Word call_value = 0;  ///< Fallback call value.

    /// Re-evaluate every pushed expression against the seed assignment and
    /// fault the path on divergence (test instrumentation).
    bool check_consistency = false;
};

struct ConcolicResult
{
    bool skipped = false;      ///< Seed did not execute successfully.
    std::string skip_reason;
    std::vector<SinkRecord> sinks;
    Status halt_status = Status::Fault;
};

/// Replays one seed concretely while maintaining symbolic and taint shadows;
/// every CALL in the root frame is decomposed into a SinkRecord whose
/// param-feeding calldata bytes are left symbolic and all other bytes pinned
/// to the seed.
ConcolicResult concolic_run(const InstrumentedProgram& ip, const Address& contract,
    const SeedInput& seed, const WorldState& world, const ExploreConfig& config = {});

struct ExploreResult
{
    std::vector<SinkRecord> sinks;
    ExploreStats stats;
    bool incomplete = false;  ///< A budget or cap stopped exploration early.
};

/// Pure-symbolic fallback: depth-first forking exploration from entry_pc
/// toward one CALL site, pruning paths whose constraints conflict, whose
/// position cannot reach the target in the CFG, or which re-enter the branch
/// table beyond the visit cap.
ExploreResult symbolic_explore(const InstrumentedProgram& ip, const Address& contract,
    uint32_t entry_pc, uint32_t target_call_pc, const WorldState& world,
    const ExploreConfig& config);
}  // namespace skanf
