// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/symexpr.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace skanf
{
enum class SolveStatus : uint8_t
{
    Sat,      ///< model holds a verified satisfying assignment
    Unsat,    ///< the constraints provably conflict
    Unknown,  ///< gave up (too many free bytes, budget exhausted)
};

struct SolveResult
{
    SolveStatus status = SolveStatus::Unknown;
    Assignment model;  ///< Valid only when status == Sat.
};

/// Process-wide soundness instrumentation. Every model the solver hands out
/// must re-evaluate all of its constraints to true; the acceptance suite
/// asserts models_returned == models_verified with zero failures.
struct SolverStats
{
    uint64_t solve_calls = 0;
    uint64_t models_returned = 0;
    uint64_t models_verified = 0;
    uint64_t verification_failures = 0;
    uint64_t unsat_returned = 0;
    uint64_t unknown_returned = 0;

    void reset() { *this = {}; }
};

/// Constraint solver over calldata-byte variables. A constraint is satisfied
/// when it evaluates to a nonzero word (the JUMPI convention).
///
/// Strategy: ground environment variables, fold constants, decompose byte
/// equalities into per-lane pins with back-substitution to a fixpoint, narrow
/// single-byte intervals from comparisons, then enumerate over at most four
/// remaining unpinned bytes. Anything harder returns Unknown; Unsat is only
/// reported for hard conflicts, which makes it safe to prune on.
class Solver
{
public:
    /// Seeds the enumeration shuffling from the SKANF_SEED environment
    /// variable when set, otherwise from a fixed default.
    Solver();
    explicit Solver(uint64_t seed) : seed_{seed} {}

    /// Searches for an assignment extending `pins` under the fixed
    /// environment `env` (its caller/origin/value/block fields are copied
    /// into the returned model).
    [[nodiscard]] SolveResult solve(const std::vector<SymExprPtr>& constraints,
        const std::map<uint32_t, uint8_t>& pins, const Assignment& env) const;

    /// True only when pin propagation exposes a hard contradiction. Never
    /// true for merely-undecided constraint sets, so pruning on it cannot
    /// drop a feasible path.
    [[nodiscard]] static bool definitely_unsat(const std::vector<SymExprPtr>& constraints,
        const std::map<uint32_t, uint8_t>& pins, const Assignment& env);

    static SolverStats& stats();

private:
    uint64_t seed_ = 0;
};
}  // namespace skanf
