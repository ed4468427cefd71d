// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/bytecode.hpp>

#include <string>
#include <vector>

namespace skanf
{
/// Half-open instruction range [first_index, last_index] in a CodeView stream.
/// Blocks start at stream begin, at JUMPDESTs, and after block terminators.
struct BasicBlock
{
    uint32_t id = 0;
    size_t first_index = 0;
    size_t last_index = 0;  ///< Inclusive.
    std::optional<uint32_t> start_pc;
    bool starts_with_jumpdest = false;
};

enum class EdgeKind
{
    Jump,         ///< Statically resolved JUMP target.
    BranchTrue,   ///< Statically resolved JUMPI target.
    BranchFalse,  ///< JUMPI fall-through.
    Fall,         ///< Implicit fall-through into a JUMPDEST block.
};

struct Edge
{
    uint32_t from = 0;
    uint32_t to = 0;
    EdgeKind kind = EdgeKind::Fall;
};

struct Cfg
{
    std::vector<BasicBlock> blocks;
    std::vector<Edge> edges;
    std::vector<std::vector<uint32_t>> successors;  ///< By block id.
    uint32_t entry = 0;
    std::vector<uint32_t> block_of_index;  ///< Stream index -> block id.

    [[nodiscard]] std::optional<uint32_t> block_at_pc(const CodeView& view, uint32_t pc) const;
};

/// A JUMP or JUMPI whose destination is not a compile-time constant under
/// intra-block constant-stack simulation. These are the rewrite candidates.
struct IndirectJump
{
    uint32_t jump_pc = 0;
    uint8_t opcode = 0;            ///< JUMP or JUMPI.
    std::string dest_var;          ///< Symbolic name of the destination operand.

    bool operator==(const IndirectJump&) const = default;
};

Cfg build_cfg(const CodeView& view);
Cfg build_cfg(const Program& program);

/// Ascending by jump_pc. Only pc-bearing jumps are candidates; injected
/// branch-table code is direct by construction.
std::vector<IndirectJump> identify_indirect_jumps(const CodeView& view, const Cfg& cfg);
std::vector<IndirectJump> identify_indirect_jumps(const Program& program);

/// Block ids reachable from the entry block over static edges.
std::vector<uint32_t> reachable_blocks(const Cfg& cfg);

/// Fraction of blocks reachable over static edges; unreachable blocks stay in
/// the denominator. 1.0 for an empty program.
double code_coverage(const Cfg& cfg);

struct CallSite
{
    uint32_t pc = 0;
    uint8_t opcode = 0;  ///< CALL, CALLCODE, DELEGATECALL or STATICCALL.
};

/// Ascending by pc.
std::vector<CallSite> call_sites(const CodeView& view);

std::string to_dot(const Cfg& cfg, const CodeView& view);
std::string to_edge_list(const Cfg& cfg);
}  // namespace skanf
