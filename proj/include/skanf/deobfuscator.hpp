// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/cfg.hpp>

#include <map>

namespace skanf
{
/// One branch-table row: "if the runtime value equals dest, jump to the
/// gadget that lands at dest".
struct BranchTableEntry
{
    uint32_t dest = 0;
    uint32_t entry_pc = 0;   ///< Virtual pc of the entry's DUP1.
    uint32_t gadget_pc = 0;  ///< Virtual pc of the gadget's JUMPDEST.
};

/// Dispatch table injected at virtual pc 0xe000, above the 0x6000 deployable
/// size limit so it can never collide with original code. One entry and one
/// gadget per valid jumpdest, ascending by destination; a runtime value that
/// matches no entry falls through to INVALID, mirroring the native
/// invalid-jump fault.
struct BranchTable
{
    static constexpr uint32_t base_pc = 0xe000;

    uint32_t gadget_base = 0xf000;
    uint32_t entry_stride = 9;   ///< 10 when gadget pcs need PUSH3.
    uint32_t gadget_stride = 7;  ///< JUMPDEST; POP; PUSH2 dest; JUMP + 1 pad.
    std::vector<BranchTableEntry> entries;

    [[nodiscard]] std::optional<uint32_t> entry_for(uint32_t dest) const;
};

/// Throws std::invalid_argument on an empty set (nothing to deobfuscate).
BranchTable build_branch_table(const std::set<uint32_t>& jumpdests);

enum class RewriteKind
{
    Jump,
    Jumpi,
};

/// Replacement instruction sequence for one rewritten jump. The instructions
/// carry no pc: they are spliced into the execution view, never serialized
/// into the contract bytes.
struct RewriteFragment
{
    RewriteKind kind = RewriteKind::Jump;
    std::vector<Instruction> replacement;
};

/// Builds the splice for the indirect jump at jump_pc. Throws
/// std::invalid_argument if jump_pc is not an indirect JUMP/JUMPI of the
/// program.
RewriteFragment rewrite_jump(const Program& program, uint32_t jump_pc, const BranchTable& table);

/// The deobfuscated form of a contract: original bytes untouched, indirect
/// jumps redirected through the branch table in the execution view.
struct InstrumentedProgram
{
    Program original;
    bool obfuscated = false;  ///< False iff the indirect jump set was empty.
    BranchTable table;        ///< Empty when not obfuscated.
    std::map<uint32_t, RewriteFragment> rewrites;  ///< Keyed by jump pc.
    std::vector<Instruction> injected;             ///< Table + gadgets, virtual pcs.

    /// Materializes the executable stream: original instructions with
    /// rewrites spliced in, then the injected table code. Valid jumpdests
    /// grow by the table base and the gadget heads.
    [[nodiscard]] CodeView view() const;
};

InstrumentedProgram instrument(const Program& program, const std::vector<IndirectJump>& jset);

/// Convenience: disassemble + cfg + jset + instrument.
InstrumentedProgram deobfuscate(const Program& program);

/// Assembly listing with original pcs on the left and pc-less injected lines
/// marked; virtual-pc table code appended.
std::string annotated_listing(const InstrumentedProgram& ip);
}  // namespace skanf
