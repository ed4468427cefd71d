// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/opcodes.hpp>
#include <skanf/word.hpp>

#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

namespace skanf
{
/// A decoded instruction. Injected (virtual) instructions produced by the
/// deobfuscator may carry pcs >= 0x6000, above any deployable code; the
/// replacements spliced over rewritten jumps carry no pc at all.
/// Table entry used for bytes that decode as undefined.
const OpInfo& undefined_op_info();

struct Instruction
{
    std::optional<uint32_t> pc;
    uint8_t opcode = 0;
    bytes immediate;  ///< PUSH operand, zero-padded if truncated by end of code.
    /// Set when the decode config disables this opcode (PUSH0 pre-Shanghai);
    /// the byte then behaves as INVALID regardless of the static table.
    bool invalid_by_config = false;

    [[nodiscard]] const OpInfo& info() const
    {
        return invalid_by_config ? undefined_op_info() : op_info(opcode);
    }
    [[nodiscard]] Op op() const { return static_cast<Op>(opcode); }
    [[nodiscard]] Word push_value() const { return word_from_bytes(immediate); }
    [[nodiscard]] bool terminates_block() const
    {
        return invalid_by_config || is_terminator(opcode);
    }

    bool operator==(const Instruction&) const = default;
};

struct DisasmConfig
{
    /// Shanghai PUSH0 enabled by default; disabling treats 0x5f as an
    /// undefined byte (pre-Shanghai targets).
    bool push0 = true;
};

/// Disassembled contract: the full byte tiling of the code. Every byte is
/// covered exactly once; undefined bytes become INVALID-behaving instructions
/// that keep their raw value so serialization round-trips.
struct Program
{
    bytes code;
    std::vector<Instruction> instructions;
    std::set<uint32_t> jumpdests;  ///< pcs of JUMPDEST bytes outside push immediates.
};

Program disassemble(bytes code, const DisasmConfig& config = {});

/// Valid jump destinations in ascending pc order.
std::vector<uint32_t> collect_jumpdests(const Program& program);

/// Re-encodes the instruction tiling; equals Program::code by construction.
bytes serialize(const Program& program);

/// Executable view of a code body: the instruction stream the machine walks,
/// plus pc lookup and the valid jump-destination set. Both plain programs and
/// instrumented programs lower to this.
struct CodeView
{
    std::vector<Instruction> stream;
    std::unordered_map<uint32_t, size_t> pc_index;  ///< pc -> stream position.
    std::set<uint32_t> jumpdests;
    bytes raw;  ///< Original code bytes (CODESIZE source).

    static CodeView of(const Program& program);

    [[nodiscard]] std::optional<size_t> index_of(uint32_t pc) const
    {
        const auto it = pc_index.find(pc);
        if (it == pc_index.end())
            return std::nullopt;
        return it->second;
    }
};

/// One-line rendering, e.g. "PUSH2 0x0a00" or "INVALID(0xf9)".
std::string to_string(const Instruction& instr);
}  // namespace skanf
