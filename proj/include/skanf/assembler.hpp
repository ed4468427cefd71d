// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/bytecode.hpp>

#include <map>
#include <string>

namespace skanf
{
/// Minimal bytecode assembler for building test subjects. Supports forward
/// label references through PUSH2 placeholders patched at take().
class Assembler
{
public:
    Assembler& op(Op o);
    Assembler& raw(uint8_t byte);
    Assembler& raw(bytes_view data);

    /// PUSHn with the smallest width that fits, or an explicit width.
    Assembler& push(const Word& value, int width = -1);
    Assembler& push(const Address& a) { return push(a.to_word(), 20); }

    /// PUSH2 of a label resolved at take(). The label may be bound later.
    Assembler& push_label(const std::string& name);

    /// Binds a label to the current pc.
    Assembler& label(const std::string& name);

    /// Emits filler up to the target pc as inert basic blocks (JUMPDEST-led,
    /// STOP-terminated) so padding stays reachable through a branch table.
    Assembler& pad_to(uint32_t target_pc);

    /// JUMPDEST at an exact pc (pads first).
    Assembler& jumpdest_at(uint32_t target_pc);

    [[nodiscard]] uint32_t pc() const { return static_cast<uint32_t>(code_.size()); }

    /// Resolves labels and returns the code. Throws on unbound labels.
    bytes take();

private:
    bytes code_;
    std::map<std::string, uint32_t> labels_;
    std::multimap<std::string, uint32_t> fixups_;  // label -> offset of PUSH2 immediate
};
}  // namespace skanf
