// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/deobfuscator.hpp>

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace skanf
{
namespace
{
Instruction injected(Op op, bytes immediate = {}, std::optional<uint32_t> pc = std::nullopt)
{
    Instruction instr;
    instr.pc = pc;
    instr.opcode = static_cast<uint8_t>(op);
    instr.immediate = std::move(immediate);
    return instr;
}

bytes be16(uint32_t v)
{
    return {static_cast<uint8_t>(v >> 8), static_cast<uint8_t>(v & 0xff)};
}

bytes be24(uint32_t v)
{
    return {static_cast<uint8_t>(v >> 16), static_cast<uint8_t>(v >> 8),
        static_cast<uint8_t>(v & 0xff)};
}

uint32_t round_up(uint32_t v, uint32_t align)
{
    return (v + align - 1) / align * align;
}
}  // namespace

std::optional<uint32_t> BranchTable::entry_for(uint32_t dest) const
{
    const auto it = std::lower_bound(entries.begin(), entries.end(), dest,
        [](const BranchTableEntry& e, uint32_t d) { return e.dest < d; });
    if (it == entries.end() || it->dest != dest)
        return std::nullopt;
    return static_cast<uint32_t>(it - entries.begin());
}

BranchTable build_branch_table(const std::set<uint32_t>& jumpdests)
{
    if (jumpdests.empty())
        throw std::invalid_argument{"empty jumpdest set: nothing to deobfuscate"};

    BranchTable table;
    const auto n = static_cast<uint32_t>(jumpdests.size());

    // First pass assumes PUSH2 gadget operands (stride 9). If the gadget
    // region then reaches above 0xffff, entries need PUSH3 (stride 10).
    for (int pass = 0; pass < 2; ++pass)
    {
        // base: JUMPDEST; entries; INVALID tail.
        const uint32_t table_end = BranchTable::base_pc + 1 + table.entry_stride * n + 1;
        table.gadget_base = std::max<uint32_t>(0xf000, round_up(table_end, 0x1000));
        const uint32_t max_gadget = table.gadget_base + table.gadget_stride * (n - 1);
        if (max_gadget > 0xffff && table.entry_stride == 9)
        {
            table.entry_stride = 10;
            continue;
        }
        break;
    }

    table.entries.reserve(n);
    uint32_t i = 0;
    for (const auto dest : jumpdests)  // std::set iterates ascending
    {
        BranchTableEntry e;
        e.dest = dest;
        e.entry_pc = BranchTable::base_pc + 1 + table.entry_stride * i;
        e.gadget_pc = table.gadget_base + table.gadget_stride * i;
        table.entries.push_back(e);
        ++i;
    }
    return table;
}

RewriteFragment rewrite_jump(const Program& program, uint32_t jump_pc, const BranchTable&)
{
    // The table argument pins the call shape; fragments only ever target the
    // fixed table base, which is a compile-time constant.
    const auto jset = identify_indirect_jumps(program);
    const auto it = std::find_if(jset.begin(), jset.end(),
        [&](const IndirectJump& j) { return j.jump_pc == jump_pc; });
    if (it == jset.end())
        throw std::invalid_argument{"pc is not an indirect jump"};

    RewriteFragment frag;
    const bytes base = be16(BranchTable::base_pc);
    if (static_cast<Op>(it->opcode) == Op::JUMP)
    {
        // Runtime destination stays on the stack; the table consumes it.
        frag.kind = RewriteKind::Jump;
        frag.replacement = {injected(Op::PUSH2, base), injected(Op::JUMP)};
    }
    else
    {
        // Condition must sit on top for the branch; the unused runtime
        // destination is discarded on the false path.
        frag.kind = RewriteKind::Jumpi;
        frag.replacement = {injected(Op::SWAP1), injected(Op::PUSH2, base), injected(Op::JUMPI),
            injected(Op::POP)};
    }
    return frag;
}

InstrumentedProgram instrument(const Program& program, const std::vector<IndirectJump>& jset)
{
    InstrumentedProgram ip;
    ip.original = program;
    if (jset.empty())
        return ip;

    ip.obfuscated = true;
    ip.table = build_branch_table(program.jumpdests);
    for (const auto& j : jset)
        ip.rewrites.emplace(j.jump_pc, rewrite_jump(program, j.jump_pc, ip.table));

    const bool wide_gadget = ip.table.entry_stride == 10;
    ip.injected.push_back(injected(Op::JUMPDEST, {}, BranchTable::base_pc));
    for (const auto& e : ip.table.entries)
    {
        ip.injected.push_back(injected(Op::DUP1, {}, e.entry_pc));
        ip.injected.push_back(injected(Op::PUSH2, be16(e.dest), e.entry_pc + 1));
        ip.injected.push_back(injected(Op::EQ, {}, e.entry_pc + 4));
        if (wide_gadget)
        {
            ip.injected.push_back(injected(Op::PUSH3, be24(e.gadget_pc), e.entry_pc + 5));
            ip.injected.push_back(injected(Op::JUMPI, {}, e.entry_pc + 9));
        }
        else
        {
            ip.injected.push_back(injected(Op::PUSH2, be16(e.gadget_pc), e.entry_pc + 5));
            ip.injected.push_back(injected(Op::JUMPI, {}, e.entry_pc + 8));
        }
    }
    const uint32_t tail_pc =
        BranchTable::base_pc + 1 + ip.table.entry_stride * static_cast<uint32_t>(ip.table.entries.size());
    ip.injected.push_back(injected(Op::INVALID, {}, tail_pc));

    for (const auto& e : ip.table.entries)
    {
        ip.injected.push_back(injected(Op::JUMPDEST, {}, e.gadget_pc));
        ip.injected.push_back(injected(Op::POP, {}, e.gadget_pc + 1));
        ip.injected.push_back(injected(Op::PUSH2, be16(e.dest), e.gadget_pc + 2));
        ip.injected.push_back(injected(Op::JUMP, {}, e.gadget_pc + 5));
    }
    return ip;
}

InstrumentedProgram deobfuscate(const Program& program)
{
    return instrument(program, identify_indirect_jumps(program));
}

CodeView InstrumentedProgram::view() const
{
    CodeView view;
    view.raw = original.code;
    view.jumpdests = original.jumpdests;
    for (const auto& instr : original.instructions)
    {
        const auto rw = instr.pc ? rewrites.find(*instr.pc) : rewrites.end();
        if (rw != rewrites.end())
        {
            for (const auto& rep : rw->second.replacement)
                view.stream.push_back(rep);
        }
        else
        {
            view.stream.push_back(instr);
        }
    }
    for (const auto& instr : injected)
        view.stream.push_back(instr);

    if (obfuscated)
    {
        view.jumpdests.insert(BranchTable::base_pc);
        for (const auto& e : table.entries)
            view.jumpdests.insert(e.gadget_pc);
    }

    for (size_t i = 0; i < view.stream.size(); ++i)
        if (view.stream[i].pc)
            view.pc_index.emplace(*view.stream[i].pc, i);
    return view;
}

std::string annotated_listing(const InstrumentedProgram& ip)
{
    std::ostringstream os;
    const auto view = ip.view();
    os << std::hex;
    for (const auto& instr : view.stream)
    {
        if (instr.pc)
            os << "0x" << std::setw(4) << std::setfill('0') << *instr.pc << "  ";
        else
            os << "    +  ";  // injected, carries no pc
        os << to_string(instr);
        if (!instr.pc)
            os << "    ; inserted";
        os << "\n";
    }
    return os.str();
}
}  // namespace skanf
