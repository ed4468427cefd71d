// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/bytecode.hpp>

namespace skanf
{
const OpInfo& undefined_op_info()
{
    static const OpInfo info{"INVALID", 0, 0, 0, false};
    return info;
}

Program disassemble(bytes code, const DisasmConfig& config)
{
    Program p;
    p.code = std::move(code);
    uint32_t pc = 0;
    const auto size = static_cast<uint32_t>(p.code.size());
    while (pc < size)
    {
        Instruction instr;
        instr.pc = pc;
        instr.opcode = p.code[pc];
        uint32_t next = pc + 1;
        const bool decode_as_push =
            is_push(instr.opcode) && (config.push0 || instr.op() != Op::PUSH0);
        if (!config.push0 && instr.op() == Op::PUSH0)
            instr.invalid_by_config = true;
        if (decode_as_push)
        {
            const unsigned n = push_size(instr.opcode);
            instr.immediate.assign(n, 0);
            for (unsigned i = 0; i < n; ++i)
            {
                // A push truncated by end of code reads zeros for the
                // missing bytes, matching execution semantics.
                if (next + i < size)
                    instr.immediate[i] = p.code[next + i];
            }
            next += n;
        }
        else if (instr.op() == Op::JUMPDEST)
        {
            p.jumpdests.insert(pc);
        }
        p.instructions.push_back(std::move(instr));
        pc = next;
    }
    return p;
}

std::vector<uint32_t> collect_jumpdests(const Program& program)
{
    return {program.jumpdests.begin(), program.jumpdests.end()};
}

bytes serialize(const Program& program)
{
    bytes out;
    out.reserve(program.code.size());
    for (const auto& instr : program.instructions)
    {
        out.push_back(instr.opcode);
        // Truncated trailing pushes were zero-padded at decode; only the
        // bytes that exist in the original code are emitted back.
        const size_t remaining = program.code.size() - out.size();
        const size_t emit = std::min(instr.immediate.size(), remaining);
        out.insert(out.end(), instr.immediate.begin(), instr.immediate.begin() + emit);
    }
    return out;
}

CodeView CodeView::of(const Program& program)
{
    CodeView view;
    view.stream = program.instructions;
    view.jumpdests = program.jumpdests;
    view.raw = program.code;
    view.pc_index.reserve(view.stream.size());
    for (size_t i = 0; i < view.stream.size(); ++i)
        view.pc_index.emplace(*view.stream[i].pc, i);
    return view;
}

std::string to_string(const Instruction& instr)
{
    const auto& info = instr.info();
    std::string out{info.name};
    if (!info.defined && instr.opcode != static_cast<uint8_t>(Op::INVALID))
    {
        out += "(0x";
        static constexpr char digits[] = "0123456789abcdef";
        out.push_back(digits[instr.opcode >> 4]);
        out.push_back(digits[instr.opcode & 0x0f]);
        out += ")";
    }
    if (!instr.immediate.empty())
        out += " 0x" + to_hex(instr.immediate);
    return out;
}
}  // namespace skanf
