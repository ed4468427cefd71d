// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/assembler.hpp>

#include <stdexcept>

namespace skanf
{
Assembler& Assembler::op(Op o)
{
    code_.push_back(static_cast<uint8_t>(o));
    return *this;
}

Assembler& Assembler::raw(uint8_t byte)
{
    code_.push_back(byte);
    return *this;
}

Assembler& Assembler::raw(bytes_view data)
{
    code_.insert(code_.end(), data.begin(), data.end());
    return *this;
}

Assembler& Assembler::push(const Word& value, int width)
{
    auto full = word_to_bytes(value);
    int n = width;
    if (n < 0)
    {
        n = 32;
        while (n > 1 && full[static_cast<size_t>(32 - n)] == 0)
            --n;
        if (value == 0)
            n = 1;  // PUSH1 0x00 keeps fixtures pre-Shanghai friendly
    }
    if (n > 32)
        throw std::invalid_argument{"push width exceeds 32"};
    code_.push_back(static_cast<uint8_t>(static_cast<uint8_t>(Op::PUSH0) + n));
    code_.insert(code_.end(), full.begin() + (32 - n), full.end());
    return *this;
}

Assembler& Assembler::push_label(const std::string& name)
{
    op(Op::PUSH2);
    fixups_.emplace(name, static_cast<uint32_t>(code_.size()));
    code_.push_back(0);
    code_.push_back(0);
    return *this;
}

Assembler& Assembler::label(const std::string& name)
{
    if (!labels_.emplace(name, pc()).second)
        throw std::invalid_argument{"label rebound: " + name};
    return *this;
}

Assembler& Assembler::pad_to(uint32_t target_pc)
{
    if (target_pc < pc())
        throw std::invalid_argument{"pad target before current pc"};
    while (pc() < target_pc)
    {
        const uint32_t gap = target_pc - pc();
        if (gap == 1)
        {
            op(Op::JUMPDEST);  // falls through to the next block
        }
        else if (gap == 2)
        {
            op(Op::JUMPDEST).op(Op::STOP);
        }
        else if (gap == 3)
        {
            op(Op::JUMPDEST).op(Op::CALLER).op(Op::STOP);
        }
        else
        {
            // JUMPDEST + PUSHk zeros + STOP, largest chunk first.
            const uint32_t k = std::min<uint32_t>(gap - 3, 32);  // k >= 1 here
            op(Op::JUMPDEST);
            code_.push_back(static_cast<uint8_t>(static_cast<uint8_t>(Op::PUSH1) + k - 1));
            code_.insert(code_.end(), k, 0);
            op(Op::STOP);
        }
    }
    return *this;
}

Assembler& Assembler::jumpdest_at(uint32_t target_pc)
{
    pad_to(target_pc);
    return op(Op::JUMPDEST);
}

bytes Assembler::take()
{
    for (const auto& [name, offset] : fixups_)
    {
        const auto it = labels_.find(name);
        if (it == labels_.end())
            throw std::invalid_argument{"unbound label: " + name};
        if (it->second > 0xffff)
            throw std::invalid_argument{"label beyond PUSH2 range: " + name};
        code_[offset] = static_cast<uint8_t>(it->second >> 8);
        code_[offset + 1] = static_cast<uint8_t>(it->second & 0xff);
    }
    fixups_.clear();
    return std::move(code_);
}
}  // namespace skanf
