// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/cfg.hpp>

#include <algorithm>
#include <deque>
#include <sstream>

namespace skanf
{
namespace
{
/// Abstract stack slot: a compile-time constant or a named unknown.
struct AbsVal
{
    std::optional<Word> value;
    std::string name;
};

/// Constant-stack state threaded through one basic block. Pops below the
/// modeled stack produce fresh unknowns standing for caller-provided slots.
struct AbsStack
{
    std::vector<AbsVal> slots;  // back() is the stack top
    unsigned underflow_count = 0;

    AbsVal pop()
    {
        if (slots.empty())
            return {std::nullopt, "in" + std::to_string(underflow_count++)};
        AbsVal v = std::move(slots.back());
        slots.pop_back();
        return v;
    }

    void push(AbsVal v)
    {
        if (slots.size() < 1024)
            slots.push_back(std::move(v));
    }
};

std::string pc_name(const Instruction& instr)
{
    if (instr.pc)
    {
        std::ostringstream os;
        os << "v" << std::hex << *instr.pc;
        return os.str();
    }
    return "vx";
}

/// Transfers one instruction over the abstract stack. Constants survive
/// PUSH/DUP/SWAP/POP/AND/PC; everything else produces named unknowns.
void abs_step(AbsStack& st, const Instruction& instr)
{
    const auto& info = instr.info();
    const uint8_t opcode = instr.opcode;
    if (!info.defined)
        return;
    if (is_push(opcode))
    {
        st.push({instr.push_value(), {}});
        return;
    }
    if (is_dup(opcode))
    {
        const unsigned n = opcode - static_cast<uint8_t>(Op::DUP1) + 1;
        while (st.slots.size() < n)
            st.slots.insert(st.slots.begin(),
                AbsVal{std::nullopt, "in" + std::to_string(st.underflow_count++)});
        st.push(AbsVal{st.slots[st.slots.size() - n]});
        return;
    }
    if (is_swap(opcode))
    {
        const unsigned n = opcode - static_cast<uint8_t>(Op::SWAP1) + 1;
        while (st.slots.size() < n + 1)
            st.slots.insert(st.slots.begin(),
                AbsVal{std::nullopt, "in" + std::to_string(st.underflow_count++)});
        std::swap(st.slots[st.slots.size() - 1], st.slots[st.slots.size() - 1 - n]);
        return;
    }
    switch (instr.op())
    {
    case Op::POP:
        st.pop();
        return;
    case Op::AND:
    {
        const auto a = st.pop();
        const auto b = st.pop();
        if (a.value && b.value)
            st.push({*a.value & *b.value, {}});
        else
            st.push({std::nullopt, pc_name(instr)});
        return;
    }
    case Op::PC:
        if (instr.pc)
            st.push({Word{*instr.pc}, {}});
        else
            st.push({std::nullopt, pc_name(instr)});
        return;
    case Op::JUMPDEST:
        return;
    default:
        break;
    }
    for (unsigned i = 0; i < info.pops; ++i)
        st.pop();
    for (unsigned i = 0; i < info.pushes; ++i)
        st.push({std::nullopt, pc_name(instr)});
}

struct JumpResolution
{
    std::optional<Word> dest;
    std::string dest_var;
    size_t jump_index;
};

/// Runs the constant-stack simulation over every block in stream order and
/// reports the abstract destination of each JUMP/JUMPI. A block inherits its
/// predecessor's stack only when control can just fall into it from the
/// preceding block and it is not itself a jump target.
std::vector<JumpResolution> resolve_jumps(const CodeView& view, const std::vector<BasicBlock>& blocks)
{
    std::vector<JumpResolution> out;
    AbsStack carried;
    bool carry_valid = false;

    for (const auto& block : blocks)
    {
        AbsStack st;
        const bool jump_target = block.starts_with_jumpdest;
        if (carry_valid && !jump_target)
            st = carried;

        for (size_t i = block.first_index; i <= block.last_index; ++i)
        {
            const auto& instr = view.stream[i];
            if (instr.op() == Op::JUMP || instr.op() == Op::JUMPI)
            {
                const auto dest = st.slots.empty() ?
                                      AbsVal{std::nullopt,
                                          "in" + std::to_string(st.underflow_count)} :
                                      st.slots.back();
                out.push_back({dest.value, dest.name, i});
            }
            abs_step(st, instr);
        }

        const auto& last = view.stream[block.last_index];
        const bool falls_through =
            !last.terminates_block() || last.op() == Op::JUMPI;
        carried = std::move(st);
        carry_valid = falls_through;
    }
    return out;
}
}  // namespace

std::optional<uint32_t> Cfg::block_at_pc(const CodeView& view, uint32_t pc) const
{
    const auto idx = view.index_of(pc);
    if (!idx || *idx >= block_of_index.size())
        return std::nullopt;
    return block_of_index[*idx];
}

Cfg build_cfg(const CodeView& view)
{
    Cfg cfg;
    if (view.stream.empty())
        return cfg;

    // Block boundaries.
    std::vector<size_t> leaders;
    bool next_is_leader = true;
    for (size_t i = 0; i < view.stream.size(); ++i)
    {
        const auto& instr = view.stream[i];
        if (next_is_leader || instr.op() == Op::JUMPDEST)
            leaders.push_back(i);
        next_is_leader = instr.terminates_block();
    }

    cfg.block_of_index.assign(view.stream.size(), 0);
    for (size_t b = 0; b < leaders.size(); ++b)
    {
        BasicBlock block;
        block.id = static_cast<uint32_t>(b);
        block.first_index = leaders[b];
        block.last_index = (b + 1 < leaders.size()) ? leaders[b + 1] - 1 : view.stream.size() - 1;
        block.start_pc = view.stream[block.first_index].pc;
        block.starts_with_jumpdest = view.stream[block.first_index].op() == Op::JUMPDEST;
        for (size_t i = block.first_index; i <= block.last_index; ++i)
            cfg.block_of_index[i] = block.id;
        cfg.blocks.push_back(block);
    }

    const auto resolutions = resolve_jumps(view, cfg.blocks);

    const auto block_at_dest = [&](const Word& dest) -> std::optional<uint32_t> {
        if (dest > 0xffffffffu)
            return std::nullopt;
        const auto pc = static_cast<uint32_t>(dest);
        if (!view.jumpdests.contains(pc))
            return std::nullopt;  // runtime fault, no edge
        const auto idx = view.index_of(pc);
        if (!idx)
            return std::nullopt;
        return cfg.block_of_index[*idx];
    };

    std::unordered_map<size_t, const JumpResolution*> resolution_at;
    for (const auto& r : resolutions)
        resolution_at.emplace(r.jump_index, &r);

    for (const auto& block : cfg.blocks)
    {
        const auto& last = view.stream[block.last_index];
        const bool has_next = block.id + 1 < cfg.blocks.size();
        switch (last.op())
        {
        case Op::JUMP:
        {
            const auto* r = resolution_at.at(block.last_index);
            if (r->dest)
                if (const auto to = block_at_dest(*r->dest))
                    cfg.edges.push_back({block.id, *to, EdgeKind::Jump});
            break;
        }
        case Op::JUMPI:
        {
            const auto* r = resolution_at.at(block.last_index);
            if (r->dest)
                if (const auto to = block_at_dest(*r->dest))
                    cfg.edges.push_back({block.id, *to, EdgeKind::BranchTrue});
            if (has_next)
                cfg.edges.push_back({block.id, block.id + 1, EdgeKind::BranchFalse});
            break;
        }
        default:
            if (!last.terminates_block() && has_next)
                cfg.edges.push_back({block.id, block.id + 1, EdgeKind::Fall});
            break;
        }
    }

    cfg.successors.assign(cfg.blocks.size(), {});
    for (const auto& e : cfg.edges)
        cfg.successors[e.from].push_back(e.to);
    return cfg;
}

Cfg build_cfg(const Program& program)
{
    return build_cfg(CodeView::of(program));
}

std::vector<IndirectJump> identify_indirect_jumps(const CodeView& view, const Cfg& cfg)
{
    std::vector<IndirectJump> out;
    const auto resolutions = resolve_jumps(view, cfg.blocks);
    for (const auto& r : resolutions)
    {
        if (r.dest)
            continue;
        const auto& instr = view.stream[r.jump_index];
        if (!instr.pc)
            continue;
        out.push_back({*instr.pc, instr.opcode, r.dest_var});
    }
    std::sort(out.begin(), out.end(),
        [](const IndirectJump& a, const IndirectJump& b) { return a.jump_pc < b.jump_pc; });
    return out;
}

std::vector<IndirectJump> identify_indirect_jumps(const Program& program)
{
    const auto view = CodeView::of(program);
    return identify_indirect_jumps(view, build_cfg(view));
}

std::vector<uint32_t> reachable_blocks(const Cfg& cfg)
{
    std::vector<uint32_t> order;
    if (cfg.blocks.empty())
        return order;
    std::vector<bool> seen(cfg.blocks.size(), false);
    std::deque<uint32_t> queue{cfg.entry};
    seen[cfg.entry] = true;
    while (!queue.empty())
    {
        const auto b = queue.front();
        queue.pop_front();
        order.push_back(b);
        for (const auto s : cfg.successors[b])
        {
            if (!seen[s])
            {
                seen[s] = true;
                queue.push_back(s);
            }
        }
    }
    std::sort(order.begin(), order.end());
    return order;
}

double code_coverage(const Cfg& cfg)
{
    if (cfg.blocks.empty())
        return 1.0;
    const auto reachable = reachable_blocks(cfg);
    return static_cast<double>(reachable.size()) / static_cast<double>(cfg.blocks.size());
}

std::vector<CallSite> call_sites(const CodeView& view)
{
    std::vector<CallSite> out;
    for (const auto& instr : view.stream)
    {
        switch (instr.op())
        {
        case Op::CALL:
        case Op::CALLCODE:
        case Op::DELEGATECALL:
        case Op::STATICCALL:
            if (instr.pc)
                out.push_back({*instr.pc, instr.opcode});
            break;
        default:
            break;
        }
    }
    std::sort(out.begin(), out.end(),
        [](const CallSite& a, const CallSite& b) { return a.pc < b.pc; });
    return out;
}

std::string to_dot(const Cfg& cfg, const CodeView& view)
{
    std::ostringstream os;
    os << "digraph cfg {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& block : cfg.blocks)
    {
        os << "  b" << block.id << " [label=\"";
        if (block.start_pc)
            os << "0x" << std::hex << *block.start_pc << std::dec << ":";
        else
            os << "injected:";
        os << "\\l";
        for (size_t i = block.first_index; i <= block.last_index; ++i)
            os << to_string(view.stream[i]) << "\\l";
        os << "\"];\n";
    }
    for (const auto& e : cfg.edges)
    {
        os << "  b" << e.from << " -> b" << e.to;
        switch (e.kind)
        {
        case EdgeKind::BranchTrue:
            os << " [label=\"T\"]";
            break;
        case EdgeKind::BranchFalse:
            os << " [label=\"F\"]";
            break;
        default:
            break;
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_edge_list(const Cfg& cfg)
{
    std::ostringstream os;
    for (const auto& e : cfg.edges)
        os << e.from << " " << e.to << "\n";
    return os.str();
}
}  // namespace skanf
