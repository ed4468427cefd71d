// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/assembler.hpp>
#include <skanf/deobfuscator.hpp>
#include <skanf/interpreter.hpp>

#include <doctest.h>

using namespace skanf;

namespace
{
/// calldata[0] = branch condition, calldata[1] = jump destination; both
/// reach a JUMPI whose target the static analysis cannot resolve.
Program dispatch_fixture()
{
    Assembler a;
    a.push(1).op(Op::CALLDATALOAD).push(0xf8).op(Op::SHR);  // dest = calldata[1]
    a.push(0).op(Op::CALLDATALOAD).push(0xf8).op(Op::SHR);  // cond = calldata[0]
    a.op(Op::SWAP1).op(Op::JUMPI);
    a.push(0xaa).push(0).op(Op::SSTORE).op(Op::STOP);
    a.jumpdest_at(0x30).push(0xbb).push(0).op(Op::SSTORE).op(Op::STOP);
    a.jumpdest_at(0x40).push(0xcc).push(0).op(Op::SSTORE).op(Op::STOP);
    return disassemble(a.take());
}

const Address kVictim = Address::from_hex("0xb07000000000000000000000000000000000b07b");
const Address kSender = Address::from_hex("0xa77acc0000000000000000000000000000000001");

struct RunPair
{
    ExecResult original;
    ExecResult instrumented;
};

RunPair run_both(const Program& program, const InstrumentedProgram& ip, const bytes& calldata,
    WorldState& world_a, WorldState& world_b)
{
    world_a.get_or_create(kVictim).code = serialize(program);
    world_b.get_or_create(kVictim).code = serialize(program);
    world_a.get_or_create(kSender).balance = 1'000'000'000;
    world_b.get_or_create(kSender).balance = 1'000'000'000;

    Tx tx{.from = kSender, .to = kVictim, .value = 0, .calldata = calldata};
    RunPair out;
    out.original = execute_transaction(world_a, tx);
    const auto view = ip.view();
    ExecOptions opts;
    opts.root_code = &view;
    out.instrumented = execute_transaction(world_b, tx, opts);
    return out;
}

/// Original trace without the rewritten jump pcs; finite pcs only.
std::vector<TraceEntry> filter_original(
    const ExecResult& r, const InstrumentedProgram& ip)
{
    std::vector<TraceEntry> out;
    for (const auto& t : r.trace)
        if (!ip.rewrites.contains(t.pc))
            out.push_back(t);
    return out;
}

/// Instrumented trace restricted to pcs inside the deployable code region.
std::vector<TraceEntry> filter_instrumented(const ExecResult& r)
{
    std::vector<TraceEntry> out;
    for (const auto& t : r.trace)
        if (t.pc < 0x6000)
            out.push_back(t);
    return out;
}

void check_equivalent(const RunPair& pair, const InstrumentedProgram& ip, const WorldState& wa,
    const WorldState& wb)
{
    CHECK(pair.original.status == pair.instrumented.status);
    CHECK(pair.original.return_data == pair.instrumented.return_data);
    CHECK(pair.original.logs == pair.instrumented.logs);
    CHECK(wa == wb);

    const auto lhs = filter_original(pair.original, ip);
    const auto rhs = filter_instrumented(pair.instrumented);
    REQUIRE(lhs.size() == rhs.size());
    for (size_t i = 0; i < lhs.size(); ++i)
    {
        CHECK(lhs[i].pc == rhs[i].pc);
        CHECK(lhs[i].opcode == rhs[i].opcode);
        CHECK(lhs[i].stack_height == rhs[i].stack_height);
    }
}
}  // namespace

TEST_CASE("branch table geometry for two destinations")
{
    const auto table = build_branch_table({0x0a00, 0x0b00});
    CHECK(BranchTable::base_pc == 0xe000);
    CHECK(table.entry_stride == 9);
    CHECK(table.gadget_stride == 7);
    CHECK(table.gadget_base == 0xf000);
    REQUIRE(table.entries.size() == 2);

    CHECK(table.entries[0].dest == 0x0a00);
    CHECK(table.entries[0].entry_pc == 0xe001);
    CHECK(table.entries[0].gadget_pc == 0xf000);
    CHECK(table.entries[1].dest == 0x0b00);
    CHECK(table.entries[1].entry_pc == 0xe00a);
    CHECK(table.entries[1].gadget_pc == 0xf007);

    CHECK(table.entry_for(0x0a00) == 0);
    CHECK(table.entry_for(0x0b00) == 1);
    CHECK(!table.entry_for(0x0a01));
}

TEST_CASE("injected stream matches the documented layout")
{
    // Minimal indirectly-jumping program so instrument() has work to do.
    Assembler a;
    a.push(0).op(Op::CALLDATALOAD).op(Op::JUMP);
    a.jumpdest_at(0x0a00).op(Op::STOP);
    a.jumpdest_at(0x0b00).op(Op::STOP);
    const auto p = disassemble(a.take());
    const auto ip = deobfuscate(p);
    REQUIRE(ip.obfuscated);

    const auto at = [&](uint32_t pc) -> const Instruction& {
        for (const auto& instr : ip.injected)
            if (instr.pc == std::optional<uint32_t>{pc})
                return instr;
        static const Instruction missing{};
        FAIL("no injected instruction at pc ", pc);
        return missing;
    };

    CHECK(at(0xe000).op() == Op::JUMPDEST);
    CHECK(at(0xe001).op() == Op::DUP1);
    CHECK(at(0xe002).op() == Op::PUSH2);
    CHECK(at(0xe005).op() == Op::EQ);  // first comparison lands at 0xe005
    CHECK(at(0xe006).op() == Op::PUSH2);
    CHECK(at(0xe009).op() == Op::JUMPI);
    CHECK(at(0xe00a).op() == Op::DUP1);  // second entry starts one stride later

    // Fallthrough after the last entry faults like a native bad jump.
    const uint32_t tail = 0xe001 + 9 * static_cast<uint32_t>(ip.table.entries.size());
    CHECK(at(tail).op() == Op::INVALID);

    // Gadget: JUMPDEST; POP; PUSH2 dest; JUMP spanning 0xf000..0xf005.
    CHECK(at(0xf000).op() == Op::JUMPDEST);
    CHECK(at(0xf001).op() == Op::POP);
    CHECK(at(0xf002).op() == Op::PUSH2);
    CHECK(at(0xf002).push_value() == ip.table.entries[0].dest);
    CHECK(at(0xf005).op() == Op::JUMP);
    CHECK(at(0xf007).op() == Op::JUMPDEST);
}

TEST_CASE("every jumpdest of the contract gets a table entry, ascending")
{
    Assembler a;
    a.push(0).op(Op::CALLDATALOAD).op(Op::JUMP);
    for (uint32_t i = 0; i < 40; ++i)
        a.op(Op::JUMPDEST).op(Op::STOP);
    const auto p = disassemble(a.take());
    const auto ip = deobfuscate(p);
    REQUIRE(ip.table.entries.size() == p.jumpdests.size());
    uint32_t prev = 0;
    size_t i = 0;
    for (const auto dest : p.jumpdests)
    {
        CHECK(ip.table.entries[i].dest == dest);
        CHECK(dest >= prev);
        prev = dest;
        ++i;
    }
}

TEST_CASE("gadget region realigns and widens as the table grows")
{
    std::set<uint32_t> dests;

    SUBCASE("454 destinations still fit the compact encoding")
    {
        for (uint32_t i = 0; i < 454; ++i)
            dests.insert(2 * i);
        const auto table = build_branch_table(dests);
        CHECK(table.entry_stride == 9);
        CHECK(table.gadget_base == 0xf000);
        CHECK(table.gadget_base + table.gadget_stride * 453 <= 0xffff);
    }

    SUBCASE("455 destinations push gadgets past 0xffff")
    {
        for (uint32_t i = 0; i < 455; ++i)
            dests.insert(2 * i);
        const auto table = build_branch_table(dests);
        CHECK(table.entry_stride == 10);  // PUSH3 gadget operands
        CHECK(table.gadget_base == 0x10000);
    }

    SUBCASE("1200 destinations")
    {
        for (uint32_t i = 0; i < 1200; ++i)
            dests.insert(2 * i);
        const auto table = build_branch_table(dests);
        CHECK(table.entry_stride == 10);
        CHECK(table.gadget_base == 0x11000);
        // The entry region never bleeds into the gadget region.
        const uint32_t table_end = 0xe000 + 1 + table.entry_stride * 1200 + 1;
        CHECK(table_end <= table.gadget_base);
    }

    SUBCASE("empty set is rejected")
    {
        CHECK_THROWS_AS(build_branch_table({}), std::invalid_argument);
    }
}

TEST_CASE("rewrite fragments")
{
    Assembler a;
    a.push(0).op(Op::CALLDATALOAD).op(Op::JUMP);
    a.op(Op::JUMPDEST).op(Op::STOP);
    const auto p = disassemble(a.take());
    const auto table = build_branch_table(p.jumpdests);

    SUBCASE("JUMP becomes PUSH2 table; JUMP")
    {
        const auto frag = rewrite_jump(p, 3, table);
        CHECK(frag.kind == RewriteKind::Jump);
        REQUIRE(frag.replacement.size() == 2);
        CHECK(frag.replacement[0].op() == Op::PUSH2);
        CHECK(frag.replacement[0].push_value() == 0xe000);
        CHECK(frag.replacement[1].op() == Op::JUMP);
        for (const auto& instr : frag.replacement)
            CHECK(!instr.pc);  // splices carry no pc
    }

    SUBCASE("a direct jump pc is rejected")
    {
        CHECK_THROWS_AS(rewrite_jump(p, 0, table), std::invalid_argument);
        CHECK_THROWS_AS(rewrite_jump(p, 4, table), std::invalid_argument);
    }

    SUBCASE("JUMPI becomes SWAP1; PUSH2 table; JUMPI; POP")
    {
        Assembler b;
        b.push(0).op(Op::CALLDATALOAD).op(Op::CALLVALUE).op(Op::SWAP1).op(Op::JUMPI).op(Op::STOP);
        b.op(Op::JUMPDEST).op(Op::STOP);
        const auto q = disassemble(b.take());
        const auto frag = rewrite_jump(q, 5, build_branch_table(q.jumpdests));
        CHECK(frag.kind == RewriteKind::Jumpi);
        REQUIRE(frag.replacement.size() == 4);
        CHECK(frag.replacement[0].op() == Op::SWAP1);
        CHECK(frag.replacement[1].op() == Op::PUSH2);
        CHECK(frag.replacement[2].op() == Op::JUMPI);
        CHECK(frag.replacement[3].op() == Op::POP);
    }
}

TEST_CASE("a program without indirect jumps comes back unchanged")
{
    const auto p = disassemble(from_hex("61000556fe5b00"));
    const auto ip = deobfuscate(p);
    CHECK(!ip.obfuscated);
    CHECK(ip.rewrites.empty());
    CHECK(ip.injected.empty());
    const auto view = ip.view();
    CHECK(view.stream.size() == p.instructions.size());
    CHECK(view.raw == p.code);
}

TEST_CASE("instrumentation leaves the original bytes untouched")
{
    const auto p = dispatch_fixture();
    const auto before = p.code;
    const auto ip = deobfuscate(p);
    REQUIRE(ip.obfuscated);
    CHECK(ip.original.code == before);
    CHECK(serialize(ip.original) == before);
    CHECK(ip.view().raw == before);
}

TEST_CASE("the instrumented view resolves fully and reaches everything")
{
    const auto p = dispatch_fixture();
    const auto ip = deobfuscate(p);
    const auto view = ip.view();

    // Running the identification pass on the rewritten stream finds nothing
    // left to rewrite.
    const auto cfg = build_cfg(view);
    CHECK(identify_indirect_jumps(view, cfg).empty());

    // Every block, padding included, is reachable through the table.
    CHECK(code_coverage(cfg) == 1.0);

    // The table head and each gadget head are valid jump targets.
    CHECK(view.jumpdests.contains(0xe000));
    for (const auto& e : ip.table.entries)
        CHECK(view.jumpdests.contains(e.gadget_pc));
}

TEST_CASE("original and instrumented programs behave identically")
{
    const auto p = dispatch_fixture();
    const auto ip = deobfuscate(p);

    // Exercises one input: equal status, state, logs and (filtered) traces.
    const auto roundtrip = [&](uint8_t cond, uint8_t dest) {
        WorldState wa, wb;
        const auto pair = run_both(p, ip, bytes{cond, dest}, wa, wb);
        check_equivalent(pair, ip, wa, wb);
        Word slot0;
        if (const auto* acct = wa.find(kVictim); acct && acct->storage.contains(0))
            slot0 = acct->storage.at(0);
        return std::pair{pair.original.status, slot0};
    };

    CHECK(roundtrip(0, 0x30) == std::pair{Status::Success, Word{0xaa}});
    CHECK(roundtrip(1, 0x30) == std::pair{Status::Success, Word{0xbb}});
    CHECK(roundtrip(7, 0x40) == std::pair{Status::Success, Word{0xcc}});
    // A destination that is not a jumpdest faults identically: the native
    // jump validation on one side, the table's INVALID tail on the other.
    CHECK(roundtrip(1, 0x31).first == Status::Fault);
    CHECK(roundtrip(1, 0x00).first == Status::Fault);
}

TEST_CASE("wide tables route through PUSH3 gadgets at runtime")
{
    // 455 destinations force the gadget region above 0xffff.
    Assembler a;
    a.push(0).op(Op::CALLDATALOAD).push(0xf0).op(Op::SHR);  // idx = calldata[0..1]
    a.push(7).op(Op::MUL).push_label("first").op(Op::ADD).op(Op::JUMP);
    a.label("first");
    for (uint32_t i = 0; i < 455; ++i)
    {
        // JUMPDEST; PUSH1 i&0xff; PUSH1 0; SSTORE; STOP -> 7 bytes each
        a.op(Op::JUMPDEST).push(i & 0xff, 1).push(0, 1).op(Op::SSTORE).op(Op::STOP);
    }
    const auto p = disassemble(a.take());
    const auto ip = deobfuscate(p);
    REQUIRE(ip.obfuscated);
    REQUIRE(ip.table.entry_stride == 10);

    WorldState wa, wb;
    const auto pair = run_both(p, ip, bytes{0x01, 0xc6}, wa, wb);  // idx 454, last entry
    check_equivalent(pair, ip, wa, wb);
    CHECK(pair.original.status == Status::Success);
    CHECK(wa.find(kVictim)->storage.at(0) == Word{454 & 0xff});
}

TEST_CASE("annotated listing marks spliced instructions")
{
    const auto ip = deobfuscate(dispatch_fixture());
    const auto listing = annotated_listing(ip);
    CHECK(listing.find("; inserted") != std::string::npos);
    CHECK(listing.find("PUSH2 0xe000") != std::string::npos);
    CHECK(listing.find("0xe000  JUMPDEST") != std::string::npos);
}
