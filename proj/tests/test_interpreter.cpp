// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/assembler.hpp>
#include <skanf/interpreter.hpp>
#include <skanf/keccak.hpp>

#include <doctest.h>

#include <algorithm>

using namespace skanf;

namespace
{
const Address kAlice = Address::from_hex("0xa11ce00000000000000000000000000000000001");
const Address kBob = Address::from_hex("0xb0b0000000000000000000000000000000000002");
const Address kContract = Address::from_hex("0xc0de000000000000000000000000000000000003");
const Address kToken = Address::from_hex("0xc02aaa39b223fe8d0a0e5c4f27ead9083c756cc2");

WorldState fresh_world()
{
    WorldState w;
    w.block.number = 20'000'000;
    w.block.timestamp = 1'700'000'000;
    w.get_or_create(kAlice).balance = Word{1} << 64;
    w.get_or_create(kBob).balance = 1'000;
    return w;
}

Tx tx_to(const Address& to, bytes calldata = {}, Word value = 0)
{
    return Tx{.from = kAlice, .to = to, .value = value, .calldata = std::move(calldata)};
}

bytes erc20_transfer_calldata(const Address& to, const Word& amount)
{
    bytes data;
    data.reserve(4 + 64);
    for (int i = 3; i >= 0; --i)
        data.push_back(static_cast<uint8_t>(selectors::transfer >> (8 * i)));
    const auto to_w = word_to_bytes(to.to_word());
    data.insert(data.end(), to_w.begin(), to_w.end());
    const auto amt = word_to_bytes(amount);
    data.insert(data.end(), amt.begin(), amt.end());
    return data;
}

bytes abi_call(uint32_t selector, const std::vector<Word>& args)
{
    bytes data;
    for (int i = 3; i >= 0; --i)
        data.push_back(static_cast<uint8_t>(selector >> (8 * i)));
    for (const auto& a : args)
    {
        const auto w = word_to_bytes(a);
        data.insert(data.end(), w.begin(), w.end());
    }
    return data;
}
}  // namespace

TEST_CASE("arithmetic on the stack and RETURN")
{
    // PUSH1 2; PUSH1 1; ADD; PUSH1 0; MSTORE; PUSH1 32; PUSH1 0; RETURN
    Assembler a;
    a.push(2).push(1).op(Op::ADD).push(0).op(Op::MSTORE);
    a.push(32).push(0).op(Op::RETURN);
    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();

    const auto r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(word_from_bytes(r.return_data) == 3);
    CHECK(r.gas_used >= 21'000);
}

TEST_CASE("running off the end of code halts like STOP")
{
    auto w = fresh_world();
    w.get_or_create(kContract).code = from_hex("6001600201");  // no terminator
    const auto r = execute_transaction(w, tx_to(kContract));
    CHECK(r.status == Status::Success);
    CHECK(r.return_data.empty());
}

TEST_CASE("jumps validate the destination")
{
    auto w = fresh_world();

    SUBCASE("jump into a push immediate faults")
    {
        // PUSH1 0x02; JUMP -> pc 2 is inside no instruction boundary issue;
        // 0x02 is the JUMP itself (not a JUMPDEST)
        w.get_or_create(kContract).code = from_hex("600256");
        const auto r = execute_transaction(w, tx_to(kContract));
        CHECK(r.status == Status::Fault);
        CHECK(r.fault.find("jump") != std::string::npos);
    }

    SUBCASE("jump to a jumpdest succeeds")
    {
        w.get_or_create(kContract).code = from_hex("600456005b00");
        const auto r = execute_transaction(w, tx_to(kContract));
        CHECK(r.status == Status::Success);
        CHECK(reached_pc(r, 4));
    }
}

TEST_CASE("plain value transfer to an empty account")
{
    auto w = fresh_world();
    const auto before_alice = w.find(kAlice)->balance;
    const auto r = execute_transaction(w, tx_to(kBob, {}, 250));
    REQUIRE(r.status == Status::Success);
    CHECK(w.find(kBob)->balance == 1'250);
    CHECK(w.find(kAlice)->balance == before_alice - 250);
    CHECK(w.find(kAlice)->nonce == 1);
    REQUIRE(r.calls.size() == 1);
    CHECK(r.calls[0].caller == kAlice);
    CHECK(r.calls[0].callee == kBob);
    CHECK(r.calls[0].value == 250);
}

TEST_CASE("insufficient balance faults and leaves the world untouched")
{
    auto w = fresh_world();
    const auto before = w;
    Tx tx = tx_to(kBob, {}, (Word{1} << 64) + 1);
    const auto r = execute_transaction(w, tx);
    CHECK(r.status == Status::Fault);
    CHECK(w == before);
}

TEST_CASE("mock token honors the four selectors")
{
    auto w = fresh_world();
    w.register_mock_erc20(kToken, "WETH", {{kAlice, Word{22} * 1'000'000}});

    SUBCASE("transfer moves balance and logs a Transfer")
    {
        const auto r =
            execute_transaction(w, tx_to(kToken, erc20_transfer_calldata(kBob, 1'000'000)));
        REQUIRE(r.status == Status::Success);
        CHECK(word_from_bytes(r.return_data) == 1);  // returns true
        CHECK(w.token_balance(kToken, kBob) == 1'000'000);
        CHECK(w.token_balance(kToken, kAlice) == Word{21} * 1'000'000);

        REQUIRE(r.logs.size() == 1);
        const auto& log = r.logs[0];
        CHECK(log.emitter == kToken);
        REQUIRE(log.topics.size() == 3);
        CHECK(log.topics[0] == transfer_event_topic());
        CHECK(log.topics[1] == kAlice.to_word());
        CHECK(log.topics[2] == kBob.to_word());
        CHECK(word_from_bytes(log.data) == 1'000'000);
    }

    SUBCASE("transfer beyond the balance reverts without a log")
    {
        const auto r = execute_transaction(
            w, tx_to(kToken, erc20_transfer_calldata(kBob, Word{23} * 1'000'000)));
        CHECK(r.status == Status::Revert);
        CHECK(r.logs.empty());
        CHECK(w.token_balance(kToken, kAlice) == Word{22} * 1'000'000);
    }

    SUBCASE("approve then transferFrom respects the allowance")
    {
        auto r = execute_transaction(
            w, tx_to(kToken, abi_call(selectors::approve, {kBob.to_word(), 500})));
        REQUIRE(r.status == Status::Success);
        REQUIRE(r.logs.size() == 1);
        CHECK(r.logs[0].topics[0] == approval_event_topic());

        // Bob spends Alice's approval.
        Tx spend = tx_to(kToken,
            abi_call(selectors::transfer_from, {kAlice.to_word(), kBob.to_word(), 300}));
        spend.from = kBob;
        r = execute_transaction(w, spend);
        REQUIRE(r.status == Status::Success);
        CHECK(w.token_balance(kToken, kBob) == 300);

        // Exceeding the remaining allowance reverts.
        spend.calldata =
            abi_call(selectors::transfer_from, {kAlice.to_word(), kBob.to_word(), 201});
        r = execute_transaction(w, spend);
        CHECK(r.status == Status::Revert);
    }

    SUBCASE("balanceOf returns a 32-byte word")
    {
        const auto r = execute_transaction(
            w, tx_to(kToken, abi_call(selectors::balance_of, {kAlice.to_word()})));
        REQUIRE(r.status == Status::Success);
        REQUIRE(r.return_data.size() == 32);
        CHECK(word_from_bytes(r.return_data) == Word{22} * 1'000'000);
    }

    SUBCASE("short calldata reverts")
    {
        auto data = erc20_transfer_calldata(kBob, 1);
        data.resize(40);
        const auto r = execute_transaction(w, tx_to(kToken, data));
        CHECK(r.status == Status::Revert);
    }

    SUBCASE("unknown selector reverts")
    {
        const auto r = execute_transaction(w, tx_to(kToken, abi_call(0xdeadbeef, {0})));
        CHECK(r.status == Status::Revert);
    }
}

TEST_CASE("token conservation across a random-ish call sequence")
{
    auto w = fresh_world();
    w.register_mock_erc20(kToken, "WETH", {{kAlice, 1'000}, {kBob, 777}});
    const Word total = 1'777;

    uint64_t seed = 0x5eed;
    for (int i = 0; i < 50; ++i)
    {
        seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
        const Word amount = (seed >> 33) % 400;
        Tx tx = tx_to(kToken, erc20_transfer_calldata((i % 2) ? kAlice : kBob, amount));
        tx.from = (i % 2) ? kBob : kAlice;
        execute_transaction(w, tx);  // success or revert, both acceptable
        CHECK(w.token_balance(kToken, kAlice) + w.token_balance(kToken, kBob) == total);
    }
}

TEST_CASE("CALL from bytecode into the token")
{
    // The contract forwards a transfer(bob, 42) to the token and returns the
    // call's success flag.
    Assembler a;
    const auto calldata = erc20_transfer_calldata(kBob, 42);
    // Store calldata into memory at 0.
    for (size_t i = 0; i < calldata.size(); i += 32)
    {
        bytes chunk(calldata.begin() + static_cast<long>(i),
            calldata.begin() + static_cast<long>(std::min(i + 32, calldata.size())));
        chunk.resize(32, 0);
        a.push(word_from_bytes(chunk), 32).push(i, 2).op(Op::MSTORE);
    }
    a.push(0).push(0).push(calldata.size(), 1).push(0);  // retLen retOff inLen inOff
    a.push(0);                                           // value
    a.push(kToken);
    a.op(Op::GAS).op(Op::CALL);
    a.push(0).op(Op::MSTORE).push(32).push(0).op(Op::RETURN);

    auto w = fresh_world();
    w.register_mock_erc20(kToken, "WETH", {{kContract, 100}});
    w.get_or_create(kContract).code = a.take();

    const auto r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(word_from_bytes(r.return_data) == 1);
    CHECK(w.token_balance(kToken, kBob) == 42);

    // The internal call is listed after the top-level one, and the CALL was
    // observed with its argument bytes.
    REQUIRE(r.calls.size() == 2);
    CHECK(r.calls[1].caller == kContract);
    CHECK(r.calls[1].callee == kToken);
    REQUIRE(r.observations.size() == 1);
    CHECK(r.observations[0].target == kToken);
    CHECK(r.observations[0].args == calldata);

    // The Transfer event names the contract, not the EOA, as sender.
    REQUIRE(r.logs.size() == 1);
    CHECK(r.logs[0].topics[1] == kContract.to_word());
}

TEST_CASE("failed inner calls are observed but not merged")
{
    // Contract calls the token with transfer(bob, 10'000) (beyond balance),
    // ignores the failure and STOPs.
    Assembler a;
    const auto calldata = erc20_transfer_calldata(kBob, 10'000);
    for (size_t i = 0; i < calldata.size(); i += 32)
    {
        bytes chunk(calldata.begin() + static_cast<long>(i),
            calldata.begin() + static_cast<long>(std::min(i + 32, calldata.size())));
        chunk.resize(32, 0);
        a.push(word_from_bytes(chunk), 32).push(i, 2).op(Op::MSTORE);
    }
    a.push(0).push(0).push(calldata.size(), 1).push(0).push(0);
    a.push(kToken).op(Op::GAS).op(Op::CALL).op(Op::POP).op(Op::STOP);

    auto w = fresh_world();
    w.register_mock_erc20(kToken, "WETH", {{kContract, 100}});
    w.get_or_create(kContract).code = a.take();

    const auto r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(r.logs.empty());                   // reverted callee's logs dropped
    CHECK(r.calls.size() == 1);              // only the top-level call merged
    REQUIRE(r.observations.size() == 1);     // ...but the attempt was seen
    CHECK(w.token_balance(kToken, kBob) == 0);
}

TEST_CASE("CALLER and ORIGIN are distinct one level down")
{
    // Outer contract calls inner; inner stores CALLER at slot 0 and ORIGIN
    // at slot 1.
    const Address inner = Address::from_hex("0x1111110000000000000000000000000000000001");
    Assembler in;
    in.op(Op::CALLER).push(0).op(Op::SSTORE);
    in.op(Op::ORIGIN).push(1).op(Op::SSTORE).op(Op::STOP);

    Assembler out;
    out.push(0).push(0).push(0).push(0).push(0);
    out.push(inner).op(Op::GAS).op(Op::CALL).op(Op::POP).op(Op::STOP);

    auto w = fresh_world();
    w.get_or_create(inner).code = in.take();
    w.get_or_create(kContract).code = out.take();

    const auto r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(Address::from_word(w.find(inner)->storage.at(0)) == kContract);
    CHECK(Address::from_word(w.find(inner)->storage.at(1)) == kAlice);
}

TEST_CASE("snapshot and rollback restore deep state")
{
    auto w = fresh_world();
    w.register_mock_erc20(kToken, "WETH", {{kAlice, 5}});
    const auto before = w;

    w.snapshot();
    w.get_or_create(kBob).balance = 99;
    w.get_or_create(kContract).storage[7] = 8;
    w.accounts[kToken].token->balances[kBob] = 123;
    CHECK(!(w == before));
    w.rollback();
    CHECK(w == before);

    SUBCASE("commit keeps the changes")
    {
        w.snapshot();
        w.get_or_create(kBob).balance = 42;
        w.commit();
        CHECK(w.find(kBob)->balance == 42);
    }

    SUBCASE("snapshots nest LIFO")
    {
        w.snapshot();
        w.get_or_create(kBob).balance = 1;
        w.snapshot();
        w.get_or_create(kBob).balance = 2;
        w.rollback();
        CHECK(w.find(kBob)->balance == 1);
        w.rollback();
        CHECK(w == before);
    }
}

TEST_CASE("a reverting frame unwinds its state changes")
{
    // SSTORE then REVERT: storage write must not stick, nonce still bumps.
    Assembler a;
    a.push(1).push(0).op(Op::SSTORE).push(0).push(0).op(Op::REVERT);
    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();
    const auto nonce_before = w.find(kAlice)->nonce;

    const auto r = execute_transaction(w, tx_to(kContract));
    CHECK(r.status == Status::Revert);
    CHECK(!w.find(kContract)->storage.contains(0));
    CHECK(w.find(kAlice)->nonce == nonce_before + 1);
    CHECK(reached_pc(r, 4));  // the SSTORE really ran
}

TEST_CASE("a fault erases every effect of the transaction")
{
    Assembler a;
    a.push(1).push(0).op(Op::SSTORE).op(Op::INVALID);
    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();
    const auto before = w;

    const auto r = execute_transaction(w, tx_to(kContract, {}, 5));
    CHECK(r.status == Status::Fault);
    CHECK(w == before);  // value transfer and nonce included
}

TEST_CASE("inner revert is isolated from the outer frame")
{
    // Outer stores 1, calls a reverting inner, stores 2; both outer writes
    // survive, the inner one does not.
    const Address inner = Address::from_hex("0x1111110000000000000000000000000000000002");
    Assembler in;
    in.push(9).push(0).op(Op::SSTORE).push(0).push(0).op(Op::REVERT);

    Assembler out;
    out.push(1).push(0).op(Op::SSTORE);
    out.push(0).push(0).push(0).push(0).push(0);
    out.push(inner).op(Op::GAS).op(Op::CALL).op(Op::POP);
    out.push(2).push(1).op(Op::SSTORE).op(Op::STOP);

    auto w = fresh_world();
    w.get_or_create(inner).code = in.take();
    w.get_or_create(kContract).code = out.take();

    const auto r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(w.find(kContract)->storage.at(0) == 1);
    CHECK(w.find(kContract)->storage.at(1) == 2);
    CHECK(!w.find(inner)->storage.contains(0));
}

TEST_CASE("static calls block state mutation but allow balanceOf")
{
    // Contract STATICCALLs the token; the transfer attempt fails (pushes 0),
    // the balanceOf attempt succeeds.
    auto build = [](uint32_t selector, const std::vector<Word>& args) {
        Assembler a;
        const auto calldata = abi_call(selector, args);
        for (size_t i = 0; i < calldata.size(); i += 32)
        {
            bytes chunk(calldata.begin() + static_cast<long>(i),
                calldata.begin() + static_cast<long>(std::min(i + 32, calldata.size())));
            chunk.resize(32, 0);
            a.push(word_from_bytes(chunk), 32).push(i, 2).op(Op::MSTORE);
        }
        a.push(32).push(0).push(calldata.size(), 1).push(0);
        a.push(kToken).op(Op::GAS).op(Op::STATICCALL);
        a.push(0).op(Op::MSTORE).push(32).push(0).op(Op::RETURN);
        return a.take();
    };

    auto w = fresh_world();
    w.register_mock_erc20(kToken, "WETH", {{kAlice, 5}, {kContract, 7}});

    w.get_or_create(kContract).code = build(selectors::transfer, {kBob.to_word(), Word{1}});
    auto r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(word_from_bytes(r.return_data) == 0);  // inner call failed
    CHECK(w.token_balance(kToken, kBob) == 0);

    w.accounts[kContract].code = build(selectors::balance_of, {kAlice.to_word()});
    r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(word_from_bytes(r.return_data) == 1);  // inner call succeeded
}

TEST_CASE("value transfer inside STATICCALL faults the inner frame")
{
    Assembler a;
    a.push(0).push(0).push(0).push(0).push(1);  // value = 1
    a.push(kBob).op(Op::GAS).op(Op::CALL);
    a.push(0).op(Op::MSTORE).push(32).push(0).op(Op::RETURN);
    const Address forwarder = Address::from_hex("0x2222220000000000000000000000000000000001");

    Assembler outer;
    outer.push(32).push(0).push(0).push(0);
    outer.push(forwarder).op(Op::GAS).op(Op::STATICCALL);
    outer.push(0).op(Op::MSTORE).push(32).push(0).op(Op::RETURN);

    auto w = fresh_world();
    w.get_or_create(forwarder).balance = 10;
    w.accounts[forwarder].code = a.take();
    w.get_or_create(kContract).code = outer.take();

    const auto r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(word_from_bytes(r.return_data) == 0);  // static frame faulted
    CHECK(w.find(kBob)->balance == 1'000);
}

TEST_CASE("identity precompile copies input to output")
{
    Assembler a;
    a.push(0xdeadbeef, 4).push(0).op(Op::MSTORE);
    a.push(32).push(32).push(32).push(0).push(0);  // retLen retOff inLen inOff value
    a.push(Word{4}, 20).op(Op::GAS).op(Op::CALL).op(Op::POP);
    a.push(32).push(32).op(Op::RETURN);

    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();
    const auto r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(word_from_bytes(r.return_data) == 0xdeadbeef);
}

TEST_CASE("call depth is capped")
{
    // The contract calls itself forever; execution terminates because the
    // 64th nested call returns 0 instead of recursing.
    Assembler a;
    a.push(0).push(0).push(0).push(0).push(0);
    a.op(Op::ADDRESS).op(Op::GAS).op(Op::CALL).op(Op::POP).op(Op::STOP);
    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();

    ExecOptions opts;
    opts.record_trace = false;
    const auto r = execute_transaction(w, tx_to(kContract), opts);
    CHECK(r.status == Status::Success);
    int max_depth = 0;
    for (const auto& o : r.observations)
        max_depth = std::max(max_depth, o.depth);
    CHECK(max_depth == 64);
}

TEST_CASE("out of gas faults atomically")
{
    Assembler a;
    a.push(1).push(0).op(Op::SSTORE).op(Op::STOP);  // SSTORE costs 5000
    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();
    const auto before = w;

    Tx tx = tx_to(kContract);
    tx.gas = 21'000 + 3 + 3 + 100;  // not enough for the store
    const auto r = execute_transaction(w, tx);
    CHECK(r.status == Status::Fault);
    CHECK(r.fault.find("gas") != std::string::npos);
    CHECK(w == before);
    CHECK(r.gas_used == tx.gas);  // a faulting frame consumes what it had
}

TEST_CASE("delegatecall is reported as unsupported")
{
    Assembler a;
    a.push(0).push(0).push(0).push(0);
    a.push(kBob).op(Op::GAS).op(Op::DELEGATECALL).op(Op::STOP);
    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();
    const auto r = execute_transaction(w, tx_to(kContract));
    CHECK(r.status == Status::Fault);
    CHECK(r.fault == "unsupported: DELEGATECALL");
}

TEST_CASE("selfdestruct halts successfully without destroying state")
{
    Assembler a;
    a.push(1).push(0).op(Op::SSTORE);
    a.push(kBob).op(Op::SELFDESTRUCT);
    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();
    const auto r = execute_transaction(w, tx_to(kContract));
    CHECK(r.status == Status::Success);
    CHECK(w.find(kContract)->storage.at(0) == 1);
    CHECK(!w.find(kContract)->code.empty());
}

TEST_CASE("keccak over memory matches the library digest")
{
    Assembler a;
    a.push(word_from_bytes(bytes{'a', 'b', 'c'}) << (29 * 8), 32);
    a.push(0).op(Op::MSTORE);
    a.push(3).push(0).op(Op::KECCAK256);
    a.push(0).op(Op::MSTORE).push(32).push(0).op(Op::RETURN);
    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();
    const auto r = execute_transaction(w, tx_to(kContract));
    REQUIRE(r.status == Status::Success);
    CHECK(word_from_bytes(r.return_data) == keccak256_word(bytes{'a', 'b', 'c'}));
}

TEST_CASE("environment opcodes reflect the transaction and block")
{
    Assembler a;
    a.op(Op::NUMBER).push(0).op(Op::MSTORE);
    a.op(Op::CALLVALUE).push(32).op(Op::MSTORE);
    a.op(Op::CALLDATASIZE).push(64).op(Op::MSTORE);
    a.push(96).push(0).op(Op::RETURN);

    auto w = fresh_world();
    w.get_or_create(kContract).code = a.take();
    const auto r = execute_transaction(w, tx_to(kContract, from_hex("aabbcc"), 17));
    REQUIRE(r.status == Status::Success);
    REQUIRE(r.return_data.size() == 96);
    CHECK(word_from_bytes(bytes_view{r.return_data.data(), 32}) == 20'000'000);
    CHECK(word_from_bytes(bytes_view{r.return_data.data() + 32, 32}) == 17);
    CHECK(word_from_bytes(bytes_view{r.return_data.data() + 64, 32}) == 3);
}

TEST_CASE("trace dump prints one pc and mnemonic per line")
{
    auto w = fresh_world();
    w.get_or_create(kContract).code = from_hex("6001600101600055600054506000");
    const auto r = execute_transaction(w, tx_to(kContract));
    const auto dump = dump_trace(r);
    CHECK(dump.find("0 PUSH1") == 0);
    CHECK(dump.find("ADD") != std::string::npos);
    CHECK(dump.find("SSTORE") != std::string::npos);

    // Stack heights are recorded before each instruction executes.
    REQUIRE(r.trace.size() >= 3);
    CHECK(r.trace[0].stack_height == 0);
    CHECK(r.trace[1].stack_height == 1);
    CHECK(r.trace[2].stack_height == 2);
}

TEST_CASE("execution is deterministic")
{
    auto run = [] {
        auto w = fresh_world();
        w.register_mock_erc20(kToken, "WETH", {{kAlice, 123'456}});
        w.get_or_create(kContract).code = from_hex("60016000556000546001015000");
        return execute_transaction(w, tx_to(kContract, from_hex("00112233")));
    };
    const auto a = run();
    const auto b = run();
    CHECK(a.status == b.status);
    CHECK(a.gas_used == b.gas_used);
    CHECK(dump_trace(a) == dump_trace(b));
}
