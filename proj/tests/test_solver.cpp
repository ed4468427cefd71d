// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/solver.hpp>

#include <doctest.h>

using namespace skanf;

namespace
{
Assignment adversary_env()
{
    Assignment env;
    env.caller = Address::from_hex("0xa77acc0000000000000000000000000000000001");
    env.origin = env.caller;
    env.block_number = 20'000'000;
    return env;
}

SymExprPtr cd(uint32_t i)
{
    return make_calldata_byte(i);
}

SymExprPtr eq(SymExprPtr a, SymExprPtr b)
{
    return make_op(SymOp::Eq, {std::move(a), std::move(b)});
}
}  // namespace

TEST_CASE("no constraints is trivially satisfiable")
{
    const Solver solver{1};
    const auto r = solver.solve({}, {}, adversary_env());
    CHECK(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.empty());
    CHECK(r.model.caller == adversary_env().caller);
}

TEST_CASE("a single byte equation pins the byte")
{
    const Solver solver{1};
    const auto r = solver.solve({eq(cd(0), make_const(0x0a))}, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(0) == 0x0a);
}

TEST_CASE("contradicting equations are unsat")
{
    const Solver solver{1};
    const std::vector<SymExprPtr> cs{eq(cd(0), make_const(5)), eq(cd(0), make_const(6))};
    CHECK(solver.solve(cs, {}, adversary_env()).status == SolveStatus::Unsat);
    CHECK(Solver::definitely_unsat(cs, {}, adversary_env()));
}

TEST_CASE("the selector equation decomposes into four byte pins")
{
    // shr(224, calldataload(0)) == 0xa9059cbb
    const auto word = make_calldata_word(0, 0x200);
    const auto sel = make_op(SymOp::Shr, {make_const(0xe0), word});
    const Solver solver{1};
    const auto r = solver.solve({eq(sel, make_const(0xa9059cbb))}, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(0) == 0xa9);
    CHECK(r.model.calldata.at(1) == 0x05);
    CHECK(r.model.calldata.at(2) == 0x9c);
    CHECK(r.model.calldata.at(3) == 0xbb);
}

TEST_CASE("iszero of a loaded word zeroes all of its bytes")
{
    const Solver solver{1};
    const auto r = solver.solve(
        {make_op(SymOp::Iszero, {make_calldata_word(0, 4)})}, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    for (uint32_t i = 0; i < 4; ++i)
        CHECK(r.model.calldata.at(i) == 0);
}

TEST_CASE("full word equality pins all 32 bytes")
{
    const Word target = (Word{0xdead} << 240) | 0xbeef;
    const Solver solver{1};
    const auto r =
        solver.solve({eq(make_calldata_word(0x10, 0x200), make_const(target))}, {},
            adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(0x10) == 0xde);
    CHECK(r.model.calldata.at(0x11) == 0xad);
    CHECK(r.model.calldata.at(0x2e) == 0xbe);
    CHECK(r.model.calldata.at(0x2f) == 0xef);
    CHECK(r.model.calldata.at(0x20) == 0x00);
}

TEST_CASE("opaque arithmetic falls back to enumeration")
{
    // 3 * cd[0] == 45 has the unique byte solution 15.
    const auto prod = make_op(SymOp::Mul, {cd(0), make_const(3)});
    const Solver solver{1};
    const auto r = solver.solve({eq(prod, make_const(45))}, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(0) == 15);
}

TEST_CASE("two free bytes are searched exhaustively")
{
    // cd[0] + cd[1] == 0x1fe forces both to 0xff.
    const auto sum = make_op(SymOp::Add, {cd(0), cd(1)});
    const Solver solver{1};
    const auto r = solver.solve({eq(sum, make_const(0x1fe))}, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(0) == 0xff);
    CHECK(r.model.calldata.at(1) == 0xff);
}

TEST_CASE("interval bounds squeeze a byte to one value")
{
    const std::vector<SymExprPtr> cs{
        make_op(SymOp::Gt, {cd(0), make_const(0xf0)}),
        make_op(SymOp::Lt, {cd(0), make_const(0xf2)}),
    };
    const Solver solver{1};
    const auto r = solver.solve(cs, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(0) == 0xf1);
}

TEST_CASE("reversed comparison operands bound from the other side")
{
    const Solver solver{1};
    const auto r =
        solver.solve({make_op(SymOp::Lt, {make_const(0xfe), cd(7)})}, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(7) == 0xff);

    CHECK(Solver::definitely_unsat(
        {make_op(SymOp::Gt, {cd(7), make_const(0xff)})}, {}, adversary_env()));
}

TEST_CASE("a bare branch condition gets a nonzero witness")
{
    const Solver solver{1};
    const auto r = solver.solve({cd(9)}, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(9) != 0);
}

TEST_CASE("equality chains propagate through aliases")
{
    const std::vector<SymExprPtr> cs{
        eq(cd(0), cd(1)),
        eq(cd(1), cd(2)),
        eq(cd(2), make_const(0x42)),
    };
    const Solver solver{1};
    const auto r = solver.solve(cs, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(0) == 0x42);
    CHECK(r.model.calldata.at(1) == 0x42);
    CHECK(r.model.calldata.at(2) == 0x42);
}

TEST_CASE("input pins are honored and flow through aliases")
{
    const Solver solver{1};
    const auto r = solver.solve({eq(cd(0), cd(1))}, {{0, 7}}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(0) == 7);
    CHECK(r.model.calldata.at(1) == 7);

    CHECK(solver.solve({eq(cd(0), make_const(5))}, {{0, 6}}, adversary_env()).status ==
          SolveStatus::Unsat);
}

TEST_CASE("environment gates fold to constants")
{
    const auto env = adversary_env();
    const auto gate = eq(make_env(EnvVar::Origin), make_const(env.origin.to_word()));
    const Solver solver{1};
    CHECK(solver.solve({gate}, {}, env).status == SolveStatus::Sat);

    Assignment other = env;
    other.origin = Address::from_hex("0xdeadbeefdeadbeefdeadbeefdeadbeefdeadbeef");
    CHECK(solver.solve({gate}, {}, other).status == SolveStatus::Unsat);
    CHECK(Solver::definitely_unsat({gate}, {}, other));
}

TEST_CASE("exhausting a complete small search space proves unsat")
{
    // iszero(cd[0] == cd[0]) through two distinct nodes: propagation cannot
    // see it, but the one-byte enumeration covers the whole domain.
    const auto diseq = make_op(SymOp::Iszero, {eq(cd(0), cd(0))});
    const Solver solver{1};
    CHECK(solver.solve({diseq}, {}, adversary_env()).status == SolveStatus::Unsat);
    // Pruning stays conservative: propagation alone does not call it.
    CHECK(!Solver::definitely_unsat({diseq}, {}, adversary_env()));
}

TEST_CASE("too many free bytes yields unknown")
{
    const auto hash = make_keccak({cd(0), cd(1), cd(2), cd(3), cd(4)});
    const Solver solver{1};
    const auto r = solver.solve({eq(hash, make_const(12345))}, {}, adversary_env());
    CHECK(r.status == SolveStatus::Unknown);
}

TEST_CASE("unresolved fresh variables yield unknown rather than a bogus refutation")
{
    const auto f = make_fresh(0, "sload");
    const Solver solver{1};
    const auto r = solver.solve({eq(f, make_const(5))}, {}, adversary_env());
    CHECK(r.status == SolveStatus::Unknown);
    CHECK(!Solver::definitely_unsat({eq(f, make_const(5))}, {}, adversary_env()));
}

TEST_CASE("three byte problems are found by the seeded heuristic search")
{
    // cd[0..2] spliced into one word must equal 0x0a00c6: the heuristic
    // candidate set contains the harvested constant bytes.
    const auto hi = make_op(SymOp::Shl, {make_const(16), cd(0)});
    const auto mid = make_op(SymOp::Shl, {make_const(8), cd(1)});
    const auto sum = make_op(SymOp::Add, {make_op(SymOp::Add, {hi, mid}), cd(2)});
    const Solver solver{99};
    const auto r = solver.solve({eq(sum, make_const(0x0a00c6))}, {}, adversary_env());
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.model.calldata.at(0) == 0x0a);
    CHECK(r.model.calldata.at(1) == 0x00);
    CHECK(r.model.calldata.at(2) == 0xc6);
}

TEST_CASE("every returned model has been re-verified")
{
    const auto& st = Solver::stats();
    CHECK(st.models_returned == st.models_verified);
    CHECK(st.verification_failures == 0);
    CHECK(st.models_returned > 0);
}
