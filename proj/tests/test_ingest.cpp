// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/assembler.hpp>
#include <skanf/ingest.hpp>

#include <doctest.h>

namespace
{
using namespace skanf;

const Address kAlice = Address::from_hex("0xa11ce00000000000000000000000000000000001");
const Address kBob = Address::from_hex("0xb0b0000000000000000000000000000000000002");
const Address kContract = Address::from_hex("0xc0de000000000000000000000000000000000003");
const Address kForwarder = Address::from_hex("0xf02a000000000000000000000000000000000004");
const Address kToken = Address::from_hex("0xc02aaa39b223fe8d0a0e5c4f27ead9083c756cc2");

constexpr uint64_t kBlock = 20'000'000;

/// Code that unconditionally calls token.transfer(bob, 5) and stops.
bytes transfer_code()
{
    Assembler a;
    a.push(Word{0xa9059cbb}).push(0xe0).op(Op::SHL).push(0).op(Op::MSTORE);
    a.push(kBob).push(4).op(Op::MSTORE);
    a.push(5).push(0x24).op(Op::MSTORE);
    a.push(0).push(0).push(0x44).push(0).push(0).push(kToken).op(Op::GAS).op(Op::CALL);
    a.op(Op::POP).op(Op::STOP);
    return a.take();
}

/// Code that forwards a 4-byte message to kContract.
bytes forwarder_code()
{
    Assembler a;
    a.push(Word{0xfeedface}).push(0).op(Op::MSTORE);
    a.push(0).push(0).push(4).push(28).push(0).push(kContract).op(Op::GAS).op(Op::CALL);
    a.op(Op::POP).op(Op::STOP);
    return a.take();
}

WorldState snapshot_world()
{
    WorldState w;
    w.block.number = kBlock;
    w.block.timestamp = 1'700'000'000;
    w.get_or_create(kAlice).balance = Word{1} << 64;
    w.get_or_create(kContract).code = transfer_code();
    w.get_or_create(kForwarder).code = forwarder_code();
    w.register_mock_erc20(kToken, "WETH", {{kContract, 1'000'000}});
    return w;
}

/// Executes the tx once on a copy of `world` to capture its true logs.
std::vector<EventLog> true_logs(const TransactionRecord& rec, const WorldState& world)
{
    auto w = world;
    const auto r = execute_transaction(w, Tx{rec.from, rec.to, rec.value, rec.calldata});
    REQUIRE(r.status == Status::Success);
    return r.logs;
}

TransactionRecord make_record(
    const WorldState& world, Word hash, const Address& to, bytes calldata, Word value = 0)
{
    TransactionRecord rec;
    rec.hash = hash;
    rec.from = kAlice;
    rec.to = to;
    rec.value = value;
    rec.calldata = std::move(calldata);
    rec.block_number = kBlock;
    rec.success = true;
    rec.logs = true_logs(rec, world);
    return rec;
}

std::string fixture_error_of(const std::string& text)
{
    try
    {
        (void)parse_fixture(text);
    }
    catch (const FixtureError& e)
    {
        return e.what();
    }
    return {};
}
}  // namespace

TEST_CASE("empty fixture parses to nothing")
{
    const auto bundle = parse_fixture("{}");
    CHECK(bundle.snapshots.empty());
    CHECK(bundle.transactions.empty());
}

TEST_CASE("fixture serialization is a parse fixpoint")
{
    FixtureBundle bundle;
    bundle.snapshots[kBlock] = snapshot_world();
    auto& c = bundle.snapshots[kBlock].get_or_create(kContract);
    c.storage[Word{1}] = Word{0xbeef};
    c.nonce = 3;
    bundle.transactions.push_back(
        make_record(bundle.snapshots[kBlock], Word{0x11}, kContract, {0xde, 0xad, 0xbe, 0xef}));

    TransactionRecord failed;
    failed.hash = Word{0x22};
    failed.from = kAlice;
    failed.to = kToken;
    failed.value = 0;
    failed.calldata = from_hex("a9059cbb");
    failed.block_number = kBlock;
    failed.success = false;
    failed.internal_calls.push_back({kAlice, kToken, 0, {0xa9}, 0});
    bundle.transactions.push_back(failed);

    const auto text = serialize_fixture(bundle);
    const auto reparsed = parse_fixture(text);
    CHECK(serialize_fixture(reparsed) == text);

    // Structural equality too, not just textual.
    REQUIRE(reparsed.transactions.size() == 2);
    CHECK(reparsed.snapshots.at(kBlock) == bundle.snapshots.at(kBlock));
    CHECK(reparsed.transactions[0].logs == bundle.transactions[0].logs);
    CHECK(reparsed.transactions[1].internal_calls.size() == 1);
}

TEST_CASE("hand-written fixture normalizes to a fixpoint")
{
    const std::string text = R"({
      "snapshots": {"7": {
        "block": {"number": 7},
        "accounts": {
          "0xA11CE00000000000000000000000000000000001": {"balance": "0xDE"},
          "0xc02aaa39b223fe8d0a0e5c4f27ead9083c756cc2":
            {"mockToken": {"balances": {"0xb0b0000000000000000000000000000000000002": "0x64"}}}
        }}},
      "transactions": [{
        "hash": "0x1", "from": "0xa11ce00000000000000000000000000000000001",
        "to": "0xc02aaa39b223fe8d0a0e5c4f27ead9083c756cc2", "value": "0x0",
        "calldata": "0x", "blockNumber": 7, "status": "fail"
      }]
    })";
    const auto once = serialize_fixture(parse_fixture(text));
    const auto twice = serialize_fixture(parse_fixture(once));
    CHECK(once == twice);

    const auto bundle = parse_fixture(text);
    CHECK(bundle.snapshots.at(7).find(kAlice)->balance == 0xde);
    CHECK(bundle.snapshots.at(7).token_balance(kToken, kBob) == 0x64);
    CHECK(!bundle.transactions[0].success);
}

TEST_CASE("fixture schema violations name the offending field")
{
    SUBCASE("transaction referencing a missing snapshot names the block")
    {
        const auto msg = fixture_error_of(R"({"transactions": [{
            "hash": "0x1", "from": "0xa11ce00000000000000000000000000000000001",
            "to": "0xb0b0000000000000000000000000000000000002", "value": "0x0",
            "calldata": "0x", "blockNumber": 99, "status": "success"}]})");
        CHECK(msg.find("no snapshot for block 99") != std::string::npos);
    }

    SUBCASE("missing required field")
    {
        const auto msg = fixture_error_of(
            R"({"snapshots": {"7": {"block": {"number": 7}}},
                "transactions": [{"hash": "0x1", "blockNumber": 7}]})");
        CHECK(msg.find("transactions[0]") != std::string::npos);
        CHECK(msg.find("from") != std::string::npos);
    }

    SUBCASE("bad status literal")
    {
        const auto msg = fixture_error_of(
            R"({"snapshots": {"7": {"block": {"number": 7}}},
                "transactions": [{"hash": "0x1",
                  "from": "0xa11ce00000000000000000000000000000000001",
                  "to": "0xb0b0000000000000000000000000000000000002",
                  "value": "0x0", "calldata": "0x", "blockNumber": 7,
                  "status": "maybe"}]})");
        CHECK(msg.find("status") != std::string::npos);
        CHECK(msg.find("maybe") != std::string::npos);
    }

    SUBCASE("malformed JSON reports the position")
    {
        const auto msg = fixture_error_of("{\"snapshots\": ");
        CHECK(msg.find("fixture JSON") != std::string::npos);
    }

    SUBCASE("non-numeric snapshot key")
    {
        const auto msg = fixture_error_of(R"({"snapshots": {"latest": {"block": {"number": 1}}}})");
        CHECK(msg.find("latest") != std::string::npos);
    }

    SUBCASE("code and mock token are mutually exclusive")
    {
        const auto msg = fixture_error_of(
            R"({"snapshots": {"7": {"block": {"number": 7}, "accounts": {
                "0xc02aaa39b223fe8d0a0e5c4f27ead9083c756cc2":
                  {"codeHex": "0x00", "mockToken": {"balances": {}}}}}}})");
        CHECK(msg.find("mutually exclusive") != std::string::npos);
    }
}

TEST_CASE("snapshot JSON round-trips a world state")
{
    const auto w = snapshot_world();
    const auto text = world_to_json_text(w);
    const auto back = world_from_json_text(text);
    CHECK(back == w);
}

TEST_CASE("replay flags agreement and tampering")
{
    const auto world = snapshot_world();
    auto rec = make_record(world, Word{0xabc}, kContract, {0xde, 0xad, 0xbe, 0xef});

    SUBCASE("consistent record does not diverge")
    {
        const auto ro = replay(rec, world);
        CHECK(!ro.divergent);
        CHECK(ro.result.status == Status::Success);
        REQUIRE(!ro.result.logs.empty());
        CHECK(ro.result.logs[0].topics[0] == transfer_event_topic());
    }

    SUBCASE("tampered status diverges")
    {
        rec.success = false;
        const auto ro = replay(rec, world);
        CHECK(ro.divergent);
        CHECK(ro.reason.find("status mismatch") != std::string::npos);
    }

    SUBCASE("tampered logs diverge")
    {
        rec.logs.push_back(EventLog{kBob, {Word{1}}, {}});
        const auto ro = replay(rec, world);
        CHECK(ro.divergent);
        CHECK(ro.reason.find("log mismatch") != std::string::npos);
    }

    SUBCASE("unsupported opcode reports its name")
    {
        auto w = world;
        Assembler a;
        a.push(0).push(0).push(0).push(0).push(kToken).op(Op::GAS).op(Op::DELEGATECALL);
        w.get_or_create(kContract).code = a.take();
        const auto ro = replay(rec, w);
        CHECK(ro.divergent);
        CHECK(ro.reason.find("unsupported: DELEGATECALL") != std::string::npos);
    }
}

TEST_CASE("seed extraction keeps only calls that can drive analysis")
{
    FixtureBundle bundle;
    auto world = snapshot_world();
    world.get_or_create(kToken).token->balances[kAlice] = 10;
    bundle.snapshots[kBlock] = world;

    // One qualifying call to the contract, one empty-calldata ETH send that
    // still moves tokens, and one unrelated transfer with no contract call.
    bundle.transactions.push_back(
        make_record(world, Word{0x1}, kContract, {0xde, 0xad, 0xbe, 0xef}, 1000));
    bundle.transactions.push_back(make_record(world, Word{0x2}, kContract, {}));
    bytes erc20_cd = from_hex("a9059cbb");
    const auto to_word = word_to_bytes(kBob.to_word());
    const auto amount_word = word_to_bytes(Word{1});
    erc20_cd.insert(erc20_cd.end(), to_word.begin(), to_word.end());
    erc20_cd.insert(erc20_cd.end(), amount_word.begin(), amount_word.end());
    bundle.transactions.push_back(make_record(world, Word{0x3}, kToken, erc20_cd));

    const auto ex = extract_seeds(bundle, kContract);
    CHECK(ex.warnings.empty());
    REQUIRE(ex.seeds.size() == 1);
    const auto& seed = ex.seeds[0];
    CHECK(seed.caller == kAlice);
    CHECK(seed.origin == kAlice);
    CHECK(seed.calldata == bytes{0xde, 0xad, 0xbe, 0xef});
    CHECK(seed.value == 1000);
    CHECK(seed.block_number == kBlock);
}

TEST_CASE("seed extraction walks the replayed call tree")
{
    FixtureBundle bundle;
    bundle.snapshots[kBlock] = snapshot_world();
    bundle.transactions.push_back(make_record(bundle.snapshots[kBlock], Word{0x9}, kForwarder, {0x01}));

    const auto ex = extract_seeds(bundle, kContract);
    CHECK(ex.warnings.empty());
    REQUIRE(ex.seeds.size() == 1);
    // The seed is the internal hop, not the top-level transaction.
    CHECK(ex.seeds[0].caller == kForwarder);
    CHECK(ex.seeds[0].origin == kAlice);
    CHECK(ex.seeds[0].calldata == from_hex("feedface"));
}

TEST_CASE("divergent records are skipped with a warning")
{
    FixtureBundle bundle;
    bundle.snapshots[kBlock] = snapshot_world();
    auto rec = make_record(bundle.snapshots[kBlock], Word{0x7}, kContract, {0xde, 0xad, 0xbe, 0xef});
    rec.logs.clear();  // tamper: drop the Transfer event
    bundle.transactions.push_back(rec);

    const auto ex = extract_seeds(bundle, kContract);
    CHECK(ex.seeds.empty());
    REQUIRE(ex.warnings.size() == 1);
    CHECK(ex.warnings[0].find("log mismatch") != std::string::npos);
}

TEST_CASE("failed records never seed")
{
    FixtureBundle bundle;
    bundle.snapshots[kBlock] = snapshot_world();
    auto rec = make_record(bundle.snapshots[kBlock], Word{0x8}, kContract, {0xde, 0xad, 0xbe, 0xef});
    rec.success = false;
    rec.logs.clear();
    bundle.transactions.push_back(rec);

    const auto ex = extract_seeds(bundle, kContract);
    CHECK(ex.seeds.empty());
    CHECK(ex.warnings.empty());  // not divergent, just a failed tx
}

TEST_CASE("file provider filters and orders transactions")
{
    FixtureBundle bundle;
    bundle.snapshots[kBlock] = snapshot_world();
    auto early = make_record(bundle.snapshots[kBlock], Word{0x1}, kContract, {0x01});
    auto late = make_record(bundle.snapshots[kBlock], Word{0x2}, kContract, {0x02});
    late.block_number = kBlock;  // same snapshot; order by hash insertion
    auto other = make_record(bundle.snapshots[kBlock], Word{0x3}, kBob, {});
    other.logs.clear();
    bundle.transactions = {early, other, late};

    FileProvider provider{bundle};
    const auto got = provider.transactions_for(kContract, 10);
    REQUIRE(got.size() == 2);
    CHECK(got[0].hash == 0x1);
    CHECK(got[1].hash == 0x2);

    CHECK(provider.transactions_for(kContract, 1).size() == 1);
    CHECK(provider.snapshot_at(kBlock).has_value());
    CHECK(!provider.snapshot_at(kBlock + 1).has_value());

    // Indirect involvement counts: a tx whose log was emitted by the contract.
    TransactionRecord indirect;
    indirect.hash = Word{0x4};
    indirect.from = kAlice;
    indirect.to = kToken;
    indirect.block_number = kBlock;
    indirect.logs = {EventLog{kContract, {transfer_event_topic()}, {}}};
    bundle.transactions.push_back(indirect);
    FileProvider wider{bundle};
    CHECK(wider.transactions_for(kContract, 10).size() == 3);
}
