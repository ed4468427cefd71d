// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/ingest.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace skanf
{
namespace
{
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg)
{
    throw FixtureError{msg};
}

const ordered_json& need(const ordered_json& j, const char* key, const std::string& ctx)
{
    const auto it = j.find(key);
    if (it == j.end())
        fail(ctx + ": missing field \"" + key + "\"");
    return *it;
}

std::string need_string(const ordered_json& j, const char* key, const std::string& ctx)
{
    const auto& v = need(j, key, ctx);
    if (!v.is_string())
        fail(ctx + "." + key + ": expected a string");
    return v.get<std::string>();
}

uint64_t need_u64(const ordered_json& j, const char* key, const std::string& ctx)
{
    const auto& v = need(j, key, ctx);
    if (!v.is_number_unsigned())
        fail(ctx + "." + key + ": expected a non-negative integer");
    return v.get<uint64_t>();
}

uint64_t opt_u64(const ordered_json& j, const char* key, uint64_t fallback)
{
    const auto it = j.find(key);
    return it == j.end() ? fallback : it->get<uint64_t>();
}

Address parse_address(const std::string& s, const std::string& ctx)
{
    try
    {
        return Address::from_hex(s);
    }
    catch (const std::exception& e)
    {
        fail(ctx + ": " + e.what());
    }
}

Word parse_word(const std::string& s, const std::string& ctx)
{
    try
    {
        return word_from_hex(s);
    }
    catch (const std::exception& e)
    {
        fail(ctx + ": " + e.what());
    }
}

bytes parse_bytes(const std::string& s, const std::string& ctx)
{
    try
    {
        return from_hex(s);
    }
    catch (const std::exception& e)
    {
        fail(ctx + ": " + e.what());
    }
}

std::string hex32(const Word& w)
{
    return "0x" + to_hex(word_to_bytes(w));
}

BlockCtx block_from_json(const ordered_json& j, const std::string& ctx)
{
    BlockCtx b;
    b.number = need_u64(j, "number", ctx);
    b.timestamp = opt_u64(j, "timestamp", 0);
    if (const auto it = j.find("coinbase"); it != j.end())
        b.coinbase = parse_address(it->get<std::string>(), ctx + ".coinbase");
    b.chain_id = opt_u64(j, "chainId", 1);
    return b;
}

ordered_json block_to_json(const BlockCtx& b)
{
    ordered_json j;
    j["number"] = b.number;
    j["timestamp"] = b.timestamp;
    j["coinbase"] = b.coinbase.hex();
    j["chainId"] = b.chain_id;
    return j;
}

Account account_from_json(const ordered_json& j, const std::string& ctx)
{
    Account a;
    if (const auto it = j.find("balance"); it != j.end())
        a.balance = parse_word(it->get<std::string>(), ctx + ".balance");
    if (const auto it = j.find("codeHex"); it != j.end())
        a.code = parse_bytes(it->get<std::string>(), ctx + ".codeHex");
    if (const auto it = j.find("mockToken"); it != j.end())
    {
        if (!a.code.empty())
            fail(ctx + ": codeHex and mockToken are mutually exclusive");
        MockToken t;
        t.name = it->value("name", std::string{"TOKEN"});
        if (const auto bit = it->find("balances"); bit != it->end())
            for (const auto& [holder, amount] : bit->items())
                t.balances[parse_address(holder, ctx + ".mockToken.balances")] =
                    parse_word(amount.get<std::string>(), ctx + ".mockToken.balances");
        if (const auto ait = it->find("allowances"); ait != it->end())
            for (const auto& entry : *ait)
            {
                const auto actx = ctx + ".mockToken.allowances";
                const auto owner = parse_address(need_string(entry, "owner", actx), actx);
                const auto spender = parse_address(need_string(entry, "spender", actx), actx);
                t.allowances[{owner, spender}] =
                    parse_word(need_string(entry, "amount", actx), actx);
            }
        a.token = std::move(t);
    }
    if (const auto it = j.find("storage"); it != j.end())
        for (const auto& [slot, val] : it->items())
            a.storage[parse_word(slot, ctx + ".storage")] =
                parse_word(val.get<std::string>(), ctx + ".storage");
    a.nonce = opt_u64(j, "nonce", 0);
    return a;
}

ordered_json account_to_json(const Account& a)
{
    ordered_json j;
    j["balance"] = word_to_hex(a.balance);
    if (!a.code.empty())
        j["codeHex"] = to_hex_prefixed(a.code);
    if (a.token)
    {
        ordered_json t;
        t["name"] = a.token->name;
        ordered_json balances = ordered_json::object();
        for (const auto& [holder, amount] : a.token->balances)
            balances[holder.hex()] = word_to_hex(amount);
        t["balances"] = std::move(balances);
        if (!a.token->allowances.empty())
        {
            ordered_json allowances = ordered_json::array();
            for (const auto& [pair, amount] : a.token->allowances)
                allowances.push_back({{"owner", pair.first.hex()},
                    {"spender", pair.second.hex()}, {"amount", word_to_hex(amount)}});
            t["allowances"] = std::move(allowances);
        }
        j["mockToken"] = std::move(t);
    }
    if (!a.storage.empty())
    {
        ordered_json storage = ordered_json::object();
        for (const auto& [slot, val] : a.storage)
            storage[word_to_hex(slot)] = word_to_hex(val);
        j["storage"] = std::move(storage);
    }
    if (a.nonce != 0)
        j["nonce"] = a.nonce;
    return j;
}

WorldState world_from_json(const ordered_json& j, const std::string& ctx)
{
    WorldState w;
    w.block = block_from_json(need(j, "block", ctx), ctx + ".block");
    if (const auto it = j.find("accounts"); it != j.end())
        for (const auto& [addr, acct] : it->items())
            w.accounts[parse_address(addr, ctx + ".accounts")] =
                account_from_json(acct, ctx + ".accounts[" + addr + "]");
    return w;
}

ordered_json world_to_json(const WorldState& w)
{
    ordered_json j;
    j["block"] = block_to_json(w.block);
    ordered_json accounts = ordered_json::object();
    for (const auto& [addr, acct] : w.accounts)
        accounts[addr.hex()] = account_to_json(acct);
    j["accounts"] = std::move(accounts);
    return j;
}

EventLog log_from_json(const ordered_json& j, const std::string& ctx)
{
    EventLog log;
    log.emitter = parse_address(need_string(j, "address", ctx), ctx + ".address");
    if (const auto it = j.find("topics"); it != j.end())
        for (const auto& t : *it)
            log.topics.push_back(parse_word(t.get<std::string>(), ctx + ".topics"));
    if (const auto it = j.find("data"); it != j.end())
        log.data = parse_bytes(it->get<std::string>(), ctx + ".data");
    return log;
}

ordered_json log_to_json(const EventLog& log)
{
    ordered_json j;
    j["address"] = log.emitter.hex();
    ordered_json topics = ordered_json::array();
    for (const auto& t : log.topics)
        topics.push_back(hex32(t));
    j["topics"] = std::move(topics);
    j["data"] = to_hex_prefixed(log.data);
    return j;
}

TransactionRecord tx_from_json(const ordered_json& j, const std::string& ctx)
{
    TransactionRecord r;
    r.hash = parse_word(need_string(j, "hash", ctx), ctx + ".hash");
    r.from = parse_address(need_string(j, "from", ctx), ctx + ".from");
    r.to = parse_address(need_string(j, "to", ctx), ctx + ".to");
    r.value = parse_word(need_string(j, "value", ctx), ctx + ".value");
    r.calldata = parse_bytes(need_string(j, "calldata", ctx), ctx + ".calldata");
    r.block_number = need_u64(j, "blockNumber", ctx);
    const auto status = need_string(j, "status", ctx);
    if (status == "success")
        r.success = true;
    else if (status == "fail")
        r.success = false;
    else
        fail(ctx + ".status: expected \"success\" or \"fail\", got \"" + status + "\"");
    if (const auto it = j.find("logs"); it != j.end())
    {
        size_t i = 0;
        for (const auto& log : *it)
            r.logs.push_back(log_from_json(log, ctx + ".logs[" + std::to_string(i++) + "]"));
    }
    if (const auto it = j.find("internalCalls"); it != j.end())
        for (const auto& c : *it)
        {
            const auto cctx = ctx + ".internalCalls";
            r.internal_calls.push_back({parse_address(need_string(c, "caller", cctx), cctx),
                parse_address(need_string(c, "callee", cctx), cctx),
                parse_word(need_string(c, "value", cctx), cctx),
                parse_bytes(need_string(c, "calldata", cctx), cctx), 0});
        }
    return r;
}

ordered_json tx_to_json(const TransactionRecord& r)
{
    ordered_json j;
    j["hash"] = hex32(r.hash);
    j["from"] = r.from.hex();
    j["to"] = r.to.hex();
    j["value"] = word_to_hex(r.value);
    j["calldata"] = to_hex_prefixed(r.calldata);
    j["blockNumber"] = r.block_number;
    j["status"] = r.success ? "success" : "fail";
    ordered_json logs = ordered_json::array();
    for (const auto& log : r.logs)
        logs.push_back(log_to_json(log));
    j["logs"] = std::move(logs);
    if (!r.internal_calls.empty())
    {
        ordered_json calls = ordered_json::array();
        for (const auto& c : r.internal_calls)
            calls.push_back({{"caller", c.caller.hex()}, {"callee", c.callee.hex()},
                {"value", word_to_hex(c.value)}, {"calldata", to_hex_prefixed(c.calldata)}});
        j["internalCalls"] = std::move(calls);
    }
    return j;
}

ordered_json parse_json_text(const std::string& text, const char* what)
{
    try
    {
        return ordered_json::parse(text);
    }
    catch (const ordered_json::parse_error& e)
    {
        fail(std::string{what} + ": " + e.what());
    }
}

const char* status_name(Status s)
{
    switch (s)
    {
    case Status::Success:
        return "success";
    case Status::Revert:
        return "revert";
    case Status::Fault:
        return "fault";
    }
    return "?";
}
}  // namespace

FixtureBundle parse_fixture(const std::string& text)
{
    const auto j = parse_json_text(text, "fixture JSON");
    if (!j.is_object())
        fail("fixture JSON: top level must be an object");

    FixtureBundle bundle;
    if (const auto it = j.find("snapshots"); it != j.end())
        for (const auto& [key, snap] : it->items())
        {
            uint64_t block = 0;
            try
            {
                size_t pos = 0;
                block = std::stoull(key, &pos);
                if (pos != key.size())
                    throw std::invalid_argument{key};
            }
            catch (const std::exception&)
            {
                fail("snapshots: non-numeric block key \"" + key + "\"");
            }
            bundle.snapshots[block] = world_from_json(snap, "snapshots[" + key + "]");
        }

    if (const auto it = j.find("transactions"); it != j.end())
    {
        size_t i = 0;
        for (const auto& tx : *it)
        {
            auto rec = tx_from_json(tx, "transactions[" + std::to_string(i) + "]");
            if (!bundle.snapshots.contains(rec.block_number))
                fail("transactions[" + std::to_string(i) + "]: no snapshot for block " +
                     std::to_string(rec.block_number));
            bundle.transactions.push_back(std::move(rec));
            ++i;
        }
    }
    return bundle;
}

FixtureBundle load_fixture(const std::string& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        fail("cannot read fixture file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_fixture(buf.str());
}

std::string serialize_fixture(const FixtureBundle& bundle)
{
    ordered_json j;
    ordered_json snapshots = ordered_json::object();
    for (const auto& [block, world] : bundle.snapshots)
        snapshots[std::to_string(block)] = world_to_json(world);
    j["snapshots"] = std::move(snapshots);
    ordered_json txs = ordered_json::array();
    for (const auto& rec : bundle.transactions)
        txs.push_back(tx_to_json(rec));
    j["transactions"] = std::move(txs);
    return j.dump(2) + "\n";
}

WorldState world_from_json_text(const std::string& text)
{
    return world_from_json(parse_json_text(text, "snapshot JSON"), "snapshot");
}

std::string world_to_json_text(const WorldState& world)
{
    return world_to_json(world).dump(2) + "\n";
}

ReplayOutcome replay(const TransactionRecord& record, const WorldState& snapshot)
{
    WorldState w = snapshot;
    ExecOptions opt;
    opt.record_trace = false;
    ReplayOutcome out;
    out.result =
        execute_transaction(w, Tx{record.from, record.to, record.value, record.calldata}, opt);

    const bool ok = out.result.status == Status::Success;
    if (ok != record.success)
    {
        out.divergent = true;
        out.reason = std::string{"status mismatch: recorded "} +
                     (record.success ? "success" : "fail") + ", replay " +
                     status_name(out.result.status);
        if (!out.result.fault.empty())
            out.reason += " (" + out.result.fault + ")";
    }
    else if (ok && out.result.logs != record.logs)
    {
        out.divergent = true;
        out.reason = "log mismatch: replay emitted " + std::to_string(out.result.logs.size()) +
                     " log(s), record lists " + std::to_string(record.logs.size());
    }
    return out;
}

std::vector<TransactionRecord> FileProvider::transactions_for(
    const Address& contract, size_t limit)
{
    std::vector<TransactionRecord> out;
    for (const auto& rec : bundle_.transactions)
    {
        const bool involved = rec.to == contract ||
            std::ranges::any_of(rec.internal_calls,
                [&](const InternalCall& c) { return c.callee == contract; }) ||
            std::ranges::any_of(
                rec.logs, [&](const EventLog& log) { return log.emitter == contract; });
        if (involved)
            out.push_back(rec);
    }
    std::ranges::stable_sort(
        out, [](const auto& a, const auto& b) { return a.block_number > b.block_number; });
    if (out.size() > limit)
        out.resize(limit);
    return out;
}

std::optional<WorldState> FileProvider::snapshot_at(uint64_t block)
{
    const auto it = bundle_.snapshots.find(block);
    if (it == bundle_.snapshots.end())
        return std::nullopt;
    return it->second;
}

SeedExtraction extract_seeds(const FixtureBundle& bundle, const Address& contract)
{
    SeedExtraction out;
    const Word transfer_topic = transfer_event_topic();
    const Word contract_word = contract.to_word();

    for (const auto& rec : bundle.transactions)
    {
        if (!rec.success)
            continue;
        const auto tag = "tx " + hex32(rec.hash);
        const auto snap = bundle.snapshots.find(rec.block_number);
        if (snap == bundle.snapshots.end())
        {
            out.warnings.push_back(
                tag + ": no snapshot for block " + std::to_string(rec.block_number));
            continue;
        }
        auto ro = replay(rec, snap->second);
        if (ro.divergent)
        {
            out.warnings.push_back(tag + ": " + ro.reason);
            continue;
        }

        const bool touches = std::ranges::any_of(ro.result.logs, [&](const EventLog& log) {
            if (log.topics.empty() || log.topics[0] != transfer_topic)
                return false;
            if (log.emitter == contract)
                return true;
            return (log.topics.size() > 1 && log.topics[1] == contract_word) ||
                   (log.topics.size() > 2 && log.topics[2] == contract_word);
        });
        if (!touches)
            continue;

        for (const auto& call : ro.result.calls)
        {
            if (call.callee != contract || call.calldata.empty())
                continue;
            out.seeds.push_back(SeedInput{
                call.caller, rec.from, call.calldata, call.value, rec.block_number});
        }
    }
    return out;
}
}  // namespace skanf
