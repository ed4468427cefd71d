// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/interpreter.hpp>
#include <skanf/oracle.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdio>

namespace skanf
{
namespace
{
using ordered_json = nlohmann::ordered_json;

Address address_from_arg(const bytes& raw)
{
    return Address::from_word(word_from_bytes(raw));
}

bool fixed(ParamClass c)
{
    return c != ParamClass::Controllable;
}

std::string selector_hex(uint32_t selector)
{
    char buf[11];
    std::snprintf(buf, sizeof(buf), "0x%08x", selector);
    return buf;
}

constexpr char hex_digit(unsigned v)
{
    return static_cast<char>(v < 10 ? '0' + v : 'a' + (v - 10));
}
}  // namespace

const char* param_class_name(ParamClass c)
{
    switch (c)
    {
    case ParamClass::Controllable:
        return "controllable";
    case ParamClass::FixedRisky:
        return "fixed-risky";
    case ParamClass::FixedSafe:
        return "fixed-safe";
    }
    return "?";
}

SiteClasses classify(
    const CallSiteAnalysis& site, const RiskConfig& config, const WorldState& world)
{
    SiteClasses out;

    if (site.target.controllable())
        out.target = ParamClass::Controllable;
    else
    {
        Address target;
        std::ranges::copy(site.target.raw, target.bytes.begin());
        const auto* account = world.find(target);
        const bool token_marker = account != nullptr && account->token.has_value();
        out.target = config.risky_tokens.contains(target) || token_marker ?
            ParamClass::FixedRisky :
            ParamClass::FixedSafe;
    }

    if (site.has_selector && site.selector.controllable())
        out.selector = ParamClass::Controllable;
    else if (site.has_selector)
    {
        const auto sel = static_cast<uint32_t>(word_from_bytes(site.selector.raw));
        out.selector =
            config.risky_selectors.contains(sel) ? ParamClass::FixedRisky : ParamClass::FixedSafe;
    }

    out.args.reserve(site.args.size());
    for (const auto& arg : site.args)
        out.args.push_back(
            arg.controllable() ? ParamClass::Controllable : ParamClass::FixedSafe);
    return out;
}

std::optional<Finding> is_vulnerable(const SiteClasses& classes)
{
    const bool target_usable = classes.target != ParamClass::FixedSafe;
    const bool selector_usable = classes.selector != ParamClass::FixedSafe;
    const bool recipient_free =
        !classes.args.empty() && classes.args[0] == ParamClass::Controllable;
    if (!target_usable || !selector_usable || !recipient_free)
        return std::nullopt;

    Finding f;
    f.kind = classes.selector == ParamClass::Controllable ? "arbitrary-call" : "token-transfer";
    f.amount_controllable =
        classes.args.size() > 1 && classes.args[1] == ParamClass::Controllable;
    return f;
}

VulnerabilityReport build_report(const SinkRecord& sink, const SiteClasses& classes,
    const Finding& finding, const bytes& concrete_calldata)
{
    VulnerabilityReport r;
    r.caller = sink.caller;
    r.origin = sink.origin;
    r.block_number = sink.block_number;
    r.call_pc = sink.site.call_pc;
    r.calldata = concrete_calldata;
    r.calldata.resize(sink.calldata_len);
    r.symbolic_positions = sink.symbolic_bytes;
    r.finding = finding;
    r.tx_value = sink.call_value;
    r.recorded_origin = sink.recorded_origin;

    if (fixed(classes.target))
    {
        Address t;
        std::ranges::copy(sink.site.target.raw, t.bytes.begin());
        r.target_fixed = t;
    }
    if (sink.site.has_selector && fixed(classes.selector))
        r.selector_fixed = static_cast<uint32_t>(word_from_bytes(sink.site.selector.raw));
    if (!classes.args.empty() && fixed(classes.args[0]))
        r.destination_fixed = address_from_arg(sink.site.args[0].raw);
    if (classes.args.size() > 1 && fixed(classes.args[1]))
        r.amount_fixed = word_from_bytes(sink.site.args[1].raw);
    return r;
}

std::string emit_report(const VulnerabilityReport& report)
{
    std::string calldata;
    calldata.reserve(report.calldata.size() * 2);
    const std::set<uint32_t> symbolic(
        report.symbolic_positions.begin(), report.symbolic_positions.end());
    for (uint32_t i = 0; i < report.calldata.size(); ++i)
    {
        if (symbolic.contains(i))
            calldata += "SS";
        else
        {
            calldata += hex_digit(report.calldata[i] >> 4);
            calldata += hex_digit(report.calldata[i] & 0xf);
        }
    }

    ordered_json j;
    j["caller"] = report.caller.hex();
    j["origin"] = report.origin.hex();
    j["blockNumber"] = report.block_number;
    j["callPC"] = word_to_hex(report.call_pc);
    j["calldata"] = std::move(calldata);
    j["targetAddress"] = report.target_fixed ? report.target_fixed->hex() : "*";
    j["functionSelector"] = report.selector_fixed ? selector_hex(*report.selector_fixed) : "*";
    j["destination"] = report.destination_fixed ? report.destination_fixed->hex() : "*";
    j["amount"] = report.amount_fixed ? word_to_hex(*report.amount_fixed) : "*";
    return j.dump(2) + "\n";
}

VulnerabilityReport parse_report(const std::string& text)
{
    ordered_json j;
    try
    {
        j = ordered_json::parse(text);
    }
    catch (const ordered_json::parse_error& e)
    {
        throw ReportParseError{std::string{"report JSON: "} + e.what()};
    }

    static const std::vector<std::string> schema = {"caller", "origin", "blockNumber", "callPC",
        "calldata", "targetAddress", "functionSelector", "destination", "amount"};
    for (const auto& key : schema)
        if (!j.contains(key))
            throw ReportParseError{"report missing field \"" + key + "\""};
    for (const auto& [key, _] : j.items())
        if (std::ranges::find(schema, key) == schema.end())
            throw ReportParseError{"report has unknown field \"" + key + "\""};

    VulnerabilityReport r;
    try
    {
        r.caller = Address::from_hex(j["caller"].get<std::string>());
        r.origin = Address::from_hex(j["origin"].get<std::string>());
        r.block_number = j["blockNumber"].get<uint64_t>();
        r.call_pc = static_cast<uint32_t>(word_from_hex(j["callPC"].get<std::string>()));

        const auto cd = j["calldata"].get<std::string>();
        if (cd.size() % 2 != 0)
            throw ReportParseError{"report calldata has odd length"};
        for (uint32_t i = 0; i < cd.size() / 2; ++i)
        {
            const auto pair = cd.substr(2 * i, 2);
            if (pair == "SS")
            {
                r.symbolic_positions.push_back(i);
                r.calldata.push_back(0);
            }
            else
                r.calldata.push_back(from_hex(pair)[0]);
        }

        const auto target = j["targetAddress"].get<std::string>();
        if (target != "*")
            r.target_fixed = Address::from_hex(target);
        const auto selector = j["functionSelector"].get<std::string>();
        if (selector != "*")
            r.selector_fixed = static_cast<uint32_t>(word_from_hex(selector));
        const auto destination = j["destination"].get<std::string>();
        if (destination != "*")
            r.destination_fixed = Address::from_hex(destination);
        const auto amount = j["amount"].get<std::string>();
        if (amount != "*")
            r.amount_fixed = word_from_hex(amount);
    }
    catch (const ReportParseError&)
    {
        throw;
    }
    catch (const std::exception& e)
    {
        throw ReportParseError{std::string{"report field: "} + e.what()};
    }
    return r;
}

bool preliminary_validate(const VulnerabilityReport& report, const Address& contract,
    const CodeView& view, const WorldState& snapshot)
{
    WorldState w = snapshot;
    ExecOptions opt;
    opt.root_code = &view;
    const auto result = execute_transaction(
        w, Tx{report.origin, contract, report.tx_value, report.calldata}, opt);
    return reached_pc(result, report.call_pc);
}
}  // namespace skanf
