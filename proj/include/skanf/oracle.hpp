// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/bytecode.hpp>
#include <skanf/symexec.hpp>
#include <skanf/taint.hpp>
#include <skanf/world.hpp>

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace skanf
{
/// How an adversary relates to one call-site parameter.
enum class ParamClass
{
    Controllable,  ///< Tainted by calldata: the attacker picks the value.
    FixedRisky,    ///< Constant, but a known token address or risky selector.
    FixedSafe,     ///< Constant and harmless.
};

const char* param_class_name(ParamClass c);

/// What counts as "risky" when a call-site parameter is fixed.
struct RiskConfig
{
    /// Known ERC-20 token addresses (beyond the world's own token markers).
    std::set<Address> risky_tokens;
    /// Selectors that move or authorize assets. Always contains at least
    /// transfer, approve, and transferFrom.
    std::set<uint32_t> risky_selectors = {
        selectors::transfer, selectors::approve, selectors::transfer_from};
};

/// classify() output: one class per call-site parameter.
struct SiteClasses
{
    ParamClass target = ParamClass::FixedSafe;
    ParamClass selector = ParamClass::FixedSafe;
    std::vector<ParamClass> args;  ///< One per 32-byte argument word.
};

/// Classifies every parameter of a decomposed call site. A fixed target is
/// risky when listed in the config or when the world marks the address as a
/// token; a fixed selector is risky when listed in the config; argument
/// words are judged by taint alone.
SiteClasses classify(
    const CallSiteAnalysis& site, const RiskConfig& config, const WorldState& world);

struct Finding
{
    /// "arbitrary-call" when the selector itself is attacker-chosen,
    /// "token-transfer" when a fixed but risky selector moves assets.
    std::string kind;
    bool amount_controllable = false;
};

/// The asset-management vulnerability predicate: the call target and the
/// function selector must each be controllable or fixed-risky, and the first
/// argument word (the recipient of transfer-shaped calls) must be
/// controllable. Records whether the second argument (the amount) is also
/// attacker-chosen.
std::optional<Finding> is_vulnerable(const SiteClasses& classes);

/// One confirmed finding, carrying everything the report JSON serializes
/// plus the transaction context validation and synthesis need.
struct VulnerabilityReport
{
    Address caller;
    Address origin;
    uint64_t block_number = 0;
    uint32_t call_pc = 0;
    bytes calldata;                          ///< Concrete bytes, symbolic ones included.
    std::vector<uint32_t> symbolic_positions;  ///< Byte indices rendered as "SS".

    /// Fixed parameter values; nullopt renders as "*" (controllable).
    std::optional<Address> target_fixed;
    std::optional<uint32_t> selector_fixed;
    std::optional<Address> destination_fixed;
    std::optional<Word> amount_fixed;

    // Context that travels with the report but stays out of its JSON.
    Finding finding;
    Word tx_value;
    bool recorded_origin = false;  ///< Origin came from a historical seed.
};

/// Assembles a report from a sink, its classification, and the concrete
/// calldata (seed bytes or a solved model). Call only for vulnerable sites.
VulnerabilityReport build_report(const SinkRecord& sink, const SiteClasses& classes,
    const Finding& finding, const bytes& concrete_calldata);

/// Renders the report as JSON with exactly the documented fields, in order:
/// caller, origin, blockNumber, callPC, calldata, targetAddress,
/// functionSelector, destination, amount. Controllable parameters render as
/// "*"; symbolic calldata bytes render as "SS".
std::string emit_report(const VulnerabilityReport& report);

struct ReportParseError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Parses emit_report output. Rejects missing or unknown fields. Symbolic
/// calldata positions parse back as zero bytes with their index recorded, so
/// emit_report(parse_report(x)) == x.
VulnerabilityReport parse_report(const std::string& text);

/// Replays the report's transaction (from = report origin) on a copy of the
/// snapshot and confirms the vulnerable CALL's pc is reached. Success of the
/// transaction itself is not required.
bool preliminary_validate(const VulnerabilityReport& report, const Address& contract,
    const CodeView& view, const WorldState& snapshot);
}  // namespace skanf
