// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/word.hpp>

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace skanf
{
/// Where a value ultimately came from. Calldata bytes are tracked one label
/// per byte so masking can narrow a taint to the exact adversarial input
/// positions.
struct TaintLabel
{
    enum class Kind : uint8_t
    {
        CalldataByte,
        Caller,
        Origin,
        CallValue,
    };

    Kind kind = Kind::CalldataByte;
    uint32_t index = 0;  ///< Byte index; meaningful for CalldataByte only.

    auto operator<=>(const TaintLabel&) const = default;

    static TaintLabel calldata_byte(uint32_t i) { return {Kind::CalldataByte, i}; }
    static TaintLabel caller() { return {Kind::Caller, 0}; }
    static TaintLabel origin() { return {Kind::Origin, 0}; }
    static TaintLabel call_value() { return {Kind::CallValue, 0}; }
};

std::string to_string(const TaintLabel& label);

/// Set of source labels. Empty means untainted; combining values unions the
/// sets (a join-semilattice).
class TaintSet
{
public:
    TaintSet() = default;
    TaintSet(std::initializer_list<TaintLabel> labels) : labels_{labels} {}

    [[nodiscard]] bool empty() const { return labels_.empty(); }
    [[nodiscard]] size_t size() const { return labels_.size(); }
    [[nodiscard]] bool contains(const TaintLabel& l) const { return labels_.contains(l); }

    /// True iff any CalldataByte label is present: the controllability test.
    [[nodiscard]] bool has_calldata() const;

    /// Ascending calldata byte indices contained in the set.
    [[nodiscard]] std::vector<uint32_t> calldata_indices() const;

    void insert(const TaintLabel& l) { labels_.insert(l); }
    void merge(const TaintSet& other);

    [[nodiscard]] const std::set<TaintLabel>& labels() const { return labels_; }

    bool operator==(const TaintSet&) const = default;

    /// {CalldataByte(first) .. CalldataByte(last)} inclusive.
    static TaintSet calldata_range(uint32_t first, uint32_t last);

private:
    std::set<TaintLabel> labels_;
};

TaintSet merged(const TaintSet& a, const TaintSet& b);

/// Per-byte taint of one 256-bit word. Lane 0 is the most significant byte.
/// Byte-aligned operations (AND/OR/XOR/NOT, byte loads and stores) preserve
/// lanes so that masking can discard lanes whose output byte is forced to
/// zero; everything else smears the union over all lanes, which keeps the
/// flat label set conservative.
class TaintVec
{
public:
    [[nodiscard]] TaintSet& lane(size_t i) { return lanes_[i]; }
    [[nodiscard]] const TaintSet& lane(size_t i) const { return lanes_[i]; }

    /// Union of every lane: the word-level TaintSet.
    [[nodiscard]] TaintSet flat() const;

    [[nodiscard]] bool empty() const;

    bool operator==(const TaintVec&) const = default;

    /// Same set in every lane (used for arithmetic results).
    static TaintVec smeared(TaintSet set);

    /// Lane j carries CalldataByte(offset + j), clipped to calldata_len.
    static TaintVec calldata_word(uint32_t offset, size_t calldata_len);

private:
    std::array<TaintSet, 32> lanes_;
};

/// AND keeps lanes and zeroes any lane whose output byte is concretely
/// forced to 0 by either operand; pass the operand bytes when known (32-byte
/// big-endian), nullptr when the concrete value is unavailable.
TaintVec propagate_and(const TaintVec& a, const TaintVec& b, const uint8_t* a_bytes,
    const uint8_t* b_bytes);

/// OR/XOR are byte-aligned: lane-wise union, nothing dropped.
TaintVec propagate_bytewise(const TaintVec& a, const TaintVec& b);

/// Default rule for every other opcode: union of all operand labels smeared
/// over all lanes.
TaintVec propagate_smear(const std::vector<const TaintVec*>& operands);

/// Shadow memory: taint per byte offset. Absent offsets are untainted.
class TaintedMemory
{
public:
    [[nodiscard]] TaintSet byte_at(size_t offset) const;
    void set_byte(size_t offset, TaintSet set);

    /// Strong update of 32 bytes from a word's lanes.
    void store_word(size_t offset, const TaintVec& v);
    [[nodiscard]] TaintVec load_word(size_t offset) const;

    /// Union over [offset, offset+len): the SHA3/args-region rule.
    [[nodiscard]] TaintSet range_union(size_t offset, size_t len) const;

private:
    std::map<size_t, TaintSet> bytes_;
};

/// Shadow storage: taint per slot, with address taint folded into both
/// stores and loads through tainted slot expressions.
class TaintedStorage
{
public:
    void store(const Word& slot, const TaintSet& slot_taint, const TaintSet& value_taint);
    [[nodiscard]] TaintSet load(const Word& slot, const TaintSet& slot_taint) const;

private:
    std::map<Word, TaintSet> slots_;
};

/// How a CALL parameter is bound, from the taint engine's point of view.
struct SinkParam
{
    std::string role;  ///< "target", "value", "selector", "arg1", ...
    bytes raw;         ///< Concrete bytes of the parameter (big-endian).
    TaintSet taint;

    [[nodiscard]] bool controllable() const { return taint.has_calldata(); }
};

/// A decomposed CALL site: the taint sink. Parameter 0 of the outgoing
/// calldata is the 4-byte selector, parameter k >= 1 the 32-byte word at
/// offset 4 + 32*(k-1).
struct CallSiteAnalysis
{
    uint32_t call_pc = 0;
    uint8_t opcode = 0;
    SinkParam target;
    SinkParam value;
    bool has_selector = false;  ///< False for args shorter than 4 bytes.
    SinkParam selector;
    std::vector<SinkParam> args;
    bytes full_args;  ///< The whole outgoing calldata region.
    bool imprecise_region = false;  ///< Set when argsOff/argsLen were tainted.

    [[nodiscard]] std::string debug_json() const;
};

/// Decomposes the outgoing call at call_pc. `args_region` is the memory
/// slice passed to the callee and `region_taint(i)` the taint of its i-th
/// byte; region_tainted marks a symbolic argsOff/argsLen, which conservatively
/// makes every derived parameter controllable.
CallSiteAnalysis sink_decompose(uint32_t call_pc, uint8_t opcode, const Address& target,
    const TaintVec& target_taint, const Word& value, const TaintVec& value_taint,
    bytes_view args_region, const std::vector<TaintSet>& region_taint, bool region_tainted,
    size_t calldata_len);
}  // namespace skanf
