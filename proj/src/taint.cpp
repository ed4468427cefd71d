// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/taint.hpp>

#include <skanf/bytes.hpp>

#include <algorithm>
#include <sstream>

namespace skanf
{
std::string to_string(const TaintLabel& label)
{
    switch (label.kind)
    {
    case TaintLabel::Kind::CalldataByte:
    {
        std::ostringstream os;
        os << "cd[" << label.index << "]";
        return os.str();
    }
    case TaintLabel::Kind::Caller:
        return "caller";
    case TaintLabel::Kind::Origin:
        return "origin";
    case TaintLabel::Kind::CallValue:
        return "callvalue";
    }
    return "?";
}

bool TaintSet::has_calldata() const
{
    for (const auto& l : labels_)
        if (l.kind == TaintLabel::Kind::CalldataByte)
            return true;
    return false;
}

std::vector<uint32_t> TaintSet::calldata_indices() const
{
    std::vector<uint32_t> out;
    for (const auto& l : labels_)
        if (l.kind == TaintLabel::Kind::CalldataByte)
            out.push_back(l.index);
    return out;  // std::set iteration is already ordered
}

void TaintSet::merge(const TaintSet& other)
{
    labels_.insert(other.labels_.begin(), other.labels_.end());
}

TaintSet TaintSet::calldata_range(uint32_t first, uint32_t last)
{
    TaintSet set;
    for (uint32_t i = first; i <= last; ++i)
        set.insert(TaintLabel::calldata_byte(i));
    return set;
}

TaintSet merged(const TaintSet& a, const TaintSet& b)
{
    TaintSet out = a;
    out.merge(b);
    return out;
}

TaintSet TaintVec::flat() const
{
    TaintSet out;
    for (const auto& lane : lanes_)
        out.merge(lane);
    return out;
}

bool TaintVec::empty() const
{
    return std::all_of(lanes_.begin(), lanes_.end(), [](const TaintSet& s) { return s.empty(); });
}

TaintVec TaintVec::smeared(TaintSet set)
{
    TaintVec v;
    for (size_t i = 0; i < 32; ++i)
        v.lanes_[i] = set;
    return v;
}

TaintVec TaintVec::calldata_word(uint32_t offset, size_t calldata_len)
{
    TaintVec v;
    for (uint32_t j = 0; j < 32; ++j)
    {
        const uint64_t source = static_cast<uint64_t>(offset) + j;
        if (source < calldata_len)
            v.lanes_[j].insert(TaintLabel::calldata_byte(static_cast<uint32_t>(source)));
    }
    return v;
}

TaintVec propagate_and(const TaintVec& a, const TaintVec& b, const uint8_t* a_bytes,
    const uint8_t* b_bytes)
{
    TaintVec out;
    for (size_t j = 0; j < 32; ++j)
    {
        const bool forced_zero =
            (a_bytes != nullptr && a_bytes[j] == 0) || (b_bytes != nullptr && b_bytes[j] == 0);
        if (forced_zero)
            continue;  // output byte is 0x00 whatever the inputs were
        out.lane(j) = merged(a.lane(j), b.lane(j));
    }
    return out;
}

TaintVec propagate_bytewise(const TaintVec& a, const TaintVec& b)
{
    TaintVec out;
    for (size_t j = 0; j < 32; ++j)
        out.lane(j) = merged(a.lane(j), b.lane(j));
    return out;
}

TaintVec propagate_smear(const std::vector<const TaintVec*>& operands)
{
    TaintSet all;
    for (const auto* v : operands)
        all.merge(v->flat());
    if (all.empty())
        return {};
    return TaintVec::smeared(std::move(all));
}

TaintSet TaintedMemory::byte_at(size_t offset) const
{
    const auto it = bytes_.find(offset);
    return it == bytes_.end() ? TaintSet{} : it->second;
}

void TaintedMemory::set_byte(size_t offset, TaintSet set)
{
    if (set.empty())
        bytes_.erase(offset);
    else
        bytes_[offset] = std::move(set);
}

void TaintedMemory::store_word(size_t offset, const TaintVec& v)
{
    for (size_t j = 0; j < 32; ++j)
        set_byte(offset + j, v.lane(j));
}

TaintVec TaintedMemory::load_word(size_t offset) const
{
    TaintVec v;
    for (size_t j = 0; j < 32; ++j)
        v.lane(j) = byte_at(offset + j);
    return v;
}

TaintSet TaintedMemory::range_union(size_t offset, size_t len) const
{
    TaintSet out;
    // Walk the stored keys rather than the range: the map is sparse.
    for (auto it = bytes_.lower_bound(offset); it != bytes_.end() && it->first < offset + len;
         ++it)
        out.merge(it->second);
    return out;
}

void TaintedStorage::store(const Word& slot, const TaintSet& slot_taint,
    const TaintSet& value_taint)
{
    auto stored = merged(value_taint, slot_taint);
    if (stored.empty())
        slots_.erase(slot);
    else
        slots_[slot] = std::move(stored);
}

TaintSet TaintedStorage::load(const Word& slot, const TaintSet& slot_taint) const
{
    const auto it = slots_.find(slot);
    TaintSet out = it == slots_.end() ? TaintSet{} : it->second;
    out.merge(slot_taint);
    return out;
}

std::string CallSiteAnalysis::debug_json() const
{
    std::ostringstream os;
    const auto param = [&](const SinkParam& p, bool first) {
        if (!first)
            os << ",";
        os << "{\"role\":\"" << p.role << "\",\"valueHex\":\"" << to_hex_prefixed(p.raw)
           << "\",\"taintLabels\":[";
        bool f = true;
        for (const auto& l : p.taint.labels())
        {
            if (!f)
                os << ",";
            os << "\"" << to_string(l) << "\"";
            f = false;
        }
        os << "]}";
    };
    os << "{\"callPC\":\"0x" << std::hex << call_pc << std::dec << "\",\"params\":[";
    param(target, true);
    param(value, false);
    if (has_selector)
        param(selector, false);
    for (const auto& a : args)
        param(a, false);
    os << "]}";
    return os.str();
}

CallSiteAnalysis sink_decompose(uint32_t call_pc, uint8_t opcode, const Address& target,
    const TaintVec& target_taint, const Word& value, const TaintVec& value_taint,
    bytes_view args_region, const std::vector<TaintSet>& region_taint, bool region_tainted,
    size_t calldata_len)
{
    CallSiteAnalysis out;
    out.call_pc = call_pc;
    out.opcode = opcode;
    out.full_args.assign(args_region.begin(), args_region.end());
    out.imprecise_region = region_tainted;

    // A symbolic args window means any calldata byte may end up anywhere in
    // the outgoing call: every derived parameter becomes controllable.
    TaintSet everything;
    if (region_tainted && calldata_len > 0)
        everything = TaintSet::calldata_range(0, static_cast<uint32_t>(calldata_len) - 1);

    const auto region_byte = [&](size_t i) {
        TaintSet t = i < region_taint.size() ? region_taint[i] : TaintSet{};
        t.merge(everything);
        return t;
    };

    out.target.role = "target";
    out.target.raw = bytes{target.bytes.begin(), target.bytes.end()};
    out.target.taint = target_taint.flat();

    out.value.role = "value";
    const auto value_bytes = word_to_bytes(value);
    out.value.raw.assign(value_bytes.begin(), value_bytes.end());
    out.value.taint = value_taint.flat();

    if (args_region.size() >= 4)
    {
        out.has_selector = true;
        out.selector.role = "selector";
        out.selector.raw.assign(args_region.begin(), args_region.begin() + 4);
        for (size_t i = 0; i < 4; ++i)
            out.selector.taint.merge(region_byte(i));

        // 32-byte words at 4, 36, 68, ...; a trailing partial word still
        // counts as an argument (zero-padded).
        size_t k = 1;
        for (size_t off = 4; off < args_region.size(); off += 32, ++k)
        {
            SinkParam arg;
            arg.role = "arg" + std::to_string(k);
            const size_t end = std::min(off + 32, args_region.size());
            arg.raw.assign(args_region.begin() + static_cast<long>(off),
                args_region.begin() + static_cast<long>(end));
            arg.raw.resize(32, 0);
            for (size_t i = off; i < end; ++i)
                arg.taint.merge(region_byte(i));
            out.args.push_back(std::move(arg));
        }
    }
    return out;
}
}  // namespace skanf
