// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/solver.hpp>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <random>
#include <set>

namespace skanf
{
namespace
{
/// Lane view of a node that decomposes into bytes: Bytes as-is, Const via its
/// big-endian serialization.
std::optional<std::array<ByteAtom, 32>> lanes(const SymExprPtr& e)
{
    if (e->kind == SymExpr::Kind::Bytes)
        return e->atoms;
    if (e->kind == SymExpr::Kind::Const)
    {
        const auto b = word_to_bytes(e->value);
        std::array<ByteAtom, 32> atoms;
        for (size_t i = 0; i < 32; ++i)
            atoms[i] = ByteAtom::constant(b[i]);
        return atoms;
    }
    return std::nullopt;
}

/// Matches the one-symbolic-byte shape (31 constant-zero lanes plus one
/// calldata lane at the bottom), the form single-byte comparisons take.
std::optional<uint32_t> single_byte_var(const SymExprPtr& e)
{
    if (e->kind != SymExpr::Kind::Bytes)
        return std::nullopt;
    for (size_t i = 0; i < 31; ++i)
        if (e->atoms[i] != ByteAtom::constant(0))
            return std::nullopt;
    if (e->atoms[31].kind != ByteAtom::Kind::Calldata)
        return std::nullopt;
    return e->atoms[31].index;
}

bool has_fresh(const SymExprPtr& e)
{
    switch (e->kind)
    {
    case SymExpr::Kind::Fresh:
        return true;
    case SymExpr::Kind::Op:
    case SymExpr::Kind::Keccak:
        for (const auto& c : e->children)
            if (has_fresh(c))
                return true;
        return false;
    default:
        return false;
    }
}

void harvest_const_bytes(const SymExprPtr& e, std::set<uint8_t>& out)
{
    switch (e->kind)
    {
    case SymExpr::Kind::Const:
    {
        for (const auto b : word_to_bytes(e->value))
            out.insert(b);
        break;
    }
    case SymExpr::Kind::Bytes:
        for (const auto& a : e->atoms)
            if (a.kind == ByteAtom::Kind::Const)
                out.insert(a.value);
        break;
    case SymExpr::Kind::Op:
    case SymExpr::Kind::Keccak:
        for (const auto& c : e->children)
            harvest_const_bytes(c, out);
        break;
    default:
        break;
    }
}

struct UnionFind
{
    std::map<uint32_t, uint32_t> parent;

    uint32_t find(uint32_t v)
    {
        auto it = parent.find(v);
        if (it == parent.end() || it->second == v)
            return v;
        const uint32_t root = find(it->second);
        it->second = root;
        return root;
    }

    void unite(uint32_t a, uint32_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        // Root at the smaller index so representatives are stable.
        parent[std::max(a, b)] = std::min(a, b);
    }
};

struct Interval
{
    int lo = 0;
    int hi = 255;
};

/// Shared propagation state: pins and intervals are keyed by the alias-class
/// representative; all_vars remembers every raw index seen so class pins can
/// be expanded back to concrete bytes.
struct Propagation
{
    UnionFind uf;
    std::map<uint32_t, uint8_t> pins;       // by representative
    std::map<uint32_t, Interval> intervals;  // by representative
    std::set<uint32_t> all_vars;
    bool conflict = false;

    void note(uint32_t var) { all_vars.insert(var); }

    Interval& interval(uint32_t rep) { return intervals.try_emplace(rep).first->second; }

    bool pin(uint32_t var, uint8_t val)
    {
        note(var);
        const auto rep = uf.find(var);
        const auto [it, inserted] = pins.try_emplace(rep, val);
        if (!inserted)
        {
            if (it->second != val)
                conflict = true;
            return false;
        }
        const auto& iv = interval(rep);
        if (val < iv.lo || val > iv.hi)
            conflict = true;
        return true;
    }

    bool narrow(uint32_t var, int lo, int hi)
    {
        note(var);
        const auto rep = uf.find(var);
        auto& iv = interval(rep);
        bool changed = false;
        if (lo > iv.lo)
        {
            iv.lo = lo;
            changed = true;
        }
        if (hi < iv.hi)
        {
            iv.hi = hi;
            changed = true;
        }
        if (iv.lo > iv.hi)
            conflict = true;
        const auto p = pins.find(rep);
        if (p != pins.end() && (p->second < iv.lo || p->second > iv.hi))
            conflict = true;
        return changed;
    }

    bool alias(uint32_t a, uint32_t b)
    {
        note(a);
        note(b);
        const auto ra = uf.find(a);
        const auto rb = uf.find(b);
        if (ra == rb)
            return false;
        const auto pa = pins.find(ra);
        const auto pb = pins.find(rb);
        const auto ia = interval(ra);
        const auto ib = interval(rb);
        uf.unite(ra, rb);
        const auto root = uf.find(ra);
        const auto other = root == ra ? rb : ra;
        // Merge the absorbed class's facts into the new root.
        if (pa != pins.end() && pb != pins.end() && pa->second != pb->second)
            conflict = true;
        std::optional<uint8_t> pinned;
        if (pa != pins.end())
            pinned = pa->second;
        else if (pb != pins.end())
            pinned = pb->second;
        pins.erase(other);
        if (pinned)
            pins[root] = *pinned;
        intervals.erase(other);
        auto& iv = interval(root);
        iv.lo = std::max(ia.lo, ib.lo);
        iv.hi = std::min(ia.hi, ib.hi);
        if (iv.lo > iv.hi)
            conflict = true;
        if (pinned && (*pinned < iv.lo || *pinned > iv.hi))
            conflict = true;
        return true;
    }

    /// Raw-index pin map for substitution.
    [[nodiscard]] std::map<uint32_t, uint8_t> expanded_pins()
    {
        std::map<uint32_t, uint8_t> out;
        for (const auto var : all_vars)
        {
            const auto it = pins.find(uf.find(var));
            if (it != pins.end())
                out[var] = it->second;
        }
        return out;
    }
};

/// Tries to turn one simplified constraint into pins, aliases, or interval
/// facts. Returns true when the constraint is fully captured by those facts
/// (it then needs no enumeration).
bool extract(const SymExprPtr& e, Propagation& p)
{
    for (const auto v : calldata_vars(e))
        p.note(v);

    if (e->kind == SymExpr::Kind::Bytes)
    {
        // A bare word used as a branch condition: must be nonzero.
        size_t symbolic = 0;
        uint32_t var = 0;
        for (size_t i = 0; i < 32; ++i)
        {
            const auto& a = e->atoms[i];
            if (a.kind == ByteAtom::Kind::Const)
            {
                if (a.value != 0)
                    return true;  // already nonzero whatever the variables do
            }
            else
            {
                ++symbolic;
                var = a.index;
            }
        }
        if (symbolic == 1)
        {
            p.narrow(var, 1, 255);  // the single byte carries the whole word
            return true;
        }
        return false;
    }

    if (e->kind != SymExpr::Kind::Op)
        return false;

    switch (e->op)
    {
    case SymOp::Eq:
    {
        const auto la = lanes(e->children[0]);
        const auto lb = lanes(e->children[1]);
        if (!la || !lb)
            return false;
        for (size_t i = 0; i < 32; ++i)
        {
            const auto& x = (*la)[i];
            const auto& y = (*lb)[i];
            const bool xc = x.kind == ByteAtom::Kind::Const;
            const bool yc = y.kind == ByteAtom::Kind::Const;
            if (xc && yc)
            {
                if (x.value != y.value)
                    p.conflict = true;
            }
            else if (xc)
                p.pin(y.index, x.value);
            else if (yc)
                p.pin(x.index, y.value);
            else if (x.index != y.index)
                p.alias(x.index, y.index);
        }
        return true;
    }
    case SymOp::Iszero:
    {
        const auto& inner = e->children[0];
        if (inner->kind != SymExpr::Kind::Bytes)
            return false;
        // iszero(word) is true iff every byte is zero.
        for (const auto& a : inner->atoms)
        {
            if (a.kind == ByteAtom::Kind::Const)
            {
                if (a.value != 0)
                    p.conflict = true;
            }
            else
                p.pin(a.index, 0);
        }
        return true;
    }
    case SymOp::Lt:
    case SymOp::Gt:
    {
        // Single-byte bounds: x < c, c < x, x > c, c > x.
        const auto vl = single_byte_var(e->children[0]);
        const auto vr = single_byte_var(e->children[1]);
        const bool cl = e->children[0]->is_const();
        const bool cr = e->children[1]->is_const();
        const bool lt = e->op == SymOp::Lt;
        if (vl && cr)
        {
            const Word c = e->children[1]->value;
            if (lt)  // x < c
            {
                if (c == 0)
                    p.conflict = true;
                else if (c <= 255)
                    p.narrow(*vl, 0, static_cast<int>(c) - 1);
                // c > 255: always true for a byte
            }
            else  // x > c
            {
                if (c >= 255)
                    p.conflict = true;
                else
                    p.narrow(*vl, static_cast<int>(c) + 1, 255);
            }
            return true;
        }
        if (cl && vr)
        {
            const Word c = e->children[0]->value;
            if (lt)  // c < x
            {
                if (c >= 255)
                    p.conflict = true;
                else
                    p.narrow(*vr, static_cast<int>(c) + 1, 255);
            }
            else  // c > x
            {
                if (c == 0)
                    p.conflict = true;
                else if (c <= 255)
                    p.narrow(*vr, 0, static_cast<int>(c) - 1);
            }
            return true;
        }
        return false;
    }
    default:
        return false;
    }
}

struct Prepared
{
    std::vector<SymExprPtr> exprs;  // env-grounded constraints
    std::vector<bool> resolved;
    Propagation prop;
    bool hard_conflict = false;
};

Prepared propagate(const std::vector<SymExprPtr>& constraints,
    const std::map<uint32_t, uint8_t>& pins, const Assignment& env)
{
    Prepared st;
    st.exprs.reserve(constraints.size());
    for (const auto& c : constraints)
        st.exprs.push_back(substitute_env(c, env));
    st.resolved.assign(st.exprs.size(), false);
    for (const auto& [var, val] : pins)
        st.prop.pin(var, val);

    for (int round = 0; round < 128 && !st.prop.conflict; ++round)
    {
        bool changed = false;
        const auto raw = st.prop.expanded_pins();
        for (size_t i = 0; i < st.exprs.size(); ++i)
        {
            if (st.resolved[i])
                continue;
            const auto e = substitute(st.exprs[i], raw);
            if (e->is_const())
            {
                if (e->value == 0)
                    st.prop.conflict = true;
                st.resolved[i] = true;
                changed = true;
                continue;
            }
            const auto pins_before = st.prop.pins.size();
            const auto parents_before = st.prop.uf.parent.size();
            if (extract(e, st.prop))
            {
                st.resolved[i] = true;
                changed = true;
            }
            else if (st.prop.pins.size() != pins_before ||
                     st.prop.uf.parent.size() != parents_before)
                changed = true;
            if (st.prop.conflict)
                break;
        }
        // Singleton intervals become pins.
        for (const auto& [rep, iv] : st.prop.intervals)
        {
            if (iv.lo == iv.hi && !st.prop.pins.contains(rep))
            {
                st.prop.pins[rep] = static_cast<uint8_t>(iv.lo);
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    st.hard_conflict = st.prop.conflict;
    return st;
}

bool verify_model(const std::vector<SymExprPtr>& constraints, const Assignment& model)
{
    return std::all_of(constraints.begin(), constraints.end(),
        [&](const SymExprPtr& c) { return eval(c, model) != 0; });
}
}  // namespace

Solver::Solver()
{
    if (const char* s = std::getenv("SKANF_SEED"))
        seed_ = std::strtoull(s, nullptr, 0);
    else
        seed_ = 0x736b616e66ULL;
}

SolverStats& Solver::stats()
{
    static SolverStats instance;
    return instance;
}

bool Solver::definitely_unsat(const std::vector<SymExprPtr>& constraints,
    const std::map<uint32_t, uint8_t>& pins, const Assignment& env)
{
    return propagate(constraints, pins, env).hard_conflict;
}

SolveResult Solver::solve(const std::vector<SymExprPtr>& constraints,
    const std::map<uint32_t, uint8_t>& pins, const Assignment& env) const
{
    auto& st = stats();
    ++st.solve_calls;

    auto prepared = propagate(constraints, pins, env);
    if (prepared.hard_conflict)
    {
        ++st.unsat_returned;
        return {SolveStatus::Unsat, {}};
    }

    auto& prop = prepared.prop;
    const auto finish = [&](Assignment model) -> SolveResult {
        model.caller = env.caller;
        model.origin = env.origin;
        model.call_value = env.call_value;
        model.block_number = env.block_number;
        model.fresh = env.fresh;
        ++st.models_returned;
        if (!verify_model(constraints, model))
        {
            ++st.verification_failures;
            ++st.unknown_returned;
            return {SolveStatus::Unknown, {}};
        }
        ++st.models_verified;
        return {SolveStatus::Sat, std::move(model)};
    };

    // Collect the constraints that pins alone did not settle, under the final
    // pin set.
    const auto raw_pins = prop.expanded_pins();
    std::vector<SymExprPtr> open;
    bool open_has_fresh = false;
    std::set<uint32_t> free_reps;
    for (size_t i = 0; i < prepared.exprs.size(); ++i)
    {
        if (prepared.resolved[i])
            continue;
        auto e = substitute(prepared.exprs[i], raw_pins);
        if (e->is_const())
        {
            if (e->value == 0)
            {
                ++st.unsat_returned;
                return {SolveStatus::Unsat, {}};
            }
            continue;
        }
        open_has_fresh = open_has_fresh || has_fresh(e);
        for (const auto v : calldata_vars(e))
        {
            prop.note(v);
            const auto rep = prop.uf.find(v);
            if (!prop.pins.contains(rep))
                free_reps.insert(rep);
        }
        open.push_back(std::move(e));
    }

    // Classes that carry only an interval fact (say, a nonzero-byte branch
    // condition) and will not be enumerated need a concrete witness, or the
    // model would default them to zero and flunk verification.
    for (const auto& [rep, iv] : prop.intervals)
    {
        if (iv.lo > 0 && !prop.pins.contains(rep) && !free_reps.contains(rep))
            prop.pins[rep] = static_cast<uint8_t>(iv.lo);
    }

    if (open.empty())
    {
        Assignment model;
        model.calldata = prop.expanded_pins();
        return finish(std::move(model));
    }

    if (free_reps.size() > 4)
    {
        ++st.unknown_returned;
        return {SolveStatus::Unknown, {}};
    }

    // Bounded enumeration over the remaining alias-class representatives.
    const std::vector<uint32_t> reps{free_reps.begin(), free_reps.end()};
    const size_t k = reps.size();
    const bool exhaustive = k <= 2;

    std::vector<std::vector<int>> cands(k);
    std::set<uint8_t> seen_bytes{0x00, 0x01, 0x7f, 0x80, 0xff};
    for (const auto& e : open)
        harvest_const_bytes(e, seen_bytes);
    for (size_t i = 0; i < k; ++i)
    {
        const auto iv = prop.interval(reps[i]);
        if (exhaustive)
        {
            for (int v = iv.lo; v <= iv.hi; ++v)
                cands[i].push_back(v);
        }
        else
        {
            std::set<int> s{iv.lo, iv.hi};
            for (const auto b : seen_bytes)
                if (b >= iv.lo && b <= iv.hi)
                    s.insert(b);
            cands[i].assign(s.begin(), s.end());
            if (cands[i].size() > 16)
                cands[i].resize(16);
        }
    }

    const auto try_tuple = [&](const std::vector<int>& tuple) -> std::optional<Assignment> {
        auto trial = prop.pins;
        for (size_t i = 0; i < k; ++i)
            trial[reps[i]] = static_cast<uint8_t>(tuple[i]);
        Assignment a;
        a.caller = env.caller;
        a.origin = env.origin;
        a.call_value = env.call_value;
        a.block_number = env.block_number;
        a.fresh = env.fresh;
        for (const auto var : prop.all_vars)
        {
            const auto it = trial.find(prop.uf.find(var));
            if (it != trial.end())
                a.calldata[var] = it->second;
        }
        for (const auto& e : open)
            if (eval(e, a) == 0)
                return std::nullopt;
        return a;
    };

    size_t budget = 300'000;
    std::vector<size_t> odo(k, 0);
    std::vector<int> tuple(k);
    while (budget > 0)
    {
        for (size_t i = 0; i < k; ++i)
            tuple[i] = cands[i][odo[i]];
        --budget;
        if (auto a = try_tuple(tuple))
        {
            Assignment model;
            model.calldata = std::move(a->calldata);
            return finish(std::move(model));
        }
        size_t d = 0;
        while (d < k && ++odo[d] == cands[d].size())
        {
            odo[d] = 0;
            ++d;
        }
        if (d == k)
            break;  // odometer wrapped: candidate space exhausted
    }

    if (exhaustive && budget > 0 && !open_has_fresh)
    {
        // The candidate space was complete (full narrowed ranges over every
        // free byte, no opaque unknowns), so exhaustion is a refutation.
        ++st.unsat_returned;
        return {SolveStatus::Unsat, {}};
    }

    if (!exhaustive && budget > 0)
    {
        // Random fill after the heuristic sweep for the 3- and 4-byte cases.
        std::mt19937_64 rng(seed_);
        std::vector<std::uniform_int_distribution<int>> dist;
        dist.reserve(k);
        for (size_t i = 0; i < k; ++i)
        {
            const auto iv = prop.interval(reps[i]);
            dist.emplace_back(iv.lo, iv.hi);
        }
        while (budget-- > 0)
        {
            for (size_t i = 0; i < k; ++i)
                tuple[i] = dist[i](rng);
            if (auto a = try_tuple(tuple))
            {
                Assignment model;
                model.calldata = std::move(a->calldata);
                return finish(std::move(model));
            }
        }
    }

    ++st.unknown_returned;
    return {SolveStatus::Unknown, {}};
}
}  // namespace skanf
