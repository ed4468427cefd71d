// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/symexpr.hpp>

#include <skanf/keccak.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace skanf
{
namespace
{
SymExprPtr node(SymExpr&& e)
{
    return std::make_shared<const SymExpr>(std::move(e));
}

bool all_const(const std::array<ByteAtom, 32>& atoms)
{
    return std::all_of(atoms.begin(), atoms.end(),
        [](const ByteAtom& a) { return a.kind == ByteAtom::Kind::Const; });
}

Word atoms_to_word(const std::array<ByteAtom, 32>& atoms)
{
    bytes b(32);
    for (size_t i = 0; i < 32; ++i)
        b[i] = atoms[i].value;
    return word_from_bytes(b);
}

std::array<ByteAtom, 32> word_to_atoms(const Word& v)
{
    const auto b = word_to_bytes(v);
    std::array<ByteAtom, 32> atoms;
    for (size_t i = 0; i < 32; ++i)
        atoms[i] = ByteAtom::constant(b[i]);
    return atoms;
}

const std::array<ByteAtom, 32>* as_bytes(const SymExprPtr& e)
{
    return e->kind == SymExpr::Kind::Bytes ? &e->atoms : nullptr;
}

/// Bytes view of an operand: real lanes for Bytes nodes, constant lanes for
/// Const nodes, nullopt otherwise.
std::optional<std::array<ByteAtom, 32>> lane_view(const SymExprPtr& e)
{
    if (e->kind == SymExpr::Kind::Bytes)
        return e->atoms;
    if (e->kind == SymExpr::Kind::Const)
        return word_to_atoms(e->value);
    return std::nullopt;
}

Word apply_op(SymOp op, const std::vector<Word>& x)
{
    using namespace word_ops;
    switch (op)
    {
    case SymOp::Add:
        return add(x[0], x[1]);
    case SymOp::Mul:
        return mul(x[0], x[1]);
    case SymOp::Sub:
        return sub(x[0], x[1]);
    case SymOp::Div:
        return div(x[0], x[1]);
    case SymOp::Sdiv:
        return sdiv(x[0], x[1]);
    case SymOp::Mod:
        return mod(x[0], x[1]);
    case SymOp::Smod:
        return smod(x[0], x[1]);
    case SymOp::Addmod:
        return addmod(x[0], x[1], x[2]);
    case SymOp::Mulmod:
        return mulmod(x[0], x[1], x[2]);
    case SymOp::Exp:
        return exp(x[0], x[1]);
    case SymOp::Signextend:
        return signextend(x[0], x[1]);
    case SymOp::Lt:
        return lt(x[0], x[1]);
    case SymOp::Gt:
        return gt(x[0], x[1]);
    case SymOp::Slt:
        return slt(x[0], x[1]);
    case SymOp::Sgt:
        return sgt(x[0], x[1]);
    case SymOp::Eq:
        return eq(x[0], x[1]);
    case SymOp::Iszero:
        return iszero(x[0]);
    case SymOp::And:
        return and_(x[0], x[1]);
    case SymOp::Or:
        return or_(x[0], x[1]);
    case SymOp::Xor:
        return xor_(x[0], x[1]);
    case SymOp::Not:
        return not_(x[0]);
    case SymOp::Byte:
        return byte(x[0], x[1]);
    case SymOp::Shl:
        return shl(x[0], x[1]);
    case SymOp::Shr:
        return shr(x[0], x[1]);
    case SymOp::Sar:
        return sar(x[0], x[1]);
    }
    return {};
}

const char* op_name(SymOp op)
{
    switch (op)
    {
    case SymOp::Add:
        return "add";
    case SymOp::Mul:
        return "mul";
    case SymOp::Sub:
        return "sub";
    case SymOp::Div:
        return "div";
    case SymOp::Sdiv:
        return "sdiv";
    case SymOp::Mod:
        return "mod";
    case SymOp::Smod:
        return "smod";
    case SymOp::Addmod:
        return "addmod";
    case SymOp::Mulmod:
        return "mulmod";
    case SymOp::Exp:
        return "exp";
    case SymOp::Signextend:
        return "signextend";
    case SymOp::Lt:
        return "lt";
    case SymOp::Gt:
        return "gt";
    case SymOp::Slt:
        return "slt";
    case SymOp::Sgt:
        return "sgt";
    case SymOp::Eq:
        return "eq";
    case SymOp::Iszero:
        return "iszero";
    case SymOp::And:
        return "and";
    case SymOp::Or:
        return "or";
    case SymOp::Xor:
        return "xor";
    case SymOp::Not:
        return "not";
    case SymOp::Byte:
        return "byte";
    case SymOp::Shl:
        return "shl";
    case SymOp::Shr:
        return "shr";
    case SymOp::Sar:
        return "sar";
    }
    return "?";
}

/// shl/shr of a Bytes word by a whole number of bytes moves lanes and fills
/// with zero; anything else falls back to an opaque Op node.
std::optional<std::array<ByteAtom, 32>> shift_atoms(const std::array<ByteAtom, 32>& atoms,
    const Word& shift_bits, bool left)
{
    if (shift_bits % 8 != 0)
        return std::nullopt;
    if (shift_bits >= 256)
    {
        std::array<ByteAtom, 32> zero;
        zero.fill(ByteAtom::constant(0));
        return zero;
    }
    const auto k = static_cast<size_t>(shift_bits / 8);
    std::array<ByteAtom, 32> out;
    out.fill(ByteAtom::constant(0));
    for (size_t i = 0; i < 32; ++i)
    {
        if (left)
        {
            if (i + k < 32)
                out[i] = atoms[i + k];
        }
        else
        {
            if (i >= k)
                out[i] = atoms[i - k];
        }
    }
    return out;
}
}  // namespace

SymExprPtr make_const(const Word& v)
{
    SymExpr e;
    e.kind = SymExpr::Kind::Const;
    e.value = v;
    return node(std::move(e));
}

SymExprPtr make_bytes(const std::array<ByteAtom, 32>& atoms)
{
    if (all_const(atoms))
        return make_const(atoms_to_word(atoms));
    SymExpr e;
    e.kind = SymExpr::Kind::Bytes;
    e.atoms = atoms;
    return node(std::move(e));
}

SymExprPtr make_env(EnvVar v)
{
    SymExpr e;
    e.kind = SymExpr::Kind::Env;
    e.env = v;
    return node(std::move(e));
}

SymExprPtr make_fresh(uint32_t id, std::string name)
{
    SymExpr e;
    e.kind = SymExpr::Kind::Fresh;
    e.index = id;
    e.name = std::move(name);
    return node(std::move(e));
}

SymExprPtr make_calldata_word(uint32_t offset, size_t calldata_bound)
{
    std::array<ByteAtom, 32> atoms;
    for (uint32_t j = 0; j < 32; ++j)
    {
        const uint64_t src = static_cast<uint64_t>(offset) + j;
        atoms[j] = src < calldata_bound ? ByteAtom::calldata(static_cast<uint32_t>(src)) :
                                          ByteAtom::constant(0);
    }
    return make_bytes(atoms);
}

SymExprPtr make_calldata_byte(uint32_t index)
{
    std::array<ByteAtom, 32> atoms;
    atoms.fill(ByteAtom::constant(0));
    atoms[31] = ByteAtom::calldata(index);
    return make_bytes(atoms);
}

SymExprPtr make_keccak(std::vector<SymExprPtr> byte_children)
{
    // Concrete-witness shortcut: hash for real when the whole region is
    // known.
    bool ground = true;
    for (const auto& c : byte_children)
        if (!c->is_const())
        {
            ground = false;
            break;
        }
    if (ground)
    {
        bytes data(byte_children.size());
        for (size_t i = 0; i < byte_children.size(); ++i)
            data[i] = word_byte(byte_children[i]->value, 31);
        return make_const(keccak256_word(data));
    }
    SymExpr e;
    e.kind = SymExpr::Kind::Keccak;
    e.children = std::move(byte_children);
    return node(std::move(e));
}

SymExprPtr make_op(SymOp op, std::vector<SymExprPtr> children)
{
    // Constant folding through the shared word_ops semantics.
    bool ground = true;
    for (const auto& c : children)
        if (!c->is_const())
        {
            ground = false;
            break;
        }
    if (ground)
    {
        std::vector<Word> vals;
        vals.reserve(children.size());
        for (const auto& c : children)
            vals.push_back(c->value);
        return make_const(apply_op(op, vals));
    }

    switch (op)
    {
    case SymOp::And:
    {
        const auto a = lane_view(children[0]);
        const auto b = lane_view(children[1]);
        if (a && b)
        {
            // Byte-aligned: lanes with a constant 0x00 on either side go to
            // zero; lanes with a constant 0xff on one side take the other
            // side's atom.
            std::array<ByteAtom, 32> out;
            bool representable = true;
            for (size_t i = 0; i < 32 && representable; ++i)
            {
                const auto& x = (*a)[i];
                const auto& y = (*b)[i];
                const bool xc = x.kind == ByteAtom::Kind::Const;
                const bool yc = y.kind == ByteAtom::Kind::Const;
                if (xc && yc)
                    out[i] = ByteAtom::constant(x.value & y.value);
                else if (xc && (x.value == 0x00 || x.value == 0xff))
                    out[i] = x.value == 0x00 ? ByteAtom::constant(0) : y;
                else if (yc && (y.value == 0x00 || y.value == 0xff))
                    out[i] = y.value == 0x00 ? ByteAtom::constant(0) : x;
                else
                    representable = false;
            }
            if (representable)
                return make_bytes(out);
        }
        break;
    }
    case SymOp::Or:
    {
        const auto a = lane_view(children[0]);
        const auto b = lane_view(children[1]);
        if (a && b)
        {
            // Splicing: whenever one side of a lane is constant zero the
            // other side passes through.
            std::array<ByteAtom, 32> out;
            bool representable = true;
            for (size_t i = 0; i < 32 && representable; ++i)
            {
                const auto& x = (*a)[i];
                const auto& y = (*b)[i];
                const bool xc = x.kind == ByteAtom::Kind::Const;
                const bool yc = y.kind == ByteAtom::Kind::Const;
                if (xc && yc)
                    out[i] = ByteAtom::constant(x.value | y.value);
                else if (xc && x.value == 0x00)
                    out[i] = y;
                else if (yc && y.value == 0x00)
                    out[i] = x;
                else if (xc && x.value == 0xff)
                    out[i] = ByteAtom::constant(0xff);
                else if (yc && y.value == 0xff)
                    out[i] = ByteAtom::constant(0xff);
                else
                    representable = false;
            }
            if (representable)
                return make_bytes(out);
        }
        break;
    }
    case SymOp::Shl:
    case SymOp::Shr:
    {
        if (children[0]->is_const())
        {
            if (const auto* atoms = as_bytes(children[1]))
            {
                if (const auto shifted =
                        shift_atoms(*atoms, children[0]->value, op == SymOp::Shl))
                    return make_bytes(*shifted);
            }
        }
        break;
    }
    case SymOp::Byte:
    {
        if (children[0]->is_const() && children[0]->value < 32)
        {
            if (const auto* atoms = as_bytes(children[1]))
            {
                std::array<ByteAtom, 32> out;
                out.fill(ByteAtom::constant(0));
                out[31] = (*atoms)[static_cast<size_t>(children[0]->value)];
                return make_bytes(out);
            }
        }
        break;
    }
    case SymOp::Eq:
        if (children[0] == children[1])
            return make_const(1);
        break;
    case SymOp::Add:
    case SymOp::Sub:
    case SymOp::Xor:
        // x+0, x-0, x^0 keep the symbolic side.
        if (children[1]->is_const() && children[1]->value == 0)
            return children[0];
        if (op == SymOp::Add && children[0]->is_const() && children[0]->value == 0)
            return children[1];
        break;
    default:
        break;
    }

    SymExpr e;
    e.kind = SymExpr::Kind::Op;
    e.op = op;
    e.children = std::move(children);
    return node(std::move(e));
}

Word eval(const SymExprPtr& e, const Assignment& a)
{
    switch (e->kind)
    {
    case SymExpr::Kind::Const:
        return e->value;
    case SymExpr::Kind::Bytes:
    {
        bytes b(32);
        for (size_t i = 0; i < 32; ++i)
        {
            const auto& atom = e->atoms[i];
            if (atom.kind == ByteAtom::Kind::Const)
                b[i] = atom.value;
            else
            {
                const auto it = a.calldata.find(atom.index);
                b[i] = it == a.calldata.end() ? 0 : it->second;
            }
        }
        return word_from_bytes(b);
    }
    case SymExpr::Kind::Env:
        switch (e->env)
        {
        case EnvVar::Caller:
            return a.caller.to_word();
        case EnvVar::Origin:
            return a.origin.to_word();
        case EnvVar::CallValue:
            return a.call_value;
        case EnvVar::BlockNumber:
            return a.block_number;
        }
        return {};
    case SymExpr::Kind::Fresh:
    {
        const auto it = a.fresh.find(e->index);
        return it == a.fresh.end() ? Word{0} : it->second;
    }
    case SymExpr::Kind::Op:
    {
        std::vector<Word> vals;
        vals.reserve(e->children.size());
        for (const auto& c : e->children)
            vals.push_back(eval(c, a));
        return apply_op(e->op, vals);
    }
    case SymExpr::Kind::Keccak:
    {
        bytes data(e->children.size());
        for (size_t i = 0; i < e->children.size(); ++i)
            data[i] = word_byte(eval(e->children[i], a), 31);
        return keccak256_word(data);
    }
    }
    return {};
}

SymExprPtr substitute(const SymExprPtr& e, const std::map<uint32_t, uint8_t>& pins)
{
    switch (e->kind)
    {
    case SymExpr::Kind::Const:
    case SymExpr::Kind::Env:
    case SymExpr::Kind::Fresh:
        return e;
    case SymExpr::Kind::Bytes:
    {
        auto atoms = e->atoms;
        bool changed = false;
        for (auto& atom : atoms)
        {
            if (atom.kind == ByteAtom::Kind::Calldata)
            {
                const auto it = pins.find(atom.index);
                if (it != pins.end())
                {
                    atom = ByteAtom::constant(it->second);
                    changed = true;
                }
            }
        }
        return changed ? make_bytes(atoms) : e;
    }
    case SymExpr::Kind::Op:
    case SymExpr::Kind::Keccak:
    {
        std::vector<SymExprPtr> children;
        children.reserve(e->children.size());
        bool changed = false;
        for (const auto& c : e->children)
        {
            auto nc = substitute(c, pins);
            changed = changed || nc != c;
            children.push_back(std::move(nc));
        }
        if (!changed)
            return e;
        return e->kind == SymExpr::Kind::Op ? make_op(e->op, std::move(children)) :
                                              make_keccak(std::move(children));
    }
    }
    return e;
}

SymExprPtr substitute_env(const SymExprPtr& e, const Assignment& env)
{
    switch (e->kind)
    {
    case SymExpr::Kind::Const:
    case SymExpr::Kind::Bytes:
    case SymExpr::Kind::Fresh:
        return e;
    case SymExpr::Kind::Env:
        return make_const(eval(e, env));
    case SymExpr::Kind::Op:
    case SymExpr::Kind::Keccak:
    {
        std::vector<SymExprPtr> children;
        children.reserve(e->children.size());
        bool changed = false;
        for (const auto& c : e->children)
        {
            auto nc = substitute_env(c, env);
            changed = changed || nc != c;
            children.push_back(std::move(nc));
        }
        if (!changed)
            return e;
        return e->kind == SymExpr::Kind::Op ? make_op(e->op, std::move(children)) :
                                              make_keccak(std::move(children));
    }
    }
    return e;
}

namespace
{
void collect_vars(const SymExprPtr& e, std::set<uint32_t>& out)
{
    switch (e->kind)
    {
    case SymExpr::Kind::Bytes:
        for (const auto& atom : e->atoms)
            if (atom.kind == ByteAtom::Kind::Calldata)
                out.insert(atom.index);
        break;
    case SymExpr::Kind::Op:
    case SymExpr::Kind::Keccak:
        for (const auto& c : e->children)
            collect_vars(c, out);
        break;
    default:
        break;
    }
}

bool ground_walk(const SymExprPtr& e)
{
    switch (e->kind)
    {
    case SymExpr::Kind::Const:
        return true;
    case SymExpr::Kind::Bytes:
    case SymExpr::Kind::Env:
    case SymExpr::Kind::Fresh:
        return false;  // Bytes nodes always hold at least one variable
    case SymExpr::Kind::Op:
    case SymExpr::Kind::Keccak:
        for (const auto& c : e->children)
            if (!ground_walk(c))
                return false;
        return true;
    }
    return false;
}
}  // namespace

std::vector<uint32_t> calldata_vars(const SymExprPtr& e)
{
    std::set<uint32_t> vars;
    collect_vars(e, vars);
    return {vars.begin(), vars.end()};
}

bool is_ground(const SymExprPtr& e)
{
    return ground_walk(e);
}

std::string to_string(const SymExprPtr& e)
{
    std::ostringstream os;
    switch (e->kind)
    {
    case SymExpr::Kind::Const:
        os << word_to_hex(e->value);
        break;
    case SymExpr::Kind::Bytes:
    {
        // Compress runs: cd[4..35] style for contiguous calldata lanes.
        os << "bytes(";
        size_t i = 0;
        bool first = true;
        while (i < 32)
        {
            if (!first)
                os << " ";
            const auto& atom = e->atoms[i];
            if (atom.kind == ByteAtom::Kind::Calldata)
            {
                size_t j = i;
                while (j + 1 < 32 && e->atoms[j + 1].kind == ByteAtom::Kind::Calldata &&
                       e->atoms[j + 1].index == e->atoms[j].index + 1)
                    ++j;
                if (j > i)
                    os << "cd[" << atom.index << ".." << e->atoms[j].index << "]";
                else
                    os << "cd[" << atom.index << "]";
                i = j + 1;
            }
            else
            {
                size_t j = i;
                while (j + 1 < 32 && e->atoms[j + 1].kind == ByteAtom::Kind::Const &&
                       e->atoms[j + 1].value == atom.value)
                    ++j;
                os << std::hex << "0x" << int{atom.value} << std::dec;
                if (j > i)
                    os << "*" << (j - i + 1);
                i = j + 1;
            }
            first = false;
        }
        os << ")";
        break;
    }
    case SymExpr::Kind::Env:
        switch (e->env)
        {
        case EnvVar::Caller:
            os << "caller";
            break;
        case EnvVar::Origin:
            os << "origin";
            break;
        case EnvVar::CallValue:
            os << "callvalue";
            break;
        case EnvVar::BlockNumber:
            os << "blocknumber";
            break;
        }
        break;
    case SymExpr::Kind::Fresh:
        os << e->name << "#" << e->index;
        break;
    case SymExpr::Kind::Op:
        os << op_name(e->op) << "(";
        for (size_t i = 0; i < e->children.size(); ++i)
        {
            if (i)
                os << ", ";
            os << to_string(e->children[i]);
        }
        os << ")";
        break;
    case SymExpr::Kind::Keccak:
        os << "keccak(" << e->children.size() << " bytes)";
        break;
    }
    return os.str();
}
}  // namespace skanf
