// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/word.hpp>

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace skanf
{
/// One byte of a symbolic word: either a known constant or one calldata-byte
/// variable. Concatenation-shaped values (calldata loads, masked addresses,
/// spliced words) stay in this form so equalities against constants decompose
/// into per-byte assignments.
struct ByteAtom
{
    enum class Kind : uint8_t
    {
        Const,
        Calldata,
    };

    Kind kind = Kind::Const;
    uint8_t value = 0;     ///< For Const.
    uint32_t index = 0;    ///< Calldata byte index, for Calldata.

    auto operator<=>(const ByteAtom&) const = default;

    static ByteAtom constant(uint8_t v) { return {Kind::Const, v, 0}; }
    static ByteAtom calldata(uint32_t i) { return {Kind::Calldata, 0, i}; }
};

enum class EnvVar : uint8_t
{
    Caller,
    Origin,
    CallValue,
    BlockNumber,
};

/// Word-level operators; semantics delegate to word_ops so the symbolic
/// evaluator and the concrete interpreter agree by construction.
enum class SymOp : uint8_t
{
    Add,
    Mul,
    Sub,
    Div,
    Sdiv,
    Mod,
    Smod,
    Addmod,
    Mulmod,
    Exp,
    Signextend,
    Lt,
    Gt,
    Slt,
    Sgt,
    Eq,
    Iszero,
    And,
    Or,
    Xor,
    Not,
    Byte,
    Shl,
    Shr,
    Sar,
};

struct SymExpr;
using SymExprPtr = std::shared_ptr<const SymExpr>;

/// Immutable expression DAG node.
struct SymExpr
{
    enum class Kind : uint8_t
    {
        Const,    ///< value
        Bytes,    ///< atoms: 32 byte lanes, big-endian
        Env,      ///< env
        Fresh,    ///< index, name: opaque unknown (storage, foreign call)
        Op,       ///< op, children
        Keccak,   ///< children: byte-valued exprs of the hashed region
    };

    Kind kind = Kind::Const;
    Word value;
    std::array<ByteAtom, 32> atoms{};
    EnvVar env = EnvVar::Caller;
    uint32_t index = 0;
    std::string name;
    SymOp op = SymOp::Add;
    std::vector<SymExprPtr> children;

    [[nodiscard]] bool is_const() const { return kind == Kind::Const; }
    [[nodiscard]] std::optional<Word> const_value() const
    {
        return is_const() ? std::optional{value} : std::nullopt;
    }
};

/// Variable assignment a solver produces and the evaluator consumes.
struct Assignment
{
    std::map<uint32_t, uint8_t> calldata;  ///< CB index -> byte value.
    Address caller;
    Address origin;
    Word call_value;
    Word block_number;
    std::map<uint32_t, Word> fresh;  ///< Fresh id -> value (defaults to 0).
};

// Smart constructors; every one simplifies eagerly, so returned trees are
// already in canonical form (constants folded, byte lanes tracked).
SymExprPtr make_const(const Word& v);
SymExprPtr make_bytes(const std::array<ByteAtom, 32>& atoms);
SymExprPtr make_env(EnvVar v);
SymExprPtr make_fresh(uint32_t id, std::string name);
SymExprPtr make_op(SymOp op, std::vector<SymExprPtr> children);
SymExprPtr make_keccak(std::vector<SymExprPtr> byte_children);

/// Bytes value of one calldata word load: lanes offset..offset+31, atoms
/// beyond `calldata_bound` become constant zero. Pass SIZE_MAX to keep every
/// lane symbolic (fallback mode, unknown length).
SymExprPtr make_calldata_word(uint32_t offset, size_t calldata_bound);

/// Single calldata byte as a Bytes word (31 zero lanes + the variable).
SymExprPtr make_calldata_byte(uint32_t index);

/// Evaluates under a full assignment; every variable must be covered
/// (missing calldata bytes and fresh variables default to zero).
Word eval(const SymExprPtr& e, const Assignment& a);

/// Replaces pinned calldata bytes with constants and re-simplifies.
SymExprPtr substitute(const SymExprPtr& e, const std::map<uint32_t, uint8_t>& pins);

/// Replaces environment variables (caller, origin, value, block number) with
/// the concrete values from `env` and re-simplifies. Calldata and fresh
/// variables are left alone.
SymExprPtr substitute_env(const SymExprPtr& e, const Assignment& env);

/// Calldata byte indices the expression mentions, ascending.
std::vector<uint32_t> calldata_vars(const SymExprPtr& e);

/// True when no variable of any kind occurs (constant after folding).
bool is_ground(const SymExprPtr& e);

std::string to_string(const SymExprPtr& e);
}  // namespace skanf
