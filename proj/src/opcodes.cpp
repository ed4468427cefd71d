// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/opcodes.hpp>

#include <array>

namespace skanf
{
namespace
{
struct Table
{
    std::array<OpInfo, 256> entries;

    constexpr void set(Op op, std::string_view name, uint8_t pops, uint8_t pushes, uint8_t imm = 0)
    {
        entries[static_cast<uint8_t>(op)] = {name, pops, pushes, imm, true};
    }
};

constexpr std::array<std::string_view, 33> push_names = {"PUSH0", "PUSH1", "PUSH2", "PUSH3",
    "PUSH4", "PUSH5", "PUSH6", "PUSH7", "PUSH8", "PUSH9", "PUSH10", "PUSH11", "PUSH12", "PUSH13",
    "PUSH14", "PUSH15", "PUSH16", "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22",
    "PUSH23", "PUSH24", "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31",
    "PUSH32"};
constexpr std::array<std::string_view, 16> dup_names = {"DUP1", "DUP2", "DUP3", "DUP4", "DUP5",
    "DUP6", "DUP7", "DUP8", "DUP9", "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};
constexpr std::array<std::string_view, 16> swap_names = {"SWAP1", "SWAP2", "SWAP3", "SWAP4",
    "SWAP5", "SWAP6", "SWAP7", "SWAP8", "SWAP9", "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14",
    "SWAP15", "SWAP16"};

constexpr Table make_table()
{
    Table t{};
    for (auto& e : t.entries)
        e = {"INVALID", 0, 0, 0, false};

    t.set(Op::STOP, "STOP", 0, 0);
    t.set(Op::ADD, "ADD", 2, 1);
    t.set(Op::MUL, "MUL", 2, 1);
    t.set(Op::SUB, "SUB", 2, 1);
    t.set(Op::DIV, "DIV", 2, 1);
    t.set(Op::SDIV, "SDIV", 2, 1);
    t.set(Op::MOD, "MOD", 2, 1);
    t.set(Op::SMOD, "SMOD", 2, 1);
    t.set(Op::ADDMOD, "ADDMOD", 3, 1);
    t.set(Op::MULMOD, "MULMOD", 3, 1);
    t.set(Op::EXP, "EXP", 2, 1);
    t.set(Op::SIGNEXTEND, "SIGNEXTEND", 2, 1);
    t.set(Op::LT, "LT", 2, 1);
    t.set(Op::GT, "GT", 2, 1);
    t.set(Op::SLT, "SLT", 2, 1);
    t.set(Op::SGT, "SGT", 2, 1);
    t.set(Op::EQ, "EQ", 2, 1);
    t.set(Op::ISZERO, "ISZERO", 1, 1);
    t.set(Op::AND, "AND", 2, 1);
    t.set(Op::OR, "OR", 2, 1);
    t.set(Op::XOR, "XOR", 2, 1);
    t.set(Op::NOT, "NOT", 1, 1);
    t.set(Op::BYTE, "BYTE", 2, 1);
    t.set(Op::SHL, "SHL", 2, 1);
    t.set(Op::SHR, "SHR", 2, 1);
    t.set(Op::SAR, "SAR", 2, 1);
    t.set(Op::KECCAK256, "KECCAK256", 2, 1);
    t.set(Op::ADDRESS, "ADDRESS", 0, 1);
    t.set(Op::BALANCE, "BALANCE", 1, 1);
    t.set(Op::ORIGIN, "ORIGIN", 0, 1);
    t.set(Op::CALLER, "CALLER", 0, 1);
    t.set(Op::CALLVALUE, "CALLVALUE", 0, 1);
    t.set(Op::CALLDATALOAD, "CALLDATALOAD", 1, 1);
    t.set(Op::CALLDATASIZE, "CALLDATASIZE", 0, 1);
    t.set(Op::CALLDATACOPY, "CALLDATACOPY", 3, 0);
    t.set(Op::CODESIZE, "CODESIZE", 0, 1);
    t.set(Op::CODECOPY, "CODECOPY", 3, 0);
    t.set(Op::GASPRICE, "GASPRICE", 0, 1);
    t.set(Op::EXTCODESIZE, "EXTCODESIZE", 1, 1);
    t.set(Op::EXTCODECOPY, "EXTCODECOPY", 4, 0);
    t.set(Op::RETURNDATASIZE, "RETURNDATASIZE", 0, 1);
    t.set(Op::RETURNDATACOPY, "RETURNDATACOPY", 3, 0);
    t.set(Op::EXTCODEHASH, "EXTCODEHASH", 1, 1);
    t.set(Op::BLOCKHASH, "BLOCKHASH", 1, 1);
    t.set(Op::COINBASE, "COINBASE", 0, 1);
    t.set(Op::TIMESTAMP, "TIMESTAMP", 0, 1);
    t.set(Op::NUMBER, "NUMBER", 0, 1);
    t.set(Op::PREVRANDAO, "PREVRANDAO", 0, 1);
    t.set(Op::GASLIMIT, "GASLIMIT", 0, 1);
    t.set(Op::CHAINID, "CHAINID", 0, 1);
    t.set(Op::SELFBALANCE, "SELFBALANCE", 0, 1);
    t.set(Op::BASEFEE, "BASEFEE", 0, 1);
    t.set(Op::POP, "POP", 1, 0);
    t.set(Op::MLOAD, "MLOAD", 1, 1);
    t.set(Op::MSTORE, "MSTORE", 2, 0);
    t.set(Op::MSTORE8, "MSTORE8", 2, 0);
    t.set(Op::SLOAD, "SLOAD", 1, 1);
    t.set(Op::SSTORE, "SSTORE", 2, 0);
    t.set(Op::JUMP, "JUMP", 1, 0);
    t.set(Op::JUMPI, "JUMPI", 2, 0);
    t.set(Op::PC, "PC", 0, 1);
    t.set(Op::MSIZE, "MSIZE", 0, 1);
    t.set(Op::GAS, "GAS", 0, 1);
    t.set(Op::JUMPDEST, "JUMPDEST", 0, 0);

    for (unsigned i = 0; i <= 32; ++i)
        t.entries[static_cast<uint8_t>(Op::PUSH0) + i] = {
            push_names[i], 0, 1, static_cast<uint8_t>(i), true};
    for (unsigned i = 0; i < 16; ++i)
    {
        t.entries[static_cast<uint8_t>(Op::DUP1) + i] = {
            dup_names[i], static_cast<uint8_t>(i + 1), static_cast<uint8_t>(i + 2), 0, true};
        t.entries[static_cast<uint8_t>(Op::SWAP1) + i] = {
            swap_names[i], static_cast<uint8_t>(i + 2), static_cast<uint8_t>(i + 2), 0, true};
    }
    for (unsigned i = 0; i <= 4; ++i)
    {
        const std::array<std::string_view, 5> names = {"LOG0", "LOG1", "LOG2", "LOG3", "LOG4"};
        t.entries[static_cast<uint8_t>(Op::LOG0) + i] = {
            names[i], static_cast<uint8_t>(i + 2), 0, 0, true};
    }

    t.set(Op::CREATE, "CREATE", 3, 1);
    t.set(Op::CALL, "CALL", 7, 1);
    t.set(Op::CALLCODE, "CALLCODE", 7, 1);
    t.set(Op::RETURN, "RETURN", 2, 0);
    t.set(Op::DELEGATECALL, "DELEGATECALL", 6, 1);
    t.set(Op::CREATE2, "CREATE2", 4, 1);
    t.set(Op::STATICCALL, "STATICCALL", 6, 1);
    t.set(Op::REVERT, "REVERT", 2, 0);
    t.entries[static_cast<uint8_t>(Op::INVALID)] = {"INVALID", 0, 0, 0, true};
    t.set(Op::SELFDESTRUCT, "SELFDESTRUCT", 1, 0);
    return t;
}

constexpr Table table = make_table();
}  // namespace

const OpInfo& op_info(uint8_t opcode)
{
    return table.entries[opcode];
}
}  // namespace skanf
