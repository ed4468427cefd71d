// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

namespace skanf
{
enum class Op : uint8_t
{
    STOP = 0x00,
    ADD = 0x01,
    MUL = 0x02,
    SUB = 0x03,
    DIV = 0x04,
    SDIV = 0x05,
    MOD = 0x06,
    SMOD = 0x07,
    ADDMOD = 0x08,
    MULMOD = 0x09,
    EXP = 0x0a,
    SIGNEXTEND = 0x0b,
    LT = 0x10,
    GT = 0x11,
    SLT = 0x12,
    SGT = 0x13,
    EQ = 0x14,
    ISZERO = 0x15,
    AND = 0x16,
    OR = 0x17,
    XOR = 0x18,
    NOT = 0x19,
    BYTE = 0x1a,
    SHL = 0x1b,
    SHR = 0x1c,
    SAR = 0x1d,
    KECCAK256 = 0x20,
    ADDRESS = 0x30,
    BALANCE = 0x31,
    ORIGIN = 0x32,
    CALLER = 0x33,
    CALLVALUE = 0x34,
    CALLDATALOAD = 0x35,
    CALLDATASIZE = 0x36,
    CALLDATACOPY = 0x37,
    CODESIZE = 0x38,
    CODECOPY = 0x39,
    GASPRICE = 0x3a,
    EXTCODESIZE = 0x3b,
    EXTCODECOPY = 0x3c,
    RETURNDATASIZE = 0x3d,
    RETURNDATACOPY = 0x3e,
    EXTCODEHASH = 0x3f,
    BLOCKHASH = 0x40,
    COINBASE = 0x41,
    TIMESTAMP = 0x42,
    NUMBER = 0x43,
    PREVRANDAO = 0x44,
    GASLIMIT = 0x45,
    CHAINID = 0x46,
    SELFBALANCE = 0x47,
    BASEFEE = 0x48,
    POP = 0x50,
    MLOAD = 0x51,
    MSTORE = 0x52,
    MSTORE8 = 0x53,
    SLOAD = 0x54,
    SSTORE = 0x55,
    JUMP = 0x56,
    JUMPI = 0x57,
    PC = 0x58,
    MSIZE = 0x59,
    GAS = 0x5a,
    JUMPDEST = 0x5b,
    PUSH0 = 0x5f,
    PUSH1 = 0x60,
    PUSH2 = 0x61,
    PUSH3 = 0x62,
    PUSH4 = 0x63,
    PUSH20 = 0x73,
    PUSH32 = 0x7f,
    DUP1 = 0x80,
    DUP16 = 0x8f,
    SWAP1 = 0x90,
    SWAP16 = 0x9f,
    LOG0 = 0xa0,
    LOG1 = 0xa1,
    LOG2 = 0xa2,
    LOG3 = 0xa3,
    LOG4 = 0xa4,
    CREATE = 0xf0,
    CALL = 0xf1,
    CALLCODE = 0xf2,
    RETURN = 0xf3,
    DELEGATECALL = 0xf4,
    CREATE2 = 0xf5,
    STATICCALL = 0xfa,
    REVERT = 0xfd,
    INVALID = 0xfe,
    SELFDESTRUCT = 0xff,
};

struct OpInfo
{
    std::string_view name;  ///< "INVALID" for bytes outside the Shanghai set.
    uint8_t pops;
    uint8_t pushes;
    uint8_t immediate_size;  ///< PUSHn operand width, 0 otherwise.
    bool defined;
};

/// Static Shanghai opcode table entry for a raw byte.
const OpInfo& op_info(uint8_t opcode);

constexpr bool is_push(uint8_t opcode)
{
    return opcode >= static_cast<uint8_t>(Op::PUSH0) && opcode <= static_cast<uint8_t>(Op::PUSH32);
}

constexpr unsigned push_size(uint8_t opcode)
{
    return is_push(opcode) ? opcode - static_cast<uint8_t>(Op::PUSH0) : 0;
}

constexpr bool is_dup(uint8_t opcode)
{
    return opcode >= static_cast<uint8_t>(Op::DUP1) && opcode <= static_cast<uint8_t>(Op::DUP16);
}

constexpr bool is_swap(uint8_t opcode)
{
    return opcode >= static_cast<uint8_t>(Op::SWAP1) && opcode <= static_cast<uint8_t>(Op::SWAP16);
}

constexpr bool is_log(uint8_t opcode)
{
    return opcode >= static_cast<uint8_t>(Op::LOG0) && opcode <= static_cast<uint8_t>(Op::LOG4);
}

/// Instructions that end a basic block unconditionally (JUMPI does not: it has
/// a fall-through successor, but it still terminates the block).
constexpr bool is_terminator(uint8_t opcode)
{
    switch (static_cast<Op>(opcode))
    {
    case Op::STOP:
    case Op::JUMP:
    case Op::JUMPI:
    case Op::RETURN:
    case Op::REVERT:
    case Op::INVALID:
    case Op::SELFDESTRUCT:
        return true;
    default:
        return !op_info(opcode).defined;
    }
}
}  // namespace skanf
