// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/bytes.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <compare>
#include <optional>
#include <string>

namespace skanf
{
/// 256-bit EVM machine word. All arithmetic in word_ops wraps modulo 2**256.
using Word = boost::multiprecision::uint256_t;

/// 160-bit account address, big-endian.
struct Address
{
    std::array<uint8_t, 20> bytes{};

    auto operator<=>(const Address&) const = default;

    [[nodiscard]] Word to_word() const;
    [[nodiscard]] std::string hex() const;  ///< 0x-prefixed, lowercase.
    [[nodiscard]] bool is_zero() const;

    static Address from_word(const Word& w);  ///< Truncates to the low 160 bits.
    static Address from_hex(std::string_view hex);
};

/// Big-endian word from up to 32 bytes (shorter input is right-aligned).
Word word_from_bytes(bytes_view data);

/// Big-endian 32-byte serialization.
std::array<uint8_t, 32> word_to_bytes(const Word& w);

/// Byte i of the big-endian representation, i in [0,32).
uint8_t word_byte(const Word& w, unsigned i);

/// Clamps to uint64 max on overflow; EVM offsets beyond that always fault anyway.
uint64_t word_to_u64_clamp(const Word& w);

/// 0x-prefixed minimal hex ("0x0" for zero).
std::string word_to_hex(const Word& w);

/// Parses a hex word, 0x prefix optional, odd nibble counts allowed. Throws
/// std::invalid_argument on junk or more than 64 nibbles.
Word word_from_hex(std::string_view hex);

// Wrapping EVM arithmetic. Shared by the concrete interpreter and the symbolic
// expression evaluator so both agree by construction.
namespace word_ops
{
Word add(const Word& a, const Word& b);
Word mul(const Word& a, const Word& b);
Word sub(const Word& a, const Word& b);
Word div(const Word& a, const Word& b);   ///< b == 0 yields 0.
Word sdiv(const Word& a, const Word& b);  ///< Two's-complement; b == 0 yields 0.
Word mod(const Word& a, const Word& b);   ///< b == 0 yields 0.
Word smod(const Word& a, const Word& b);
Word addmod(const Word& a, const Word& b, const Word& n);
Word mulmod(const Word& a, const Word& b, const Word& n);
Word exp(const Word& base, const Word& e);
Word signextend(const Word& b, const Word& x);
Word lt(const Word& a, const Word& b);
Word gt(const Word& a, const Word& b);
Word slt(const Word& a, const Word& b);
Word sgt(const Word& a, const Word& b);
Word eq(const Word& a, const Word& b);
Word iszero(const Word& a);
Word and_(const Word& a, const Word& b);
Word or_(const Word& a, const Word& b);
Word xor_(const Word& a, const Word& b);
Word not_(const Word& a);
Word byte(const Word& i, const Word& x);  ///< i-th byte from the MSB; 0 for i >= 32.
Word shl(const Word& shift, const Word& value);
Word shr(const Word& shift, const Word& value);
Word sar(const Word& shift, const Word& value);
}  // namespace word_ops
}  // namespace skanf
