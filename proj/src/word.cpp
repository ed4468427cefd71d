// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/word.hpp>

#include <stdexcept>

namespace skanf
{
namespace
{
using boost::multiprecision::uint512_t;

constexpr unsigned word_bits = 256;

const Word word_max = ~Word{0};
const Word sign_bit = Word{1} << 255;

bool is_neg(const Word& w)
{
    return (w & sign_bit) != 0;
}

Word negate(const Word& w)
{
    return ~w + 1;  // wraps
}
}  // namespace

Word Address::to_word() const
{
    return word_from_bytes(bytes);
}

std::string Address::hex() const
{
    return to_hex_prefixed(bytes);
}

bool Address::is_zero() const
{
    for (const auto b : bytes)
        if (b != 0)
            return false;
    return true;
}

Address Address::from_word(const Word& w)
{
    const auto full = word_to_bytes(w);
    Address a;
    std::copy(full.begin() + 12, full.end(), a.bytes.begin());
    return a;
}

Address Address::from_hex(std::string_view hex)
{
    const auto raw = skanf::from_hex(hex);
    if (raw.size() != 20)
        throw std::invalid_argument{"address must be 20 bytes"};
    Address a;
    std::copy(raw.begin(), raw.end(), a.bytes.begin());
    return a;
}

Word word_from_bytes(bytes_view data)
{
    if (data.size() > 32)
        throw std::invalid_argument{"word source exceeds 32 bytes"};
    Word w = 0;
    for (const uint8_t b : data)
        w = (w << 8) | b;
    return w;
}

std::array<uint8_t, 32> word_to_bytes(const Word& w)
{
    std::array<uint8_t, 32> out{};
    Word v = w;
    for (int i = 31; i >= 0; --i)
    {
        out[static_cast<size_t>(i)] = static_cast<uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

uint8_t word_byte(const Word& w, unsigned i)
{
    if (i >= 32)
        return 0;
    return static_cast<uint8_t>((w >> (8 * (31 - i))) & 0xff);
}

uint64_t word_to_u64_clamp(const Word& w)
{
    if (w > Word{std::numeric_limits<uint64_t>::max()})
        return std::numeric_limits<uint64_t>::max();
    return static_cast<uint64_t>(w);
}

std::string word_to_hex(const Word& w)
{
    if (w == 0)
        return "0x0";
    const auto raw = word_to_bytes(w);
    auto s = to_hex(raw);
    const auto pos = s.find_first_not_of('0');
    return "0x" + s.substr(pos);
}

Word word_from_hex(std::string_view hex)
{
    if (hex.starts_with("0x") || hex.starts_with("0X"))
        hex.remove_prefix(2);
    if (hex.empty() || hex.size() > 64)
        throw std::invalid_argument{"hex word must be 1..64 nibbles"};
    Word w = 0;
    for (const char c : hex)
    {
        int nibble = 0;
        if (c >= '0' && c <= '9')
            nibble = c - '0';
        else if (c >= 'a' && c <= 'f')
            nibble = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            nibble = c - 'A' + 10;
        else
            throw std::invalid_argument{"invalid hex character in word"};
        w = (w << 4) | nibble;
    }
    return w;
}

namespace word_ops
{
Word add(const Word& a, const Word& b)
{
    return a + b;
}

Word mul(const Word& a, const Word& b)
{
    return a * b;
}

Word sub(const Word& a, const Word& b)
{
    return a - b;
}

Word div(const Word& a, const Word& b)
{
    return b == 0 ? Word{0} : a / b;
}

Word sdiv(const Word& a, const Word& b)
{
    if (b == 0)
        return 0;
    const bool na = is_neg(a);
    const bool nb = is_neg(b);
    const Word ua = na ? negate(a) : a;
    const Word ub = nb ? negate(b) : b;
    const Word q = ua / ub;
    return (na != nb) ? negate(q) : q;
}

Word mod(const Word& a, const Word& b)
{
    return b == 0 ? Word{0} : a % b;
}

Word smod(const Word& a, const Word& b)
{
    if (b == 0)
        return 0;
    const bool na = is_neg(a);
    const Word ua = na ? negate(a) : a;
    const Word ub = is_neg(b) ? negate(b) : b;
    const Word r = ua % ub;
    return na ? negate(r) : r;
}

Word addmod(const Word& a, const Word& b, const Word& n)
{
    if (n == 0)
        return 0;
    const uint512_t s = uint512_t{a} + uint512_t{b};
    return Word{s % uint512_t{n}};
}

Word mulmod(const Word& a, const Word& b, const Word& n)
{
    if (n == 0)
        return 0;
    const uint512_t p = uint512_t{a} * uint512_t{b};
    return Word{p % uint512_t{n}};
}

Word exp(const Word& base, const Word& e)
{
    Word result = 1;
    Word b = base;
    Word n = e;
    while (n != 0)
    {
        if ((n & 1) != 0)
            result *= b;  // wraps
        b *= b;
        n >>= 1;
    }
    return result;
}

Word signextend(const Word& b, const Word& x)
{
    if (b >= 31)
        return x;
    const unsigned bit = static_cast<unsigned>(b) * 8 + 7;
    const Word mask = (Word{1} << (bit + 1)) - 1;
    if ((x & (Word{1} << bit)) != 0)
        return x | ~mask;
    return x & mask;
}

Word lt(const Word& a, const Word& b)
{
    return a < b ? 1 : 0;
}

Word gt(const Word& a, const Word& b)
{
    return a > b ? 1 : 0;
}

Word slt(const Word& a, const Word& b)
{
    const bool na = is_neg(a);
    const bool nb = is_neg(b);
    if (na != nb)
        return na ? 1 : 0;
    return a < b ? 1 : 0;
}

Word sgt(const Word& a, const Word& b)
{
    return slt(b, a);
}

Word eq(const Word& a, const Word& b)
{
    return a == b ? 1 : 0;
}

Word iszero(const Word& a)
{
    return a == 0 ? 1 : 0;
}

Word and_(const Word& a, const Word& b)
{
    return a & b;
}

Word or_(const Word& a, const Word& b)
{
    return a | b;
}

Word xor_(const Word& a, const Word& b)
{
    return a ^ b;
}

Word not_(const Word& a)
{
    return ~a;
}

Word byte(const Word& i, const Word& x)
{
    if (i >= 32)
        return 0;
    return word_byte(x, static_cast<unsigned>(i));
}

Word shl(const Word& shift, const Word& value)
{
    if (shift >= word_bits)
        return 0;
    return value << static_cast<unsigned>(shift);
}

Word shr(const Word& shift, const Word& value)
{
    if (shift >= word_bits)
        return 0;
    return value >> static_cast<unsigned>(shift);
}

Word sar(const Word& shift, const Word& value)
{
    const bool neg = is_neg(value);
    if (shift >= word_bits)
        return neg ? word_max : Word{0};
    const auto s = static_cast<unsigned>(shift);
    Word r = value >> s;
    if (neg && s > 0)
        r |= word_max << (word_bits - s);
    return r;
}
}  // namespace word_ops
}  // namespace skanf
