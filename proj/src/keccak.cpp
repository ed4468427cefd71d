// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#include <skanf/keccak.hpp>

#include <cstring>

namespace skanf
{
namespace
{
constexpr int rounds = 24;
constexpr size_t rate = 136;  // 1600/8 - 2*32

constexpr uint64_t round_constants[rounds] = {
    0x0000000000000001, 0x0000000000008082, 0x800000000000808a, 0x8000000080008000,
    0x000000000000808b, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008a, 0x0000000000000088, 0x0000000080008009, 0x000000008000000a,
    0x000000008000808b, 0x800000000000008b, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800a, 0x800000008000000a,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008};

constexpr unsigned rotations[25] = {0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43,
    25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14};

uint64_t rotl(uint64_t v, unsigned n)
{
    return n == 0 ? v : (v << n) | (v >> (64 - n));
}

void keccak_f1600(uint64_t st[25])
{
    for (int round = 0; round < rounds; ++round)
    {
        uint64_t c[5];
        for (int x = 0; x < 5; ++x)
            c[x] = st[x] ^ st[x + 5] ^ st[x + 10] ^ st[x + 15] ^ st[x + 20];
        for (int x = 0; x < 5; ++x)
        {
            const uint64_t d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5)
                st[x + y] ^= d;
        }

        // rho + pi
        uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(st[x + 5 * y], rotations[x + 5 * y]);

        // chi
        for (int y = 0; y < 25; y += 5)
            for (int x = 0; x < 5; ++x)
                st[x + y] = b[x + y] ^ (~b[(x + 1) % 5 + y] & b[(x + 2) % 5 + y]);

        st[0] ^= round_constants[round];
    }
}
}  // namespace

std::array<uint8_t, 32> keccak256(bytes_view data)
{
    uint64_t st[25] = {};
    uint8_t block[rate];

    size_t offset = 0;
    while (data.size() - offset >= rate)
    {
        for (size_t i = 0; i < rate / 8; ++i)
        {
            uint64_t lane;
            std::memcpy(&lane, data.data() + offset + i * 8, 8);  // little-endian host
            st[i] ^= lane;
        }
        keccak_f1600(st);
        offset += rate;
    }

    const size_t tail = data.size() - offset;
    std::memset(block, 0, rate);
    if (tail > 0)
        std::memcpy(block, data.data() + offset, tail);
    block[tail] = 0x01;  // Keccak domain padding (SHA3 would use 0x06)
    block[rate - 1] |= 0x80;
    for (size_t i = 0; i < rate / 8; ++i)
    {
        uint64_t lane;
        std::memcpy(&lane, block + i * 8, 8);
        st[i] ^= lane;
    }
    keccak_f1600(st);

    std::array<uint8_t, 32> out;
    std::memcpy(out.data(), st, 32);
    return out;
}

Word keccak256_word(bytes_view data)
{
    const auto digest = keccak256(data);
    return word_from_bytes(digest);
}
}  // namespace skanf
