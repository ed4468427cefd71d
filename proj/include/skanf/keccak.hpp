// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <skanf/word.hpp>

namespace skanf
{
/// Ethereum Keccak-256 (original Keccak 0x01 padding, not NIST SHA3).
std::array<uint8_t, 32> keccak256(bytes_view data);

/// Keccak-256 digest as a machine word.
Word keccak256_word(bytes_view data);
}  // namespace skanf
