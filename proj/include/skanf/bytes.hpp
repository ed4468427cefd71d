// skanf: analysis toolkit for obfuscated EVM bytecode
// Copyright 2026 The skanf Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace skanf
{
using bytes = std::vector<uint8_t>;
using bytes_view = std::span<const uint8_t>;

/// Decodes a hex string, with or without 0x prefix. Throws std::invalid_argument
/// on odd length or non-hex characters.
bytes from_hex(std::string_view hex);

/// Lowercase hex encoding without 0x prefix.
std::string to_hex(bytes_view data);

/// Lowercase hex encoding with 0x prefix.
std::string to_hex_prefixed(bytes_view data);
}  // namespace skanf
