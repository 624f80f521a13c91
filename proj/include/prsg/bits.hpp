#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prsg {

// One bit per element, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

// Parses "1010" into {1,0,1,0}. Throws std::invalid_argument on any other character.
Bits parse_bits(std::string_view text);

std::string format_bits(std::span<const std::uint8_t> bits);

// 8 bits per byte, first bit in the MSB of the first byte, last byte zero-padded.
std::string format_hex(std::span<const std::uint8_t> bits);

// GF(2) inner product.
std::uint8_t dot(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

}  // namespace prsg
