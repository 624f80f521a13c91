#include "prsg/bits.hpp"

#include <stdexcept>

namespace prsg {

Bits parse_bits(std::string_view text) {
  Bits out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      out.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else {
      throw std::invalid_argument("bit string may contain only '0' and '1': " + std::string(text));
    }
  }
  return out;
}

std::string format_bits(std::span<const std::uint8_t> bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back((b & 1u) ? '1' : '0');
  return s;
}

std::string format_hex(std::span<const std::uint8_t> bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    unsigned byte = 0;
    for (std::size_t k = 0; k < 8; ++k) {
      byte <<= 1;
      if (i + k < bits.size()) byte |= bits[i + k] & 1u;
    }
    s.push_back(kDigits[byte >> 4]);
    s.push_back(kDigits[byte & 0xF]);
  }
  return s;
}

std::uint8_t dot(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  std::uint8_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc ^= (a[i] & b[i] & 1u);
  return acc;
}

}  // namespace prsg
