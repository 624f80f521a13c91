#include "prsg/arithmetization.hpp"

#include <bit>
#include <stdexcept>

namespace prsg {

PackedLnp pack_system(const BitMatrix& info_matrix) {
  if (!info_matrix.square()) throw std::invalid_argument("pack_system: information matrix must be square");
  const std::size_t n = info_matrix.rows();

  PackedLnp lnp;
  lnp.row_weights_.resize(n);
  lnp.slot_order_.resize(n);
  lnp.slot_of_.resize(n);
  lnp.offsets_.resize(n);
  lnp.widths_.resize(n);
  lnp.coefficients_.assign(n, BigInt{0});

  std::size_t offset = 0;
  for (std::size_t slot = 0; slot < n; ++slot) {
    const std::size_t function = n - 1 - slot;
    const std::size_t weight = info_matrix.row_weight(function);
    const std::size_t width = weight == 0 ? 1 : static_cast<std::size_t>(std::bit_width(weight)) + 1;

    lnp.row_weights_[function] = weight;
    lnp.slot_order_[slot] = function;
    lnp.slot_of_[function] = slot;
    lnp.offsets_[slot] = offset;
    lnp.widths_[slot] = width;

    const BigInt place = BigInt{1} << offset;
    for (std::size_t j = 0; j < n; ++j) {
      if (info_matrix.get(function, j)) lnp.coefficients_[j] += place;
    }
    offset += width;
  }
  lnp.total_width_ = offset;
  return lnp;
}

BigInt eval_lnp(const PackedLnp& lnp, std::span<const std::uint8_t> x) {
  if (x.size() != lnp.size()) throw std::invalid_argument("eval_lnp: input length mismatch");
  BigInt u = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] & 1u) u += lnp.coefficients()[j];
  }
  return u;
}

std::uint8_t mask_bit(const BigInt& value, std::size_t position) {
  return boost::multiprecision::bit_test(value, static_cast<unsigned>(position)) ? 1 : 0;
}

std::uint64_t field_value(const PackedLnp& lnp, const BigInt& value, std::size_t function) {
  const auto offset = lnp.offset_of(function);
  const auto width = lnp.width_of(function);
  const BigInt mask = (BigInt{1} << width) - 1;
  return static_cast<std::uint64_t>((value >> offset) & mask);
}

PrsBlock extract_block(const PackedLnp& lnp, const BigInt& value, std::uint64_t index) {
  PrsBlock block;
  block.index = index;
  block.bits.resize(lnp.size());
  for (std::size_t i = 0; i < lnp.size(); ++i) block.bits[i] = mask_bit(value, lnp.offset_of(i));
  return block;
}

}  // namespace prsg
