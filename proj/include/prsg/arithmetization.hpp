#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "prsg/bigint.hpp"
#include "prsg/bit_matrix.hpp"
#include "prsg/lfsr.hpp"

namespace prsg {

/// A system of XOR functions packed into one linear numerical polynomial
///
///   L(X) = sum_j h_j x_j,
///
/// whose value holds the integer sum of every function in its own bit field.
/// The low bit of a field is the XOR of that function's inputs.
///
/// Fields are laid out from the least significant end in slot order, slot k
/// holding function tau-1-k (so the function producing x_{q,tau-1} is in the
/// lowest field). A field is one bit wider than its largest possible sum;
/// a function with no inputs gets a constant-zero field of width 1.
///
/// Nothing here caps tau. Exhaustive tests stay at tau <= 10 and the CLI
/// accepts up to 64.
class PackedLnp {
 public:
  std::size_t size() const noexcept { return coefficients_.size(); }

  // h_j, the coefficient of input x_{q-1,j}.
  const std::vector<BigInt>& coefficients() const noexcept { return coefficients_; }
  // slot_order()[k] is the function stored in field k.
  const std::vector<std::size_t>& slot_order() const noexcept { return slot_order_; }
  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  std::size_t total_width() const noexcept { return total_width_; }

  // Number of inputs function i sums; l_i is bit_width of this.
  std::size_t row_weight(std::size_t function) const { return row_weights_.at(function); }
  std::size_t offset_of(std::size_t function) const { return offsets_.at(slot_of_.at(function)); }
  std::size_t width_of(std::size_t function) const { return widths_.at(slot_of_.at(function)); }

 private:
  friend PackedLnp pack_system(const BitMatrix& info_matrix);

  std::vector<BigInt> coefficients_;
  std::vector<std::size_t> slot_order_;
  std::vector<std::size_t> slot_of_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> row_weights_;
  std::size_t total_width_ = 0;
};

PackedLnp pack_system(const BitMatrix& info_matrix);

// U = sum_j h_j x_j in plain integer arithmetic.
BigInt eval_lnp(const PackedLnp& lnp, std::span<const std::uint8_t> x);

// Bit `position` of U, counted from 0 at the least significant end. The
// 1-based masking index phi is position + 1.
std::uint8_t mask_bit(const BigInt& value, std::size_t position);

// Integer held in the field of `function`.
std::uint64_t field_value(const PackedLnp& lnp, const BigInt& value, std::size_t function);

PrsBlock extract_block(const PackedLnp& lnp, const BigInt& value, std::uint64_t index = 0);

}  // namespace prsg
