#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prsg/bits.hpp"

namespace prsg {

/// Dense matrix over GF(2) with bit-packed rows.
///
/// Row i, column j holds the coefficient of input j in output i, so `apply`
/// computes y = A·x with y_i = XOR_j A(i,j) x_j.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  static BitMatrix from_rows(const std::vector<Bits>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  bool get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool value);

  Bits row(std::size_t r) const;
  // Number of ones in row r.
  std::size_t row_weight(std::size_t r) const;

  Bits apply(std::span<const std::uint8_t> x) const;
  // Row vector times matrix: (v·A)_j = XOR_i v_i A(i,j).
  Bits left_apply(std::span<const std::uint8_t> v) const;

  BitMatrix operator*(const BitMatrix& rhs) const;
  BitMatrix pow(std::uint64_t exponent) const;
  BitMatrix transpose() const;
  // Stacks `below` under this matrix; column counts must agree.
  BitMatrix vstack(const BitMatrix& below) const;

  std::size_t rank() const;

  bool operator==(const BitMatrix&) const = default;

  // One line per row, columns separated by spaces.
  std::string to_string() const;

 private:
  std::uint64_t* row_words(std::size_t r) { return words_.data() + r * stride_; }
  const std::uint64_t* row_words(std::size_t r) const { return words_.data() + r * stride_; }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace prsg
