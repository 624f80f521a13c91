#include "prsg/bit_matrix.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace prsg {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

std::vector<std::uint64_t> pack(std::span<const std::uint8_t> x) {
  std::vector<std::uint64_t> out(words_for(x.size()), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] & 1u) out[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
  }
  return out;
}

}  // namespace

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), words_(rows * words_for(cols), 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<Bits>& rows) {
  if (rows.empty()) return {};
  BitMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw std::invalid_argument("from_rows: ragged rows");
    for (std::size_t c = 0; c < m.cols_; ++c) m.set(r, c, rows[r][c] & 1u);
  }
  return m;
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("BitMatrix::get");
  return (row_words(r)[c / kWordBits] >> (c % kWordBits)) & 1u;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("BitMatrix::set");
  const std::uint64_t mask = std::uint64_t{1} << (c % kWordBits);
  auto& w = row_words(r)[c / kWordBits];
  w = value ? (w | mask) : (w & ~mask);
}

Bits BitMatrix::row(std::size_t r) const {
  Bits out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = get(r, c);
  return out;
}

std::size_t BitMatrix::row_weight(std::size_t r) const {
  if (r >= rows_) throw std::out_of_range("BitMatrix::row_weight");
  std::size_t n = 0;
  for (std::size_t w = 0; w < stride_; ++w) n += std::popcount(row_words(r)[w]);
  return n;
}

Bits BitMatrix::apply(std::span<const std::uint8_t> x) const {
  if (x.size() != cols_) throw std::invalid_argument("BitMatrix::apply: dimension mismatch");
  const auto packed = pack(x);
  Bits y(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    const auto* rw = row_words(r);
    for (std::size_t w = 0; w < stride_; ++w) acc ^= rw[w] & packed[w];
    y[r] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return y;
}

Bits BitMatrix::left_apply(std::span<const std::uint8_t> v) const {
  if (v.size() != rows_) throw std::invalid_argument("BitMatrix::left_apply: dimension mismatch");
  std::vector<std::uint64_t> acc(stride_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (!(v[r] & 1u)) continue;
    const auto* rw = row_words(r);
    for (std::size_t w = 0; w < stride_; ++w) acc[w] ^= rw[w];
  }
  Bits out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = (acc[c / kWordBits] >> (c % kWordBits)) & 1u;
  return out;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("BitMatrix::operator*: dimension mismatch");
  BitMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto* dst = out.row_words(r);
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!get(r, k)) continue;
      const auto* src = rhs.row_words(k);
      for (std::size_t w = 0; w < out.stride_; ++w) dst[w] ^= src[w];
    }
  }
  return out;
}

BitMatrix BitMatrix::pow(std::uint64_t exponent) const {
  if (!square()) throw std::invalid_argument("BitMatrix::pow: matrix not square");
  BitMatrix result = identity(rows_);
  BitMatrix base = *this;
  while (exponent != 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1;
    if (exponent != 0) base = base * base;
  }
  return result;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) out.set(c, r, true);
  return out;
}

BitMatrix BitMatrix::vstack(const BitMatrix& below) const {
  if (below.cols_ != cols_) throw std::invalid_argument("BitMatrix::vstack: column mismatch");
  BitMatrix out(rows_ + below.rows_, cols_);
  std::copy(words_.begin(), words_.end(), out.words_.begin());
  std::copy(below.words_.begin(), below.words_.end(), out.words_.begin() + static_cast<std::ptrdiff_t>(words_.size()));
  return out;
}

std::size_t BitMatrix::rank() const {
  BitMatrix work = *this;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows_ && !work.get(pivot, c)) ++pivot;
    if (pivot == rows_) continue;
    if (pivot != rank) {
      std::swap_ranges(work.row_words(pivot), work.row_words(pivot) + stride_, work.row_words(rank));
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r != rank && work.get(r, c)) {
        for (std::size_t w = 0; w < stride_; ++w) work.row_words(r)[w] ^= work.row_words(rank)[w];
      }
    }
    ++rank;
  }
  return rank;
}

std::string BitMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c) os << ' ';
      os << (get(r, c) ? '1' : '0');
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace prsg
