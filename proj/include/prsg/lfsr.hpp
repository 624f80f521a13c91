#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "prsg/bit_matrix.hpp"
#include "prsg/bits.hpp"

namespace prsg {

/// Forming polynomial D(x) = x^degree + x^{t_l} + ... + x^{t_1} + 1.
///
/// `coefficients()[i]` is c_i of the recurrence
///   x_{p+degree} = c_0 x_p ^ c_1 x_{p+1} ^ ... ^ c_{degree-1} x_{p+degree-1},
/// so c_0 is always 1 and c_t is 1 for every tap t.
class TapPolynomial {
 public:
  // Throws std::invalid_argument for degree < 2, an empty tap set, a tap
  // outside [1, degree-1], or a duplicated tap.
  static TapPolynomial create(int degree, std::vector<int> taps);

  int degree() const noexcept { return degree_; }
  const std::vector<int>& taps() const noexcept { return taps_; }
  const Bits& coefficients() const noexcept { return coefficients_; }

  // "4:1" style text, taps ascending.
  std::string to_string() const;
  // Human-readable form, e.g. "x^4 + x + 1".
  std::string to_polynomial_string() const;

  bool operator==(const TapPolynomial&) const = default;

 private:
  TapPolynomial() = default;

  int degree_ = 0;
  std::vector<int> taps_;
  Bits coefficients_;
};

inline TapPolynomial validate_polynomial(int degree, std::vector<int> taps) {
  return TapPolynomial::create(degree, std::move(taps));
}

// Parses "degree:t1,t2,...".
TapPolynomial parse_polynomial(const std::string& text);

/// Register contents (x_p, x_{p+1}, ..., x_{p+degree-1}); index 0 is the
/// oldest bit and the next one emitted. In the usual right-shifting drawing
/// of the register x_p sits at the right-hand (output) end.
struct LfsrState {
  Bits reg;
  std::uint64_t step_index = 0;

  bool operator==(const LfsrState&) const = default;
};

struct StepResult {
  LfsrState state;
  std::uint8_t output = 0;
};

struct GenerateResult {
  Bits stream;
  LfsrState state;
};

// XOR of c_i x_{p+i}: the bit about to enter the register.
std::uint8_t feedback_bit(const TapPolynomial& poly, const Bits& reg);

StepResult step(const TapPolynomial& poly, const LfsrState& state);
GenerateResult generate(const TapPolynomial& poly, LfsrState state, std::size_t n);

// Superdiagonal identity with the coefficient row at the bottom: one serial
// step as a matrix acting on the register vector.
BitMatrix companion_matrix(const TapPolynomial& poly);

// companion_matrix(poly)^span. Row i gives x_{q,i} in terms of the previous
// block; span = degree advances one whole block.
BitMatrix block_matrix(const TapPolynomial& poly, std::uint64_t span);
inline BitMatrix block_matrix(const TapPolynomial& poly) {
  return block_matrix(poly, static_cast<std::uint64_t>(poly.degree()));
}

/// One block X_q of degree consecutive sequence bits.
///
/// `bits[i]` is x_{q,i}, i.e. bits are held in chronological order. The
/// conventional column-vector order (x_{q,tau-1}, ..., x_{q,0}) is what
/// `to_string` prints and what `from_column` accepts.
struct PrsBlock {
  Bits bits;
  std::uint64_t index = 0;

  static PrsBlock from_column(const Bits& column, std::uint64_t index = 0);
  Bits column() const;
  std::string to_string() const { return format_bits(column()); }
  std::size_t size() const noexcept { return bits.size(); }

  bool operator==(const PrsBlock&) const = default;
};

// The first block of a stream is the seed register itself.
inline PrsBlock seed_block(const LfsrState& state) { return PrsBlock{state.reg, 0}; }

// X_q = G_Inf · X_{q-1}. Throws std::invalid_argument on dimension mismatch.
PrsBlock block_step(const BitMatrix& info_matrix, const PrsBlock& block);

// Seed block followed by enough block steps to cover n bits, truncated to n.
Bits generate_by_blocks(const BitMatrix& info_matrix, const LfsrState& seed, std::size_t n);

}  // namespace prsg
