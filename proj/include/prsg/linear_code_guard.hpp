#pragma once

#include <cstddef>
#include <vector>

#include "prsg/bit_matrix.hpp"
#include "prsg/lfsr.hpp"

namespace prsg {

/// Redundant check symbols appended to each block.
///
/// Check j is predicted from the previous block with row a_j and verified
/// on the emitted block with selector v_j, where a_j = v_j · G_Inf. Both are
/// indexed by bit position i (coefficient of x_{q-1,i} resp. x_{q,i}).
struct CheckSpec {
  std::vector<Bits> check_rows;
  std::vector<Bits> selectors;

  std::size_t redundancy() const noexcept { return check_rows.size(); }
};

// All-ones selector: the block parity.
Bits parity_selector(std::size_t width);

// Throws std::invalid_argument if `selectors` is empty, has a row of the wrong
// width, or is linearly dependent.
CheckSpec derive_check_rows(const BitMatrix& info_matrix, const std::vector<Bits>& selectors);

// G_Gen: rows 0..tau-1 are G_Inf, row tau+j is check row j.
BitMatrix generator_matrix(const BitMatrix& info_matrix, const CheckSpec& spec);

// `checks[j]` is x*_{q,j}.
struct GuardedBlock {
  PrsBlock block;
  Bits checks;

  bool operator==(const GuardedBlock&) const = default;
};

GuardedBlock encode_block(const BitMatrix& info_matrix, const CheckSpec& spec, const PrsBlock& prev);

// syndrome[j] = (v_j · X_q) ^ x*_{q,j}; all zero means nothing detected.
Bits verify_block(const CheckSpec& spec, const GuardedBlock& guarded);

inline bool syndrome_clear(const Bits& syndrome) {
  for (auto b : syndrome)
    if (b) return false;
  return true;
}

}  // namespace prsg
