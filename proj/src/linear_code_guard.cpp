#include "prsg/linear_code_guard.hpp"

#include <stdexcept>

namespace prsg {

Bits parity_selector(std::size_t width) { return Bits(width, 1); }

CheckSpec derive_check_rows(const BitMatrix& info_matrix, const std::vector<Bits>& selectors) {
  if (selectors.empty()) throw std::invalid_argument("at least one check symbol is required");
  for (const auto& v : selectors) {
    if (v.size() != info_matrix.rows()) {
      throw std::invalid_argument("selector width does not match block width");
    }
  }
  if (BitMatrix::from_rows(selectors).rank() != selectors.size()) {
    throw std::invalid_argument("check selectors must be linearly independent");
  }
  CheckSpec spec;
  spec.selectors = selectors;
  spec.check_rows.reserve(selectors.size());
  for (const auto& v : selectors) spec.check_rows.push_back(info_matrix.left_apply(v));
  return spec;
}

BitMatrix generator_matrix(const BitMatrix& info_matrix, const CheckSpec& spec) {
  return info_matrix.vstack(BitMatrix::from_rows(spec.check_rows));
}

GuardedBlock encode_block(const BitMatrix& info_matrix, const CheckSpec& spec, const PrsBlock& prev) {
  GuardedBlock out;
  out.block = block_step(info_matrix, prev);
  out.checks.reserve(spec.redundancy());
  for (const auto& a : spec.check_rows) {
    if (a.size() != prev.bits.size()) throw std::invalid_argument("encode_block: check row width mismatch");
    out.checks.push_back(dot(a, prev.bits));
  }
  return out;
}

Bits verify_block(const CheckSpec& spec, const GuardedBlock& guarded) {
  if (guarded.checks.size() != spec.redundancy()) {
    throw std::invalid_argument("verify_block: check count mismatch");
  }
  Bits syndrome(spec.redundancy());
  for (std::size_t j = 0; j < spec.redundancy(); ++j) {
    syndrome[j] = dot(spec.selectors[j], guarded.block.bits) ^ (guarded.checks[j] & 1u);
  }
  return syndrome;
}

}  // namespace prsg
