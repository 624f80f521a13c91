#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prsg/arithmetization.hpp"
#include "prsg/bigint.hpp"
#include "prsg/lfsr.hpp"

namespace prsg {

/// Redundant residue number system bases.
///
/// Channels are numbered 0..size()-1: the informational moduli first, then
/// the redundant ones. Moduli are pairwise coprime, strictly ascending over
/// that numbering, and the operating range (product of the informational
/// moduli) exceeds 2^required_bits so every legitimate LNP value fits.
class ModuliSet {
 public:
  // Accepts an empty redundant list (no protection); build_moduli_set does not.
  static ModuliSet create(std::vector<std::uint64_t> info, std::vector<std::uint64_t> redundant,
                          std::size_t required_bits);

  const std::vector<std::uint64_t>& info() const noexcept { return info_; }
  const std::vector<std::uint64_t>& redundant() const noexcept { return redundant_; }
  const std::vector<std::uint64_t>& all() const noexcept { return all_; }
  std::size_t size() const noexcept { return all_.size(); }
  std::uint64_t modulus(std::size_t channel) const { return all_.at(channel); }
  bool is_informational(std::size_t channel) const noexcept { return channel < info_.size(); }

  // M_n and the full range product.
  const BigInt& operating_range() const noexcept { return operating_range_; }
  const BigInt& full_range() const noexcept { return full_range_; }
  std::size_t required_bits() const noexcept { return required_bits_; }

  // "13,17,19:23,29"
  std::string to_string() const;

  bool operator==(const ModuliSet& o) const {
    return info_ == o.info_ && redundant_ == o.redundant_ && required_bits_ == o.required_bits_;
  }

 private:
  std::vector<std::uint64_t> info_;
  std::vector<std::uint64_t> redundant_;
  std::vector<std::uint64_t> all_;
  BigInt operating_range_;
  BigInt full_range_;
  std::size_t required_bits_ = 0;
};

// Largest modulus accepted; keeps every channel value in a machine word.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 32;

ModuliSet build_moduli_set(std::vector<std::uint64_t> info, std::vector<std::uint64_t> redundant,
                           std::size_t required_bits);

// Smallest primes whose product exceeds 2^required_bits, followed by the next
// `redundancy` primes as redundant bases.
ModuliSet auto_moduli(std::size_t required_bits, std::size_t redundancy);

// "13,17,19:23,29" or "auto:<k>".
ModuliSet parse_moduli(const std::string& text, std::size_t required_bits);

// Throws std::logic_error when gcd(a, m) != 1.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m);

/// Per-channel LNP coefficients, alpha[t][j] = h_j mod m_t.
struct ResidueLnp {
  std::vector<std::uint64_t> moduli;
  std::vector<std::vector<std::uint64_t>> alpha;

  std::size_t channels() const noexcept { return moduli.size(); }
};

ResidueLnp encode_lnp_residues(const PackedLnp& lnp, const ModuliSet& moduli);

// One entry per channel, each in [0, m_t).
using ResidueVector = std::vector<std::uint64_t>;

// Channel t alone: sum of alpha[t][j] x_j reduced mod m_t after every addition.
std::uint64_t eval_channel(const ResidueLnp& rlnp, std::size_t channel, std::span<const std::uint8_t> x);
ResidueVector eval_channels(const ResidueLnp& rlnp, std::span<const std::uint8_t> x);

ResidueVector to_residues(const BigInt& value, std::span<const std::uint64_t> moduli);

/// CRT reconstruction over a subset of channels.
class CrtPlan {
 public:
  // `channels` index into `moduli`; throws std::invalid_argument when empty.
  CrtPlan(std::span<const std::uint64_t> moduli, std::vector<std::size_t> channels);

  const std::vector<std::size_t>& channels() const noexcept { return channels_; }
  const BigInt& modulus() const noexcept { return modulus_; }
  // M_s = modulus / m_s and mu_s = M_s^{-1} mod m_s, in `channels` order.
  const std::vector<BigInt>& cofactors() const noexcept { return cofactors_; }
  const std::vector<std::uint64_t>& inverses() const noexcept { return inverses_; }

 private:
  std::vector<std::size_t> channels_;
  std::vector<std::uint64_t> subset_moduli_;
  std::vector<BigInt> cofactors_;
  std::vector<std::uint64_t> inverses_;
  std::vector<BigInt> weights_;
  BigInt modulus_;

  friend BigInt reconstruct_crt(const ResidueVector& values, const CrtPlan& plan);
};

CrtPlan full_plan(const ModuliSet& moduli);

// | sum_s M_s mu_s U_s |_{M_subset}
BigInt reconstruct_crt(const ResidueVector& values, const CrtPlan& plan);

enum class RangeStatus { ok, detected_error };

// ok iff value < M_n.
RangeStatus range_check(const BigInt& value, const ModuliSet& moduli);

/// Orthogonal bases for reconstruction with one channel left out.
///
/// For excluded channel j: basis(i, j) is 1 mod m_i and 0 mod every other
/// retained modulus, basis(j, j) is 0, and reduced_modulus(j) is the
/// product of all moduli except m_j.
class BasisTable {
 public:
  explicit BasisTable(const ModuliSet& moduli);

  std::size_t size() const noexcept { return reduced_moduli_.size(); }
  const BigInt& basis(std::size_t i, std::size_t j) const { return bases_.at(j).at(i); }
  const BigInt& reduced_modulus(std::size_t j) const { return reduced_moduli_.at(j); }

 private:
  std::vector<std::vector<BigInt>> bases_;
  std::vector<BigInt> reduced_moduli_;
};

inline BasisTable basis_table(const ModuliSet& moduli) { return BasisTable(moduli); }

// | sum_{i != j} U_i B_{i,j} |_{M_j}
BigInt projection(const ResidueVector& values, const BasisTable& table, std::size_t excluded);

struct Localization {
  enum class Kind { no_error, faulty_channel, ambiguous };

  Kind kind = Kind::no_error;
  std::size_t channel = 0;  // valid for faulty_channel
  BigInt value;             // the reconstruction, or the corrected value
  std::vector<std::size_t> in_range;  // every j whose projection fell below M_n
};

// Requires at least two redundant moduli; throws std::invalid_argument otherwise.
Localization localize_fault(const ResidueVector& values, const ModuliSet& moduli, const BasisTable& table);

// Drops channel j. An informational channel is replaced by the smallest
// redundant modulus. Throws std::invalid_argument if the channel does not
// exist or the remaining operating range would no longer exceed
// 2^required_bits.
ModuliSet reconfigure(const ModuliSet& moduli, std::size_t channel);

/// Everything a protected step needs for one moduli set, built once.
struct RnsContext {
  ModuliSet moduli;
  ResidueLnp residues;
  CrtPlan plan;
  std::optional<BasisTable> table;  // present with >= 2 redundant moduli

  static RnsContext make(const PackedLnp& lnp, ModuliSet moduli);

  bool can_detect() const noexcept { return !moduli.redundant().empty(); }
  bool can_localize() const noexcept { return table.has_value(); }
};

enum class BlockStatus { ok, corrected, detected, ambiguous };

// With two redundant moduli the code corrects one bad channel or detects two,
// not both: a double fault can look exactly like a single one and be
// "corrected" to the wrong value. detect_only never corrects and so never
// emits a wrong block for any fault the range check catches.
enum class FaultPolicy { correct, detect_only };

std::string to_string(BlockStatus status);

struct ProtectedStep {
  std::optional<PrsBlock> block;        // withheld on detected / ambiguous
  BlockStatus status = BlockStatus::ok;
  std::optional<std::size_t> channel;   // corrected channel, index into the context's moduli
  BigInt value;                         // reconstructed (or corrected) LNP value
};

// Range check, then localization on failure. The block is extracted from the
// verified value only.
ProtectedStep decode_residues(const RnsContext& ctx, const PackedLnp& lnp, const ResidueVector& values,
                              std::uint64_t block_index, FaultPolicy policy = FaultPolicy::correct);

ProtectedStep protected_step(const RnsContext& ctx, const PackedLnp& lnp, const PrsBlock& prev,
                             FaultPolicy policy = FaultPolicy::correct);

/// Block generator running on the RNS path with the exclusion policy: after
/// `threshold` consecutive corrections on the same channel that channel is
/// dropped from the moduli set.
///
/// Channels keep their original ("physical") number across reconfiguration;
/// physical_channels()[t] maps the current channel t back to it.
class ProtectedGenerator {
 public:
  // Called with the freshly evaluated channel values before reconstruction.
  using ChannelHook = std::function<void(ResidueVector& values, std::span<const std::size_t> physical)>;

  struct Step {
    ProtectedStep result;
    std::optional<std::size_t> physical_channel;   // set when corrected
    std::optional<std::uint64_t> excluded_modulus;  // set when this step reconfigured
  };

  ProtectedGenerator(PackedLnp lnp, ModuliSet moduli, unsigned threshold = 3,
                     FaultPolicy policy = FaultPolicy::correct);

  Step step(const PrsBlock& prev, const ChannelHook& hook = {});

  const PackedLnp& lnp() const noexcept { return lnp_; }
  // Immutable snapshot; replaced as a whole on reconfiguration.
  std::shared_ptr<const RnsContext> context() const noexcept { return ctx_; }
  const std::vector<std::size_t>& physical_channels() const noexcept { return physical_; }
  const std::vector<std::uint64_t>& excluded_moduli() const noexcept { return excluded_; }
  unsigned threshold() const noexcept { return threshold_; }
  FaultPolicy policy() const noexcept { return policy_; }

 private:
  PackedLnp lnp_;
  std::shared_ptr<const RnsContext> ctx_;
  std::vector<std::size_t> physical_;
  std::vector<std::uint64_t> excluded_;
  unsigned threshold_;
  FaultPolicy policy_;
  std::optional<std::size_t> streak_channel_;
  unsigned streak_ = 0;
};

}  // namespace prsg
