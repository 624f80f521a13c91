#include "prsg/rns.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace prsg {

namespace {

BigInt product(std::span<const std::uint64_t> values) {
  BigInt p = 1;
  for (auto v : values) p *= v;
  return p;
}

std::uint64_t reduce(const BigInt& value, std::uint64_t m) { return static_cast<std::uint64_t>(value % m); }

std::vector<std::uint64_t> parse_list(std::string_view text, const std::string& context) {
  std::vector<std::uint64_t> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw std::invalid_argument("malformed modulus list '" + context + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw std::invalid_argument("trailing comma in '" + context + "'");
  }
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

ModuliSet ModuliSet::create(std::vector<std::uint64_t> info, std::vector<std::uint64_t> redundant,
                            std::size_t required_bits) {
  if (info.empty()) throw std::invalid_argument("at least one informational modulus is required");
  ModuliSet s;
  s.info_ = std::move(info);
  s.redundant_ = std::move(redundant);
  s.all_ = s.info_;
  s.all_.insert(s.all_.end(), s.redundant_.begin(), s.redundant_.end());
  s.required_bits_ = required_bits;

  for (auto m : s.all_) {
    if (m < 2 || m >= kMaxModulus) {
      throw std::invalid_argument("modulus " + std::to_string(m) + " outside [2, 2^32)");
    }
  }
  for (std::size_t i = 1; i < s.all_.size(); ++i) {
    if (s.all_[i] <= s.all_[i - 1]) {
      throw std::invalid_argument("moduli must be strictly ascending, informational before redundant");
    }
  }
  for (std::size_t i = 0; i < s.all_.size(); ++i) {
    for (std::size_t k = i + 1; k < s.all_.size(); ++k) {
      if (std::gcd(s.all_[i], s.all_[k]) != 1) {
        throw std::invalid_argument("moduli " + std::to_string(s.all_[i]) + " and " + std::to_string(s.all_[k]) +
                                    " are not coprime");
      }
    }
  }
  s.operating_range_ = product(s.info_);
  s.full_range_ = product(s.all_);
  if (s.operating_range_ <= (BigInt{1} << required_bits)) {
    throw std::invalid_argument("operating range " + s.operating_range_.str() + " does not exceed 2^" +
                                std::to_string(required_bits));
  }
  return s;
}

std::string ModuliSet::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < info_.size(); ++i) os << (i ? "," : "") << info_[i];
  os << ':';
  for (std::size_t i = 0; i < redundant_.size(); ++i) os << (i ? "," : "") << redundant_[i];
  return os.str();
}

ModuliSet build_moduli_set(std::vector<std::uint64_t> info, std::vector<std::uint64_t> redundant,
                           std::size_t required_bits) {
  if (redundant.empty()) throw std::invalid_argument("at least one redundant modulus is required");
  return ModuliSet::create(std::move(info), std::move(redundant), required_bits);
}

ModuliSet auto_moduli(std::size_t required_bits, std::size_t redundancy) {
  if (redundancy < 1) throw std::invalid_argument("auto moduli need at least one redundant base");
  const BigInt bound = BigInt{1} << required_bits;
  std::vector<std::uint64_t> info;
  std::vector<std::uint64_t> redundant;
  BigInt range = 1;
  std::uint64_t candidate = 2;
  while (range <= bound) {
    if (is_prime(candidate)) {
      info.push_back(candidate);
      range *= candidate;
    }
    ++candidate;
  }
  while (redundant.size() < redundancy) {
    if (is_prime(candidate)) redundant.push_back(candidate);
    ++candidate;
  }
  return build_moduli_set(std::move(info), std::move(redundant), required_bits);
}

ModuliSet parse_moduli(const std::string& text, std::size_t required_bits) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("moduli must look like 'info,...:redundant,...' or 'auto:<k>'");
  }
  const std::string head = text.substr(0, colon);
  const std::string tail = text.substr(colon + 1);
  if (head == "auto") {
    const auto k = parse_list(tail, text);
    if (k.size() != 1) throw std::invalid_argument("auto moduli take a single redundancy count");
    return auto_moduli(required_bits, k.front());
  }
  return build_moduli_set(parse_list(head, text), parse_list(tail, text), required_bits);
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  __int128 old_r = static_cast<__int128>(a % m), r = m;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    const __int128 q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  if (old_r != 1) throw std::logic_error("no modular inverse: operands are not coprime");
  __int128 inv = old_s % static_cast<__int128>(m);
  if (inv < 0) inv += m;
  return static_cast<std::uint64_t>(inv);
}

ResidueLnp encode_lnp_residues(const PackedLnp& lnp, const ModuliSet& moduli) {
  ResidueLnp r;
  r.moduli = moduli.all();
  r.alpha.reserve(moduli.size());
  for (auto m : moduli.all()) {
    std::vector<std::uint64_t> row;
    row.reserve(lnp.size());
    for (const auto& h : lnp.coefficients()) row.push_back(reduce(h, m));
    r.alpha.push_back(std::move(row));
  }
  return r;
}

std::uint64_t eval_channel(const ResidueLnp& rlnp, std::size_t channel, std::span<const std::uint8_t> x) {
  const auto m = rlnp.moduli.at(channel);
  const auto& alpha = rlnp.alpha.at(channel);
  if (x.size() != alpha.size()) throw std::invalid_argument("eval_channel: input length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] & 1u)) continue;
    acc += alpha[j];
    if (acc >= m) acc -= m;
  }
  return acc;
}

ResidueVector eval_channels(const ResidueLnp& rlnp, std::span<const std::uint8_t> x) {
  ResidueVector out(rlnp.channels());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = eval_channel(rlnp, t, x);
  return out;
}

ResidueVector to_residues(const BigInt& value, std::span<const std::uint64_t> moduli) {
  ResidueVector out;
  out.reserve(moduli.size());
  for (auto m : moduli) out.push_back(reduce(value, m));
  return out;
}

CrtPlan::CrtPlan(std::span<const std::uint64_t> moduli, std::vector<std::size_t> channels)
    : channels_(std::move(channels)) {
  if (channels_.empty()) throw std::invalid_argument("CRT plan needs at least one channel");
  for (auto c : channels_) {
    if (c >= moduli.size()) throw std::invalid_argument("CRT plan channel out of range");
    subset_moduli_.push_back(moduli[c]);
  }
  modulus_ = product(subset_moduli_);
  for (auto m : subset_moduli_) {
    BigInt cofactor = modulus_ / m;
    const auto inv = mod_inverse(reduce(cofactor, m), m);
    weights_.push_back(cofactor * inv);
    cofactors_.push_back(std::move(cofactor));
    inverses_.push_back(inv);
  }
}

CrtPlan full_plan(const ModuliSet& moduli) {
  std::vector<std::size_t> channels(moduli.size());
  std::iota(channels.begin(), channels.end(), std::size_t{0});
  return CrtPlan(moduli.all(), std::move(channels));
}

BigInt reconstruct_crt(const ResidueVector& values, const CrtPlan& plan) {
  BigInt acc = 0;
  for (std::size_t s = 0; s < plan.channels_.size(); ++s) {
    const auto c = plan.channels_[s];
    if (c >= values.size()) throw std::invalid_argument("reconstruct_crt: residue vector too short");
    acc += plan.weights_[s] * values[c];
  }
  return acc % plan.modulus_;
}

RangeStatus range_check(const BigInt& value, const ModuliSet& moduli) {
  return (value >= 0 && value < moduli.operating_range()) ? RangeStatus::ok : RangeStatus::detected_error;
}

BasisTable::BasisTable(const ModuliSet& moduli) {
  const auto n = moduli.size();
  bases_.assign(n, std::vector<BigInt>(n, BigInt{0}));
  reduced_moduli_.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const BigInt reduced = moduli.full_range() / moduli.modulus(j);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const auto mi = moduli.modulus(i);
      const BigInt cofactor = reduced / mi;
      bases_[j][i] = cofactor * mod_inverse(reduce(cofactor, mi), mi);
    }
    reduced_moduli_.push_back(reduced);
  }
}

BigInt projection(const ResidueVector& values, const BasisTable& table, std::size_t excluded) {
  if (values.size() != table.size()) throw std::invalid_argument("projection: residue vector size mismatch");
  BigInt acc = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i != excluded) acc += table.basis(i, excluded) * values[i];
  }
  return acc % table.reduced_modulus(excluded);
}

Localization localize_fault(const ResidueVector& values, const ModuliSet& moduli, const BasisTable& table) {
  if (moduli.redundant().size() < 2) {
    throw std::invalid_argument("fault localization needs at least two redundant moduli");
  }
  if (values.size() != moduli.size() || table.size() != moduli.size()) {
    throw std::invalid_argument("localize_fault: size mismatch");
  }
  Localization loc;
  loc.value = reconstruct_crt(values, full_plan(moduli));
  if (range_check(loc.value, moduli) == RangeStatus::ok) return loc;

  std::optional<BigInt> candidate;
  for (std::size_t j = 0; j < values.size(); ++j) {
    BigInt p = projection(values, table, j);
    if (p < moduli.operating_range()) {
      loc.in_range.push_back(j);
      candidate = std::move(p);
    }
  }
  if (loc.in_range.size() == 1) {
    loc.kind = Localization::Kind::faulty_channel;
    loc.channel = loc.in_range.front();
    loc.value = std::move(*candidate);
  } else {
    loc.kind = Localization::Kind::ambiguous;
  }
  return loc;
}

ModuliSet reconfigure(const ModuliSet& moduli, std::size_t channel) {
  if (channel >= moduli.size()) throw std::invalid_argument("reconfigure: no such channel");
  auto info = moduli.info();
  auto redundant = moduli.redundant();
  if (moduli.is_informational(channel)) {
    if (redundant.empty()) {
      throw std::invalid_argument("reconfigure: no redundant modulus left to take over an informational channel");
    }
    info.erase(info.begin() + static_cast<std::ptrdiff_t>(channel));
    info.push_back(redundant.front());
    redundant.erase(redundant.begin());
  } else {
    redundant.erase(redundant.begin() + static_cast<std::ptrdiff_t>(channel - moduli.info().size()));
  }
  return ModuliSet::create(std::move(info), std::move(redundant), moduli.required_bits());
}

RnsContext RnsContext::make(const PackedLnp& lnp, ModuliSet moduli) {
  if (moduli.operating_range() <= (BigInt{1} << lnp.total_width())) {
    throw std::invalid_argument("operating range too small for the packed LNP");
  }
  auto residues = encode_lnp_residues(lnp, moduli);
  auto plan = full_plan(moduli);
  std::optional<BasisTable> table;
  if (moduli.redundant().size() >= 2) table.emplace(moduli);
  return RnsContext{std::move(moduli), std::move(residues), std::move(plan), std::move(table)};
}

std::string to_string(BlockStatus status) {
  switch (status) {
    case BlockStatus::ok: return "ok";
    case BlockStatus::corrected: return "corrected";
    case BlockStatus::detected: return "detected";
    case BlockStatus::ambiguous: return "ambiguous";
  }
  return "unknown";
}

ProtectedStep decode_residues(const RnsContext& ctx, const PackedLnp& lnp, const ResidueVector& values,
                              std::uint64_t block_index, FaultPolicy policy) {
  ProtectedStep out;
  out.value = reconstruct_crt(values, ctx.plan);
  if (range_check(out.value, ctx.moduli) == RangeStatus::ok) {
    out.block = extract_block(lnp, out.value, block_index);
    return out;
  }
  if (!ctx.can_localize() || policy == FaultPolicy::detect_only) {
    out.status = BlockStatus::detected;
    return out;
  }
  auto loc = localize_fault(values, ctx.moduli, *ctx.table);
  if (loc.kind == Localization::Kind::faulty_channel) {
    out.status = BlockStatus::corrected;
    out.channel = loc.channel;
    out.value = std::move(loc.value);
    out.block = extract_block(lnp, out.value, block_index);
  } else {
    out.status = BlockStatus::ambiguous;
  }
  return out;
}

ProtectedStep protected_step(const RnsContext& ctx, const PackedLnp& lnp, const PrsBlock& prev,
                             FaultPolicy policy) {
  return decode_residues(ctx, lnp, eval_channels(ctx.residues, prev.bits), prev.index + 1, policy);
}

ProtectedGenerator::ProtectedGenerator(PackedLnp lnp, ModuliSet moduli, unsigned threshold, FaultPolicy policy)
    : lnp_(std::move(lnp)), threshold_(threshold), policy_(policy) {
  if (threshold_ < 1) throw std::invalid_argument("permanent-fault threshold must be at least 1");
  ctx_ = std::make_shared<const RnsContext>(RnsContext::make(lnp_, std::move(moduli)));
  physical_.resize(ctx_->moduli.size());
  std::iota(physical_.begin(), physical_.end(), std::size_t{0});
}

ProtectedGenerator::Step ProtectedGenerator::step(const PrsBlock& prev, const ChannelHook& hook) {
  const auto ctx = ctx_;
  auto values = eval_channels(ctx->residues, prev.bits);
  if (hook) hook(values, physical_);

  Step out;
  out.result = decode_residues(*ctx, lnp_, values, prev.index + 1, policy_);
  if (out.result.status != BlockStatus::corrected) {
    streak_ = 0;
    streak_channel_.reset();
    return out;
  }

  const auto physical = physical_.at(*out.result.channel);
  out.physical_channel = physical;
  if (streak_channel_ == physical) {
    ++streak_;
  } else {
    streak_channel_ = physical;
    streak_ = 1;
  }
  if (streak_ < threshold_) return out;

  const auto current = *out.result.channel;
  try {
    auto next = reconfigure(ctx->moduli, current);
    const auto dropped = ctx->moduli.modulus(current);
    ctx_ = std::make_shared<const RnsContext>(RnsContext::make(lnp_, std::move(next)));
    // Reconfiguration keeps the remaining moduli in ascending order, so the
    // physical numbering just loses the dropped entry.
    physical_.erase(physical_.begin() + static_cast<std::ptrdiff_t>(current));
    excluded_.push_back(dropped);
    out.excluded_modulus = dropped;
  } catch (const std::invalid_argument&) {
    // Exclusion would break the operating range; keep correcting instead.
  }
  streak_ = 0;
  streak_channel_.reset();
  return out;
}

}  // namespace prsg
