#include "prsg/lfsr.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace prsg {

namespace {

int parse_int(std::string_view s, const std::string& context) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw std::invalid_argument("malformed integer in '" + context + "'");
  }
  return value;
}

}  // namespace

TapPolynomial TapPolynomial::create(int degree, std::vector<int> taps) {
  if (degree < 2) throw std::invalid_argument("polynomial degree must be at least 2");
  if (taps.empty()) throw std::invalid_argument("tap set must not be empty");
  for (int t : taps) {
    if (t < 1 || t >= degree) {
      throw std::invalid_argument("tap " + std::to_string(t) + " out of range [1, " +
                                  std::to_string(degree - 1) + "]");
    }
  }
  std::sort(taps.begin(), taps.end());
  if (std::adjacent_find(taps.begin(), taps.end()) != taps.end()) {
    throw std::invalid_argument("duplicate tap");
  }

  TapPolynomial p;
  p.degree_ = degree;
  p.taps_ = std::move(taps);
  p.coefficients_.assign(static_cast<std::size_t>(degree), 0);
  p.coefficients_[0] = 1;
  for (int t : p.taps_) p.coefficients_[static_cast<std::size_t>(t)] = 1;
  return p;
}

std::string TapPolynomial::to_string() const {
  std::ostringstream os;
  os << degree_ << ':';
  for (std::size_t i = 0; i < taps_.size(); ++i) os << (i ? "," : "") << taps_[i];
  return os.str();
}

std::string TapPolynomial::to_polynomial_string() const {
  auto term = [](int e) -> std::string {
    if (e == 1) return "x";
    return "x^" + std::to_string(e);
  };
  std::string s = term(degree_);
  for (auto it = taps_.rbegin(); it != taps_.rend(); ++it) s += " + " + term(*it);
  return s + " + 1";
}

TapPolynomial parse_polynomial(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("polynomial must look like 'degree:t1,t2,...', got '" + text + "'");
  }
  const int degree = parse_int(std::string_view(text).substr(0, colon), text);
  std::vector<int> taps;
  std::string_view rest = std::string_view(text).substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    taps.push_back(parse_int(rest.substr(0, comma), text));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
    if (rest.empty()) throw std::invalid_argument("trailing comma in '" + text + "'");
  }
  return TapPolynomial::create(degree, std::move(taps));
}

std::uint8_t feedback_bit(const TapPolynomial& poly, const Bits& reg) {
  if (reg.size() != poly.coefficients().size()) {
    throw std::invalid_argument("register length does not match polynomial degree");
  }
  return dot(poly.coefficients(), reg);
}

StepResult step(const TapPolynomial& poly, const LfsrState& state) {
  const std::uint8_t fb = feedback_bit(poly, state.reg);
  StepResult r;
  r.output = state.reg.front() & 1u;
  r.state.reg.assign(state.reg.begin() + 1, state.reg.end());
  r.state.reg.push_back(fb);
  r.state.step_index = state.step_index + 1;
  return r;
}

GenerateResult generate(const TapPolynomial& poly, LfsrState state, std::size_t n) {
  if (state.reg.size() != static_cast<std::size_t>(poly.degree())) {
    throw std::invalid_argument("register length does not match polynomial degree");
  }
  GenerateResult out;
  out.stream.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = step(poly, state);
    out.stream.push_back(r.output);
    state = std::move(r.state);
  }
  out.state = std::move(state);
  return out;
}

BitMatrix companion_matrix(const TapPolynomial& poly) {
  const auto n = static_cast<std::size_t>(poly.degree());
  BitMatrix m(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m.set(i, i + 1, true);
  for (std::size_t j = 0; j < n; ++j) m.set(n - 1, j, poly.coefficients()[j]);
  return m;
}

BitMatrix block_matrix(const TapPolynomial& poly, std::uint64_t span) {
  if (span < 1) throw std::invalid_argument("block span must be at least 1");
  return companion_matrix(poly).pow(span);
}

PrsBlock PrsBlock::from_column(const Bits& column, std::uint64_t index) {
  return PrsBlock{Bits(column.rbegin(), column.rend()), index};
}

Bits PrsBlock::column() const { return Bits(bits.rbegin(), bits.rend()); }

PrsBlock block_step(const BitMatrix& info_matrix, const PrsBlock& block) {
  if (!info_matrix.square() || info_matrix.cols() != block.bits.size()) {
    throw std::invalid_argument("block_step: dimension mismatch");
  }
  return PrsBlock{info_matrix.apply(block.bits), block.index + 1};
}

Bits generate_by_blocks(const BitMatrix& info_matrix, const LfsrState& seed, std::size_t n) {
  Bits out;
  out.reserve(n + seed.reg.size());
  PrsBlock block = seed_block(seed);
  while (out.size() < n) {
    out.insert(out.end(), block.bits.begin(), block.bits.end());
    block = block_step(info_matrix, block);
  }
  out.resize(n);
  return out;
}

}  // namespace prsg
