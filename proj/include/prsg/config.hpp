#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prsg/fault_injection.hpp"
#include "prsg/lfsr.hpp"

namespace prsg {

enum class OutputFormat { ascii, hex };

/// Everything needed to run a generator, as read from a config file or the
/// command line.
///
/// File format: UTF-8 `key = value` lines under [generator], [rns] and
/// [faults] sections; `#` starts a comment. `fault` may repeat.
///
///   [generator]
///   poly = 4:1
///   seed = 1010          # leftmost bit is x_p, the first one emitted
///   mode = rns
///   length = 17
///   format = ascii
///   selectors = 1111     # parity mode only, comma separated
///
///   [rns]
///   moduli = 13,17,19:23,29   # or auto:<k>
///   threshold = 3
///   policy = correct          # or detect-only
///
///   [faults]
///   fault = channel[0]@2:add=1
struct RunConfig {
  std::optional<TapPolynomial> poly;
  std::optional<Bits> seed;
  Mode mode = Mode::serial;
  std::size_t length = 0;
  OutputFormat format = OutputFormat::ascii;
  std::vector<Bits> selectors;
  std::optional<std::string> moduli;
  unsigned threshold = 3;
  FaultPolicy policy = FaultPolicy::correct;
  std::vector<FaultSpec> faults;

  bool operator==(const RunConfig&) const = default;
};

// Throws std::invalid_argument with a line number on malformed input.
RunConfig parse_config(std::string_view text);
std::string dump_config(const RunConfig& config);

RunConfig load_config(const std::string& path);

// Checks mode-specific fields and resolves the moduli against the packed
// LNP width. Throws std::invalid_argument on any inconsistency.
GeneratorConfig resolve(const RunConfig& config);

std::string to_string(FaultPolicy policy);
FaultPolicy parse_policy(std::string_view text);

std::vector<Bits> parse_selectors(std::string_view text);

}  // namespace prsg
